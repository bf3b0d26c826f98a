#pragma once

// End-to-end decision of the trace value orderings (<= and <) for a query
// (node, antecedent value, consequent value), plus a bounded oracle that
// checks the ordering definition directly on enumerated traces.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cep/automata.hpp"
#include "cep/containment.hpp"
#include "cep/proof_graph.hpp"
#include "cep/restrictions.hpp"
#include "cep/soundness.hpp"
#include "cep/traces.hpp"

namespace cep {

enum class OrderStatus { holds, fails, not_applicable, unknown };

inline const char* to_string(OrderStatus s)
{
    switch (s) {
    case OrderStatus::holds: return "HOLDS";
    case OrderStatus::fails: return "FAILS";
    case OrderStatus::not_applicable: return "NOT_APPLICABLE";
    case OrderStatus::unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

struct DecisionOptions {
    Engine engine = Engine::lagset;
    std::optional<std::uint64_t> lag_cap; // default derived from the thresholds
    std::uint64_t oracle_len = 12;
};

struct OrderVerdict {
    bool strict = false;
    OrderStatus status = OrderStatus::unknown;
    std::string reason; // short machine-friendly tag of the deciding stage
    ValidationReport validation;
    std::optional<SoundnessReport> soundness;
    std::optional<RestrictionsReport> restrictions;
    std::optional<bool> grounded;
    std::optional<ContainmentVerdict> containment;
    /// Right-hand trace realizing the consequent value of the counterexample word.
    std::optional<PathTrace> witness_trace;
};

/// Default lag cap: 4 * N * max(1, maxStep) * |Nodes|.
inline std::uint64_t default_lag_cap(const ProofGraph& p, const Thresholds& t)
{
    const std::uint64_t step = std::max<std::uint64_t>(1, t.max_step.finite_value().value_or(1));
    using detail::checked_mul;
    return checked_mul(checked_mul(checked_mul(4, t.n_bound.value_or(1)), step), std::max<std::uint64_t>(1, p.size()));
}

namespace detail {
/// The accepting run of `b` on `w` with the largest value, read back as a
/// right-hand trace.
inline std::optional<PathTrace> best_right_trace(const WeightedAutomaton& b, const Word& w)
{
    std::optional<Run> best;
    for (Run& r : run_values(b, w))
        if (!r.value.is_bottom() && (!best || best->value < r.value))
            best = std::move(r);
    if (!best)
        return std::nullopt;
    PathTrace pt{{}, {Side::right, {}}};
    for (StateId s : best->states) {
        const StateInfo& st = b.state(s);
        if (st.tag == StateTag::node_value) {
            pt.path.push_back(*st.node);
            pt.trace.values.push_back(*st.value);
        }
    }
    return pt;
}
} // namespace detail

inline OrderVerdict decide_order(const ProofGraph& p, const TracePairQuery& q, bool strict, const DecisionOptions& opt = {})
{
    check_query(p, q);
    OrderVerdict v;
    v.strict = strict;
    v.validation = validate(p);
    if (!v.validation.structurally_valid())
        throw proof_error("invalid proof: " + v.validation.violations.front().message);

    v.soundness = check_global_soundness(p);
    if (!v.soundness->sound) {
        v.status = OrderStatus::not_applicable;
        v.reason = "not globally sound";
        return v;
    }
    if (!v.validation.trace_injective) {
        v.status = OrderStatus::not_applicable;
        v.reason = "not trace injective";
        return v;
    }
    v.restrictions = check_restrictions(p, q);
    if (!v.restrictions->pass()) {
        v.status = OrderStatus::not_applicable;
        v.reason = !v.restrictions->finitely_progressing.pass() ? "not finitely progressing"
                   : !v.restrictions->dynamic.pass()            ? "not dynamic"
                                                                : "not balanced";
        return v;
    }
    const Thresholds& t = v.restrictions->thresholds;
    if (!t.n_bound) {
        v.status = OrderStatus::not_applicable;
        v.reason = "maxStep infinite";
        return v;
    }

    const WeightedAutomaton b = build_consequent(p, q);
    v.grounded = is_grounded(b, p);
    if (!*v.grounded) {
        v.status = OrderStatus::fails;
        v.reason = "consequent automaton not grounded";
        return v;
    }
    if (*t.n_bound > std::numeric_limits<std::uint32_t>::max())
        throw restriction_error("approximation bound too large");
    const WeightedAutomaton a = build_antecedent_approx(p, q, static_cast<std::uint32_t>(*t.n_bound));

    if (opt.engine == Engine::lagset)
        v.containment = decide_containment(b, a, strict, {opt.lag_cap.value_or(default_lag_cap(p, t))});
    else
        v.containment = oracle_compare(b, a, strict, opt.oracle_len);

    switch (v.containment->status) {
    case ContainmentStatus::verified:
        v.status = OrderStatus::holds;
        v.reason = "containment verified";
        break;
    case ContainmentStatus::refuted:
        v.status = OrderStatus::fails;
        v.reason = "containment refuted";
        v.witness_trace = detail::best_right_trace(b, v.containment->counterexample->word);
        break;
    default:
        v.status = OrderStatus::unknown;
        v.reason = "containment undecided";
        break;
    }
    return v;
}

struct DefinitionOracleResult {
    bool counterexample_found = false;
    std::optional<PathTrace> counterexample; // the unmatched positive maximal right trace
    Ordinal right_size;
    std::size_t right_traces_checked = 0;
    std::uint64_t max_path_len = 0;
};

/// Bounded check of the ordering definition: every positive maximal
/// right-hand trace from the consequent value (paths up to `max_path_len`)
/// must be matched by a left-hand trace from the antecedent value along the
/// same path with at least (or strictly more) size and the terminal
/// condition (grounded, or ending at an axiom with full length and equated
/// final values).
inline DefinitionOracleResult definition_oracle(const ProofGraph& p, const TracePairQuery& q, bool strict,
                                                std::uint64_t max_path_len)
{
    check_query(p, q);
    DefinitionOracleResult r;
    r.max_path_len = max_path_len;
    for (const PathTrace& rt : enumerate_right_maximal(p, q.node, q.con_value, max_path_len)) {
        ++r.right_traces_checked;
        const Ordinal rsize = prog_points(p, rt.path, rt.trace);
        const RightTraceClass cls = classify_right_trace(p, rt.path, rt.trace);
        const std::size_t n = rt.trace.values.size();
        const NodeId last = rt.path[n - 1];
        const ValueId last_value = rt.trace.values.back();

        bool matched = false;
        std::vector<ValueId> left{q.ant_value};
        Ordinal lsize; // running reverse sum of the left trace
        std::function<void()> search = [&] {
            if (matched)
                return;
            const std::size_t k = left.size();
            const bool size_ok = strict ? rsize < lsize : rsize <= lsize;
            const bool end_ok = cls.grounded ||
                                (cls.partially_maximal && k == n &&
                                 std::binary_search(p.node(last).equates.begin(), p.node(last).equates.end(),
                                                    std::make_pair(left.back(), last_value)));
            if (size_ok && end_ok) {
                matched = true;
                return;
            }
            if (k == n)
                return;
            const std::size_t ci = *p.child_index(rt.path[k - 1], rt.path[k]);
            for (const TracePair& tp : p.node(rt.path[k - 1]).children[ci].left)
                if (tp.from == left.back()) {
                    const Ordinal saved = lsize;
                    lsize = tp.weight + lsize;
                    left.push_back(tp.to);
                    search();
                    left.pop_back();
                    lsize = saved;
                }
        };
        search();
        if (!matched) {
            r.counterexample_found = true;
            r.counterexample = rt;
            r.right_size = rsize;
            return r;
        }
    }
    return r;
}

} // namespace cep
