#pragma once

// Weighted automata over the max / reverse-sum semiring, the consequent and
// antecedent automata built from a proof, run semantics and ambiguity.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cep/ordinal.hpp"
#include "cep/proof_graph.hpp"

namespace cep {

using StateId = std::uint32_t;
using LetterId = std::uint32_t;

class automaton_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StateTag { plain, start, node_value, bottom, top, top_chain };

inline const char* to_string(StateTag t)
{
    switch (t) {
    case StateTag::plain: return "plain";
    case StateTag::start: return "start";
    case StateTag::node_value: return "node_value";
    case StateTag::bottom: return "bottom";
    case StateTag::top: return "top";
    case StateTag::top_chain: return "top_chain";
    }
    return "plain";
}

/// Node letters sort before pair letters; other letters (raw automata) are
/// grouped with node letters.
enum class LetterKind { symbol, node, pair };

inline const char* to_string(LetterKind k)
{
    switch (k) {
    case LetterKind::symbol: return "symbol";
    case LetterKind::node: return "node";
    case LetterKind::pair: return "pair";
    }
    return "symbol";
}

struct StateInfo {
    std::string name;
    StateTag tag = StateTag::plain;
    bool final = false;
    std::optional<NodeId> node;    // node_value, top_chain
    std::optional<ValueId> value;  // node_value
    std::uint32_t level = 0;       // top_chain
};

struct LetterInfo {
    std::string name;
    LetterKind kind = LetterKind::symbol;
};

inline int letter_rank(LetterKind k) { return k == LetterKind::pair ? 1 : 0; }

struct Transition {
    StateId from = 0;
    LetterId letter = 0;
    StateId to = 0;
    Ordinal weight;
};

enum class AutomatonKind { raw, consequent, antecedent_full, antecedent_approx };

inline const char* to_string(AutomatonKind k)
{
    switch (k) {
    case AutomatonKind::raw: return "raw";
    case AutomatonKind::consequent: return "consequent";
    case AutomatonKind::antecedent_full: return "antecedent_full";
    case AutomatonKind::antecedent_approx: return "antecedent_approx";
    }
    return "raw";
}

using Word = std::vector<std::string>;

class WeightedAutomaton {
public:
    AutomatonKind kind = AutomatonKind::raw;
    std::uint32_t approx_level = 0; // n for antecedent_approx

    StateId add_state(StateInfo s)
    {
        if (state_ids_.count(s.name))
            throw automaton_error("duplicate state \"" + s.name + "\"");
        const auto id = static_cast<StateId>(states_.size());
        state_ids_.emplace(s.name, id);
        states_.push_back(std::move(s));
        out_.emplace_back();
        return id;
    }

    LetterId intern_letter(const std::string& name, LetterKind kind = LetterKind::symbol)
    {
        auto [it, inserted] = letter_ids_.emplace(name, static_cast<LetterId>(letters_.size()));
        if (inserted)
            letters_.push_back({name, kind});
        return it->second;
    }

    /// Adds a transition; repeated (from, letter, to) triples are rejected.
    void add_transition(StateId from, LetterId letter, StateId to, Ordinal weight)
    {
        for (const Transition& t : out_.at(from))
            if (t.letter == letter && t.to == to)
                throw automaton_error("repeated transition " + states_[from].name + " -" + letters_[letter].name + "-> " +
                                      states_[to].name);
        out_[from].push_back({from, letter, to, std::move(weight)});
        sorted_ = false;
    }

    void set_initial(StateId s) { initial_ = s; }
    void set_final(StateId s, bool f = true) { states_.at(s).final = f; }

    /// Sorts outgoing transitions by (letter, target) for lookups.
    void seal()
    {
        for (auto& ts : out_)
            std::sort(ts.begin(), ts.end(), [](const Transition& a, const Transition& b) {
                return std::tie(a.letter, a.to) < std::tie(b.letter, b.to);
            });
        sorted_ = true;
    }

    StateId initial() const noexcept { return initial_; }
    std::size_t state_count() const noexcept { return states_.size(); }
    std::size_t letter_count() const noexcept { return letters_.size(); }
    const StateInfo& state(StateId s) const { return states_.at(s); }
    const std::vector<StateInfo>& states() const noexcept { return states_; }
    const LetterInfo& letter(LetterId l) const { return letters_.at(l); }
    const std::vector<LetterInfo>& letters() const noexcept { return letters_; }
    bool is_final(StateId s) const { return states_.at(s).final; }

    std::optional<StateId> find_state(const std::string& name) const
    {
        auto it = state_ids_.find(name);
        if (it == state_ids_.end())
            return std::nullopt;
        return it->second;
    }
    std::optional<LetterId> find_letter(const std::string& name) const
    {
        auto it = letter_ids_.find(name);
        if (it == letter_ids_.end())
            return std::nullopt;
        return it->second;
    }

    const std::vector<Transition>& out(StateId s) const { return out_.at(s); }

    /// Transitions leaving `s` on letter `l`.
    std::pair<const Transition*, const Transition*> step(StateId s, LetterId l) const
    {
        if (!sorted_)
            throw automaton_error("automaton not sealed");
        const auto& ts = out_.at(s);
        auto lo = std::lower_bound(ts.begin(), ts.end(), l, [](const Transition& t, LetterId x) { return t.letter < x; });
        auto hi = std::upper_bound(lo, ts.end(), l, [](LetterId x, const Transition& t) { return x < t.letter; });
        return {ts.data() + (lo - ts.begin()), ts.data() + (hi - ts.begin())};
    }

    std::vector<Transition> transitions() const
    {
        std::vector<Transition> all;
        for (const auto& ts : out_)
            all.insert(all.end(), ts.begin(), ts.end());
        return all;
    }

    std::size_t transition_count() const
    {
        std::size_t n = 0;
        for (const auto& ts : out_)
            n += ts.size();
        return n;
    }

    /// Letter ids of `w`, or nullopt when some letter is not in the alphabet.
    std::optional<std::vector<LetterId>> encode(const Word& w) const
    {
        std::vector<LetterId> out;
        out.reserve(w.size());
        for (const auto& s : w) {
            auto l = find_letter(s);
            if (!l)
                return std::nullopt;
            out.push_back(*l);
        }
        return out;
    }

private:
    std::vector<StateInfo> states_;
    std::vector<LetterInfo> letters_;
    std::vector<std::vector<Transition>> out_;
    std::map<std::string, StateId> state_ids_;
    std::map<std::string, LetterId> letter_ids_;
    StateId initial_ = 0;
    bool sorted_ = false;
};

// --- construction from proofs -------------------------------------------------

struct TracePairQuery {
    NodeId node = 0;
    ValueId ant_value = 0;
    ValueId con_value = 0;
};

inline TracePairQuery make_query(const ProofGraph& p, const std::string& node, const std::string& ant, const std::string& con)
{
    const NodeId n = p.require_node(node);
    return {n, p.require_value(n, Side::left, ant), p.require_value(n, Side::right, con)};
}

inline void check_query(const ProofGraph& p, const TracePairQuery& q)
{
    if (q.node >= p.size())
        throw query_error("unknown node index " + std::to_string(q.node));
    if (q.ant_value >= p.value_count() || !p.has_value(q.node, Side::left, q.ant_value))
        throw query_error("unknown antecedent value at node \"" + p.node(q.node).name + "\"");
    if (q.con_value >= p.value_count() || !p.has_value(q.node, Side::right, q.con_value))
        throw query_error("unknown consequent value at node \"" + p.node(q.node).name + "\"");
}

/// Name of the pair letter (T, c): "({a,b},c)", antecedent names sorted.
inline std::string pair_letter_name(const ProofGraph& p, const std::vector<ValueId>& ants, ValueId con)
{
    std::vector<std::string> names;
    for (ValueId v : ants)
        names.push_back(p.value_name(v));
    std::sort(names.begin(), names.end());
    std::string s = "({";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i)
            s += ',';
        s += names[i];
    }
    return s + "}," + p.value_name(con) + ")";
}

inline std::string node_value_name(const ProofGraph& p, NodeId n, ValueId v)
{
    return "(" + p.node(n).name + "," + p.value_name(v) + ")";
}

inline const std::string kBottomName = "\xE2\x8A\xA5";  // ⊥
inline const std::string kTopName = "\xE2\x8A\xA4";     // ⊤

namespace detail {

/// Builds only the part of an automaton reachable from its initial state.
class ProofAutomatonBuilder {
public:
    ProofAutomatonBuilder(const ProofGraph& p, WeightedAutomaton& a) : p_(p), a_(a) {}

    StateId start(const std::string& name)
    {
        const StateId s = a_.add_state({name, StateTag::start, false, {}, {}, 0});
        a_.set_initial(s);
        return s;
    }

    StateId node_value(NodeId n, ValueId v)
    {
        return get({StateTag::node_value, n, v, 0}, [&] {
            return StateInfo{node_value_name(p_, n, v), StateTag::node_value, false, n, v, 0};
        });
    }
    StateId bottom()
    {
        return get({StateTag::bottom, 0, 0, 0}, [&] { return StateInfo{kBottomName, StateTag::bottom, true, {}, {}, 0}; });
    }
    StateId top()
    {
        return get({StateTag::top, 0, 0, 0}, [&] { return StateInfo{kTopName, StateTag::top, true, {}, {}, 0}; });
    }
    StateId top_chain(NodeId n, std::uint32_t level)
    {
        return get({StateTag::top_chain, n, 0, level}, [&] {
            return StateInfo{kTopName + "[" + p_.node(n).name + "," + std::to_string(level) + "]", StateTag::top_chain, true,
                             n, {}, level};
        });
    }

    LetterId node_letter(NodeId n) { return a_.intern_letter(p_.node(n).name, LetterKind::node); }
    LetterId pair_letter(const std::vector<ValueId>& ants, ValueId con)
    {
        return a_.intern_letter(pair_letter_name(p_, ants, con), LetterKind::pair);
    }

    bool fresh(StateId s) { return expanded_.insert(s).second; }

private:
    using Key = std::tuple<StateTag, NodeId, ValueId, std::uint32_t>;

    template <class Make>
    StateId get(const Key& k, Make&& make)
    {
        auto it = ids_.find(k);
        if (it != ids_.end())
            return it->second;
        const StateId s = a_.add_state(make());
        ids_.emplace(k, s);
        return s;
    }

    const ProofGraph& p_;
    WeightedAutomaton& a_;
    std::map<Key, StateId> ids_;
    std::set<StateId> expanded_;
};

} // namespace detail

/// The consequent automaton: runs follow right-hand traces from the query's
/// consequent value and accept exactly at positive maximal ones.
inline WeightedAutomaton build_consequent(const ProofGraph& p, const TracePairQuery& q)
{
    check_query(p, q);
    WeightedAutomaton a;
    a.kind = AutomatonKind::consequent;
    detail::ProofAutomatonBuilder b(p, a);
    const StateId init = b.start("q_C");
    const StateId first = b.node_value(q.node, q.con_value);
    a.add_transition(init, b.node_letter(q.node), first, Ordinal());

    std::deque<StateId> work{first};
    while (!work.empty()) {
        const StateId s = work.front();
        work.pop_front();
        if (!b.fresh(s) || a.state(s).tag != StateTag::node_value)
            continue;
        const NodeId n = *a.state(s).node;
        const ValueId v = *a.state(s).value;
        const Node& node = p.node(n);
        const bool excluded = p.is_excluded(n, v);
        const bool ground = p.is_ground(n, v);
        if (node.axiomatic()) {
            a.set_final(s, ground && !excluded);
            if (!ground && !excluded) {
                const StateId bot = b.bottom();
                a.add_transition(s, b.pair_letter(p.equated_with(n, v), v), bot, Ordinal());
            }
            continue;
        }
        a.set_final(s, p.is_terminal(n, Side::right, v) && !excluded);
        for (const Edge& e : node.children)
            for (const TracePair& tp : e.right)
                if (tp.from == v) {
                    const StateId t = b.node_value(e.target, tp.to);
                    a.add_transition(s, b.node_letter(e.target), t, tp.weight);
                    work.push_back(t);
                }
    }
    a.seal();
    return a;
}

/// The antecedent automaton with a single sink (n == nullopt) or with sink
/// chains of length n.
inline WeightedAutomaton build_antecedent(const ProofGraph& p, const TracePairQuery& q, std::optional<std::uint32_t> n)
{
    check_query(p, q);
    if (n && *n == 0)
        throw query_error("approximation level must be positive");
    WeightedAutomaton a;
    a.kind = n ? AutomatonKind::antecedent_approx : AutomatonKind::antecedent_full;
    a.approx_level = n.value_or(0);
    detail::ProofAutomatonBuilder b(p, a);
    const StateId init = b.start("q_A");
    const StateId first = b.node_value(q.node, q.ant_value);
    a.add_transition(init, b.node_letter(q.node), first, Ordinal());

    std::deque<StateId> work{first};
    while (!work.empty()) {
        const StateId s = work.front();
        work.pop_front();
        if (!b.fresh(s))
            continue;
        const StateInfo info = a.state(s);
        a.set_final(s, true);
        switch (info.tag) {
        case StateTag::node_value: {
            const NodeId nd = *info.node;
            const ValueId v = *info.value;
            const Node& node = p.node(nd);
            if (node.axiomatic()) {
                for (ValueId c : node.con_values) {
                    const auto ts = p.equated_with(nd, c);
                    if (std::binary_search(ts.begin(), ts.end(), v)) {
                        const StateId bot = b.bottom();
                        a.add_transition(s, b.pair_letter(ts, c), bot, Ordinal());
                        work.push_back(bot);
                    }
                }
            }
            for (const Edge& e : node.children) {
                const LetterId l = b.node_letter(e.target);
                for (const TracePair& tp : e.left)
                    if (tp.from == v) {
                        const StateId t = b.node_value(e.target, tp.to);
                        a.add_transition(s, l, t, tp.weight);
                        work.push_back(t);
                    }
                const StateId sink = n ? b.top_chain(e.target, 1) : b.top();
                a.add_transition(s, l, sink, Ordinal());
                work.push_back(sink);
            }
            break;
        }
        case StateTag::top:
            for (NodeId m = 0; m < p.size(); ++m)
                a.add_transition(s, b.node_letter(m), s, Ordinal());
            break;
        case StateTag::top_chain:
            for (NodeId m = 0; m < p.size(); ++m) {
                if (m != *info.node) {
                    a.add_transition(s, b.node_letter(m), s, Ordinal());
                } else if (info.level < *n) {
                    const StateId t = b.top_chain(m, info.level + 1);
                    a.add_transition(s, b.node_letter(m), t, Ordinal());
                    work.push_back(t);
                }
            }
            break;
        default:
            break;
        }
    }
    a.seal();
    return a;
}

inline WeightedAutomaton build_antecedent_full(const ProofGraph& p, const TracePairQuery& q)
{
    return build_antecedent(p, q, std::nullopt);
}

inline WeightedAutomaton build_antecedent_approx(const ProofGraph& p, const TracePairQuery& q, std::uint32_t n)
{
    if (n == 0)
        throw query_error("approximation level must be positive");
    return build_antecedent(p, q, n);
}

/// True when every reachable final node-value state carries a ground value.
inline bool is_grounded(const WeightedAutomaton& b, const ProofGraph& p)
{
    if (b.kind != AutomatonKind::consequent)
        throw automaton_error("groundedness applies to consequent automata");
    for (const StateInfo& s : b.states())
        if (s.final && s.tag == StateTag::node_value && !p.is_ground(*s.node, *s.value))
            return false;
    return true;
}

// --- run semantics --------------------------------------------------------------

struct Run {
    std::vector<StateId> states;
    Weight value; // bottom when not accepting
};

/// Every run from the initial state over `w`, in lexicographic order of
/// state sequences.
inline std::vector<Run> run_values(const WeightedAutomaton& a, const Word& w)
{
    std::vector<Run> out;
    const auto enc = a.encode(w);
    if (!enc)
        return out;
    std::vector<StateId> states{a.initial()};
    std::function<void(std::size_t, const Ordinal&)> go = [&](std::size_t i, const Ordinal& acc) {
        if (i == enc->size()) {
            const StateId last = states.back();
            out.push_back({states, a.is_final(last) ? Weight(acc) : Weight::bottom()});
            return;
        }
        auto [lo, hi] = a.step(states.back(), (*enc)[i]);
        for (const Transition* t = lo; t != hi; ++t) {
            states.push_back(t->to);
            go(i + 1, t->weight + acc);
            states.pop_back();
        }
    };
    go(0, Ordinal());
    std::sort(out.begin(), out.end(), [](const Run& x, const Run& y) { return x.states < y.states; });
    return out;
}

/// Per-state maxima of prefix run values after reading `w` (letter ids).
/// Exact because ordinal addition is monotone in its right argument.
inline std::map<StateId, Ordinal> state_values(const WeightedAutomaton& a, const std::vector<LetterId>& w)
{
    std::map<StateId, Ordinal> cur{{a.initial(), Ordinal()}};
    for (LetterId l : w) {
        std::map<StateId, Ordinal> next;
        for (const auto& [s, v] : cur) {
            auto [lo, hi] = a.step(s, l);
            for (const Transition* t = lo; t != hi; ++t) {
                Ordinal nv = t->weight + v;
                auto [it, inserted] = next.emplace(t->to, nv);
                if (!inserted && it->second < nv)
                    it->second = std::move(nv);
            }
        }
        cur = std::move(next);
        if (cur.empty())
            break;
    }
    return cur;
}

inline Weight language_value(const WeightedAutomaton& a, const Word& w)
{
    const auto enc = a.encode(w);
    if (!enc)
        return Weight::bottom();
    Weight best;
    for (const auto& [s, v] : state_values(a, *enc))
        if (a.is_final(s))
            best = trop_oplus(best, Weight(v));
    return best;
}

/// w is in the domain when some run over it is accepting.
inline bool in_domain(const WeightedAutomaton& a, const Word& w) { return !language_value(a, w).is_bottom(); }

// --- ambiguity -------------------------------------------------------------------

enum class Ambiguity { unambiguous, finite, infinite };

inline const char* to_string(Ambiguity a)
{
    switch (a) {
    case Ambiguity::unambiguous: return "unambiguous";
    case Ambiguity::finite: return "finite";
    case Ambiguity::infinite: return "infinite";
    }
    return "unambiguous";
}

/// States both reachable from the initial state and able to reach a final one.
inline std::vector<bool> useful_states(const WeightedAutomaton& a)
{
    const std::size_t n = a.state_count();
    std::vector<bool> acc(n, false), coacc(n, false);
    std::vector<std::vector<StateId>> rev(n);
    std::vector<StateId> stack{a.initial()};
    acc[a.initial()] = true;
    while (!stack.empty()) {
        const StateId s = stack.back();
        stack.pop_back();
        for (const Transition& t : a.out(s)) {
            rev[t.to].push_back(s);
            if (!acc[t.to]) {
                acc[t.to] = true;
                stack.push_back(t.to);
            }
        }
    }
    for (StateId s = 0; s < n; ++s)
        if (a.is_final(s) && acc[s]) {
            coacc[s] = true;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        const StateId s = stack.back();
        stack.pop_back();
        for (StateId r : rev[s])
            if (acc[r] && !coacc[r]) {
                coacc[r] = true;
                stack.push_back(r);
            }
    }
    std::vector<bool> useful(n);
    for (StateId s = 0; s < n; ++s)
        useful[s] = acc[s] && coacc[s];
    return useful;
}

namespace detail {

/// Synchronous successors of a tuple of states over useful states only.
template <std::size_t K>
void product_successors(const WeightedAutomaton& a, const std::vector<bool>& useful, const std::array<StateId, K>& s,
                        std::vector<std::array<StateId, K>>& out)
{
    out.clear();
    for (const Transition& t0 : a.out(s[0])) {
        if (!useful[t0.to])
            continue;
        std::array<StateId, K> cur{};
        cur[0] = t0.to;
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i == K) {
                out.push_back(cur);
                return;
            }
            auto [lo, hi] = a.step(s[i], t0.letter);
            for (const Transition* t = lo; t != hi; ++t)
                if (useful[t->to]) {
                    cur[i] = t->to;
                    go(i + 1);
                }
        };
        go(1);
    }
}

} // namespace detail

/// Witness of infinite ambiguity: states q != q' with q -w-> q, q -w-> q'
/// and q' -w-> q' for a common nonempty word w.
struct AmbiguityWitness {
    StateId q = 0;
    StateId q2 = 0;
};

inline std::optional<AmbiguityWitness> infinite_ambiguity_witness(const WeightedAutomaton& a)
{
    const auto useful = useful_states(a);
    const std::size_t n = a.state_count();
    using T = std::array<StateId, 3>;
    std::vector<T> succ;
    for (StateId q = 0; q < n; ++q) {
        if (!useful[q])
            continue;
        for (StateId q2 = 0; q2 < n; ++q2) {
            if (q2 == q || !useful[q2])
                continue;
            const T start{q, q, q2};
            const T goal{q, q2, q2};
            std::set<T> seen;
            std::vector<T> stack{start};
            bool found = false;
            while (!stack.empty() && !found) {
                const T cur = stack.back();
                stack.pop_back();
                detail::product_successors<3>(a, useful, cur, succ);
                for (const T& nx : succ) {
                    if (nx == goal) {
                        found = true;
                        break;
                    }
                    if (seen.insert(nx).second)
                        stack.push_back(nx);
                }
            }
            if (found)
                return AmbiguityWitness{q, q2};
        }
    }
    return std::nullopt;
}

inline Ambiguity ambiguity(const WeightedAutomaton& a)
{
    if (infinite_ambiguity_witness(a))
        return Ambiguity::infinite;
    // Unambiguous iff the trimmed self-product has only diagonal states.
    const auto useful = useful_states(a);
    if (!useful[a.initial()])
        return Ambiguity::unambiguous;
    using P = std::array<StateId, 2>;
    std::vector<P> succ;
    std::map<P, std::vector<P>> preds;
    std::set<P> seen{{a.initial(), a.initial()}};
    std::vector<P> stack{{a.initial(), a.initial()}};
    while (!stack.empty()) {
        const P cur = stack.back();
        stack.pop_back();
        detail::product_successors<2>(a, useful, cur, succ);
        for (const P& nx : succ) {
            preds[nx].push_back(cur);
            if (seen.insert(nx).second)
                stack.push_back(nx);
        }
    }
    std::set<P> coreach;
    for (const P& s : seen)
        if (a.is_final(s[0]) && a.is_final(s[1])) {
            coreach.insert(s);
            stack.push_back(s);
        }
    while (!stack.empty()) {
        const P cur = stack.back();
        stack.pop_back();
        for (const P& pr : preds[cur])
            if (coreach.insert(pr).second)
                stack.push_back(pr);
    }
    for (const P& s : coreach)
        if (s[0] != s[1])
            return Ambiguity::finite;
    return Ambiguity::unambiguous;
}

} // namespace cep
