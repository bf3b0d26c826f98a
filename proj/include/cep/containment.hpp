#pragma once

// Quantitative containment L_b <= L_a (or L_b < L_a on the domain of b)
// between weighted automata: a bounded word oracle and the lag-profile engine.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cep/automata.hpp"
#include "cep/detail/parallel.hpp"
#include "cep/ordinal.hpp"

namespace cep {

class containment_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ContainmentStatus { verified, refuted, unknown_saturated, unknown_bound };

inline const char* to_string(ContainmentStatus s)
{
    switch (s) {
    case ContainmentStatus::verified: return "VERIFIED";
    case ContainmentStatus::refuted: return "REFUTED";
    case ContainmentStatus::unknown_saturated: return "UNKNOWN_SATURATED";
    case ContainmentStatus::unknown_bound: return "UNKNOWN_BOUND";
    }
    return "UNKNOWN_BOUND";
}

enum class Engine { lagset, oracle };

inline const char* to_string(Engine e) { return e == Engine::lagset ? "lagset" : "oracle"; }

struct Counterexample {
    Word word;
    Weight b_value;
    Weight a_value;
};

struct ContainmentVerdict {
    ContainmentStatus status = ContainmentStatus::unknown_bound;
    std::optional<Counterexample> counterexample;
    Engine engine = Engine::oracle;
    bool strict = false;
    std::uint64_t parameter = 0; // length bound for the oracle, lag cap for lagset
    std::uint64_t explored = 0;  // words or configurations visited
    bool clamped = false;        // lagset: some profile entry was clamped to the cap
    std::uint64_t spurious = 0;  // lagset: abstract violations not confirmed on words
    std::string note;
};

/// True when the values violate the queried relation on one word.
inline bool violates(const Weight& b_value, const Weight& a_value, bool strict)
{
    if (b_value.is_bottom())
        return false;
    if (a_value.is_bottom())
        return true;
    return strict ? !(b_value < a_value) : (a_value < b_value);
}

namespace detail {

/// Letters of both automata, node letters first, then by name.
struct JointAlphabet {
    std::vector<std::string> names;
    std::vector<std::optional<LetterId>> in_b;
    std::vector<std::optional<LetterId>> in_a;

    JointAlphabet(const WeightedAutomaton& b, const WeightedAutomaton& a)
    {
        std::map<std::pair<int, std::string>, bool> all;
        for (const LetterInfo& l : b.letters())
            all.emplace(std::make_pair(letter_rank(l.kind), l.name), true);
        for (const LetterInfo& l : a.letters())
            all.emplace(std::make_pair(letter_rank(l.kind), l.name), true);
        std::set<std::string> taken;
        for (const auto& [k, _] : all) {
            if (!taken.insert(k.second).second)
                continue;
            names.push_back(k.second);
            in_b.push_back(b.find_letter(k.second));
            in_a.push_back(a.find_letter(k.second));
        }
    }
};

using ValueMap = std::map<StateId, Ordinal>;

inline ValueMap step_values(const WeightedAutomaton& a, const ValueMap& cur, std::optional<LetterId> l)
{
    ValueMap next;
    if (!l)
        return next;
    for (const auto& [s, v] : cur) {
        auto [lo, hi] = a.step(s, *l);
        for (const Transition* t = lo; t != hi; ++t) {
            Ordinal nv = t->weight + v;
            auto [it, inserted] = next.emplace(t->to, nv);
            if (!inserted && it->second < nv)
                it->second = std::move(nv);
        }
    }
    return next;
}

inline Weight accepted_value(const WeightedAutomaton& a, const ValueMap& m)
{
    Weight best;
    for (const auto& [s, v] : m)
        if (a.is_final(s))
            best = trop_oplus(best, Weight(v));
    return best;
}

} // namespace detail

/// Checks every word of length at most `max_len` in the domain of `b`, in
/// length-lexicographic order. Never answers VERIFIED.
inline ContainmentVerdict oracle_compare(const WeightedAutomaton& b, const WeightedAutomaton& a, bool strict,
                                         std::uint64_t max_len)
{
    ContainmentVerdict v;
    v.engine = Engine::oracle;
    v.strict = strict;
    v.parameter = max_len;
    const detail::JointAlphabet sigma(b, a);
    const auto useful_b = useful_states(b);

    struct Item {
        std::vector<std::uint32_t> word; // indices into sigma
        detail::ValueMap bv, av;
    };
    std::vector<Item> layer{{{}, {{b.initial(), Ordinal()}}, {{a.initial(), Ordinal()}}}};
    for (std::uint64_t len = 0;; ++len) {
        for (const Item& it : layer) {
            ++v.explored;
            const Weight lb = detail::accepted_value(b, it.bv);
            const Weight la = detail::accepted_value(a, it.av);
            if (violates(lb, la, strict)) {
                Word w;
                for (auto i : it.word)
                    w.push_back(sigma.names[i]);
                v.status = ContainmentStatus::refuted;
                v.counterexample = Counterexample{std::move(w), lb, la};
                return v;
            }
        }
        if (len == max_len)
            break;
        std::vector<Item> next;
        for (const Item& it : layer)
            for (std::uint32_t i = 0; i < sigma.names.size(); ++i) {
                detail::ValueMap bv = detail::step_values(b, it.bv, sigma.in_b[i]);
                // Only words that can still be accepted by b matter.
                std::erase_if(bv, [&](const auto& e) { return !useful_b[e.first]; });
                if (bv.empty())
                    continue;
                Item n{it.word, std::move(bv), detail::step_values(a, it.av, sigma.in_a[i])};
                n.word.push_back(i);
                next.push_back(std::move(n));
            }
        if (next.empty())
            break;
        layer = std::move(next);
    }
    v.status = ContainmentStatus::unknown_bound;
    return v;
}

struct LagsetOptions {
    std::uint64_t lag_cap = 64;
    std::uint64_t max_configurations = 2'000'000;
};

/// Lag-profile exploration. A configuration records, per state of each
/// automaton, the best prefix value relative to the smallest one. Entries of
/// `b` are raised and entries of `a` lowered or dropped to keep every value
/// within the lag cap; each such change can only add violations, so a run
/// without abstract violations proves containment. Abstract violations are
/// replayed on their word: confirmed ones refute, others make the result
/// UNKNOWN_SATURATED.
inline ContainmentVerdict decide_containment(const WeightedAutomaton& b, const WeightedAutomaton& a, bool strict,
                                             const LagsetOptions& opt = {})
{
    ContainmentVerdict v;
    v.engine = Engine::lagset;
    v.strict = strict;
    v.parameter = opt.lag_cap;
    const std::uint64_t cap = opt.lag_cap;

    auto natural = [](const WeightedAutomaton& m) {
        std::vector<std::vector<std::pair<LetterId, std::pair<StateId, std::uint64_t>>>> out(m.state_count());
        for (StateId s = 0; s < m.state_count(); ++s)
            for (const Transition& t : m.out(s)) {
                auto w = t.weight.finite_value();
                if (!w)
                    throw containment_error("infinite weight " + t.weight.to_string() + " on a transition");
                if (*w > std::numeric_limits<std::uint32_t>::max())
                    throw containment_error("weight too large");
                out[s].push_back({t.letter, {t.to, *w}});
            }
        return out;
    };
    natural(b);
    natural(a);

    const auto useful_b = useful_states(b);
    const auto useful_a = useful_states(a);
    // A state is frozen when no positive weight can be read from it any more.
    auto frozen_states = [](const WeightedAutomaton& m, const std::vector<bool>& useful) {
        std::vector<bool> hot(m.state_count(), false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (StateId s = 0; s < m.state_count(); ++s) {
                if (hot[s] || !useful[s])
                    continue;
                for (const Transition& t : m.out(s))
                    if (useful[t.to] && (!t.weight.is_zero() || hot[t.to])) {
                        hot[s] = true;
                        changed = true;
                        break;
                    }
            }
        }
        std::vector<bool> frozen(m.state_count());
        for (StateId s = 0; s < m.state_count(); ++s)
            frozen[s] = !hot[s];
        return frozen;
    };
    const auto frozen_a = frozen_states(a, useful_a);
    const detail::JointAlphabet sigma(b, a);

    using Entries = std::vector<std::pair<StateId, std::uint64_t>>;
    struct Config {
        Entries b, a;
        auto operator<=>(const Config&) const = default;
    };
    struct Node {
        Config c;
        std::optional<std::size_t> parent;
        std::uint32_t letter = 0;
    };

    auto word_of = [&](const std::vector<Node>& nodes, std::size_t i) {
        Word w;
        for (std::optional<std::size_t> k = i; nodes[*k].parent; k = nodes[*k].parent)
            w.push_back(sigma.names[nodes[*k].letter]);
        std::reverse(w.begin(), w.end());
        return w;
    };

    auto abstract_violation = [&](const Config& c) {
        std::optional<std::uint64_t> mb, ma;
        for (const auto& [s, x] : c.b)
            if (b.is_final(s))
                mb = std::max(mb.value_or(0), x);
        if (!mb)
            return false;
        for (const auto& [s, x] : c.a)
            if (a.is_final(s))
                ma = std::max(ma.value_or(0), x);
        return !ma || (strict ? *mb >= *ma : *mb > *ma);
    };

    struct Succ {
        std::optional<Config> c;
        bool clamped = false;
    };
    auto successor = [&](const Config& c, std::uint32_t li) {
        Succ out;
        std::map<StateId, std::uint64_t> nb, na;
        if (auto l = sigma.in_b[li])
            for (const auto& [s, x] : c.b) {
                auto [lo, hi] = b.step(s, *l);
                for (const Transition* t = lo; t != hi; ++t) {
                    if (!useful_b[t->to])
                        continue;
                    const std::uint64_t nx = x + *t->weight.finite_value();
                    auto [it, ins] = nb.emplace(t->to, nx);
                    if (!ins)
                        it->second = std::max(it->second, nx);
                }
            }
        if (nb.empty())
            return out; // b can no longer accept: nothing to check below
        if (auto l = sigma.in_a[li])
            for (const auto& [s, x] : c.a) {
                auto [lo, hi] = a.step(s, *l);
                for (const Transition* t = lo; t != hi; ++t) {
                    if (!useful_a[t->to])
                        continue;
                    const std::uint64_t nx = x + *t->weight.finite_value();
                    auto [it, ins] = na.emplace(t->to, nx);
                    if (!ins)
                        it->second = std::max(it->second, nx);
                }
            }
        std::uint64_t maxb = 0, minb = std::numeric_limits<std::uint64_t>::max();
        for (const auto& [s, x] : nb) {
            maxb = std::max(maxb, x);
            minb = std::min(minb, x);
        }
        const std::uint64_t floor = maxb > cap ? maxb - cap : 0;
        if (minb < floor) {
            out.clamped = true;
            for (auto& [s, x] : nb)
                x = std::max(x, floor);
            minb = floor;
        }
        Config r;
        for (const auto& [s, x] : na) {
            if (frozen_a[s] && (strict ? x <= minb : x < minb))
                continue; // can never beat any b value again
            if (x < floor) {
                out.clamped = true;
                continue;
            }
            std::uint64_t y = x;
            if (y > maxb + cap) {
                out.clamped = true;
                y = maxb + cap;
            }
            r.a.emplace_back(s, y);
        }
        std::uint64_t lo = minb;
        for (const auto& [s, x] : r.a)
            lo = std::min(lo, x);
        for (auto& [s, x] : r.a)
            x -= lo;
        for (const auto& [s, x] : nb)
            r.b.emplace_back(s, x - lo);
        out.c = std::move(r);
        return out;
    };

    std::vector<Node> nodes;
    std::map<Config, std::size_t> index;
    Config init;
    if (useful_b[b.initial()])
        init.b.emplace_back(b.initial(), 0);
    if (useful_a[a.initial()])
        init.a.emplace_back(a.initial(), 0);
    if (init.b.empty()) {
        v.status = ContainmentStatus::verified;
        v.note = "b accepts no word";
        return v;
    }
    nodes.push_back({init, std::nullopt, 0});
    index.emplace(init, 0);

    auto handle_violation = [&](std::size_t i) -> bool {
        const Word w = word_of(nodes, i);
        const Weight lb = language_value(b, w);
        const Weight la = language_value(a, w);
        if (!violates(lb, la, strict)) {
            ++v.spurious;
            return false;
        }
        // Report the least counterexample no longer than this one.
        ContainmentVerdict least = oracle_compare(b, a, strict, w.size());
        v.status = ContainmentStatus::refuted;
        v.counterexample = least.counterexample ? *least.counterexample : Counterexample{w, lb, la};
        return true;
    };

    if (abstract_violation(init) && handle_violation(0)) {
        v.explored = 1;
        return v;
    }

    std::vector<std::size_t> frontier{0};
    while (!frontier.empty()) {
        const std::size_t k = sigma.names.size();
        auto succ = detail::parallel_map<std::vector<Succ>>(frontier.size(), [&](std::size_t i) {
            std::vector<Succ> out(k);
            for (std::uint32_t li = 0; li < k; ++li)
                out[li] = successor(nodes[frontier[i]].c, li);
            return out;
        });
        std::vector<std::size_t> next;
        for (std::size_t i = 0; i < frontier.size(); ++i)
            for (std::uint32_t li = 0; li < k; ++li) {
                Succ& s = succ[i][li];
                if (!s.c)
                    continue;
                v.clamped = v.clamped || s.clamped;
                auto [it, inserted] = index.emplace(*s.c, nodes.size());
                if (!inserted)
                    continue;
                nodes.push_back({std::move(*s.c), frontier[i], li});
                const std::size_t id = nodes.size() - 1;
                if (abstract_violation(nodes[id].c) && handle_violation(id)) {
                    v.explored = nodes.size();
                    return v;
                }
                next.push_back(id);
                if (nodes.size() >= opt.max_configurations) {
                    v.explored = nodes.size();
                    v.status = ContainmentStatus::unknown_saturated;
                    v.note = "configuration limit reached";
                    return v;
                }
            }
        frontier = std::move(next);
    }
    v.explored = nodes.size();
    if (v.spurious > 0) {
        v.status = ContainmentStatus::unknown_saturated;
        v.note = "abstract violations not confirmed on their words";
    } else {
        v.status = ContainmentStatus::verified;
    }
    return v;
}

} // namespace cep
