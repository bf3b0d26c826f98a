#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cep/cep.hpp"

namespace cep::test {

inline std::string fixture_path(const std::string& name) { return std::string(CEP_FIXTURES) + "/" + name + ".json"; }
inline ProofGraph fixture(const std::string& name) { return load_proof_graph(fixture_path(name)); }
inline nlohmann::json fixture_json(const std::string& name) { return nlohmann::json::parse(read_file(fixture_path(name))); }

inline TracePairQuery root_query(const ProofGraph& p)
{
    const Node& r = p.node(p.root());
    return {p.root(), r.ant_values.front(), r.con_values.front()};
}

struct GenOptions {
    int max_nodes = 5;
    int max_values = 2;      // per side per node
    int max_weight = 2;
    bool injective = false;
    double pair_prob = 0.8;
    double uniform_left = 0.0; // chance that an edge uses one weight for all left pairs
};

/// Random proof document. Node n0 is the root; values are a0, a1, ... and
/// c0, c1, ...; every node has at least one value per side.
inline nlohmann::json random_proof_json(std::mt19937_64& rng, const GenOptions& o = {})
{
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto coin = [&](double pr) { return std::bernoulli_distribution(pr)(rng); };
    const int n = uni(1, o.max_nodes);

    auto values = [&](char prefix) {
        std::vector<std::string> all;
        for (int i = 0; i < o.max_values; ++i)
            all.push_back(std::string(1, prefix) + std::to_string(i));
        std::vector<std::string> vs;
        while (vs.empty())
            for (const auto& v : all)
                if (coin(0.6))
                    vs.push_back(v);
        return vs;
    };

    std::vector<std::vector<std::string>> ant(n), con(n);
    std::vector<std::vector<int>> kids(n);
    for (int i = 0; i < n; ++i) {
        ant[i] = values('a');
        con[i] = values('c');
        const int k = coin(0.25) ? 0 : uni(1, 2);
        std::vector<int> targets(n);
        for (int t = 0; t < n; ++t)
            targets[t] = t;
        std::shuffle(targets.begin(), targets.end(), rng);
        for (int c = 0; c < std::min(k, n); ++c)
            kids[i].push_back(targets[c]);
    }

    nlohmann::json doc;
    doc["root"] = "n0";
    doc["nodes"] = nlohmann::json::array();
    doc["delta"] = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
        nlohmann::json jn;
        jn["id"] = "n" + std::to_string(i);
        jn["rule"] = kids[i].empty() ? "ax" : "r" + std::to_string(kids[i].size());
        jn["axiom"] = kids[i].empty();
        jn["ant_values"] = ant[i];
        jn["con_values"] = con[i];
        std::vector<std::string> children;
        for (int c : kids[i])
            children.push_back("n" + std::to_string(c));
        jn["children"] = children;
        std::vector<std::string> ground, excluded;
        for (const auto& c : con[i]) {
            if (coin(kids[i].empty() ? 0.6 : 0.2))
                ground.push_back(c);
            if (coin(0.1))
                excluded.push_back(c);
        }
        jn["ground"] = ground;
        jn["excluded"] = excluded;
        nlohmann::json eq = nlohmann::json::array();
        if (kids[i].empty())
            for (const auto& a : ant[i])
                for (const auto& c : con[i])
                    if (coin(0.5))
                        eq.push_back({a, c});
        jn["equates"] = eq;
        doc["nodes"].push_back(jn);

        for (std::size_t ci = 0; ci < kids[i].size(); ++ci) {
            const int t = kids[i][ci];
            for (Side side : {Side::left, Side::right}) {
                const auto& from = side == Side::left ? ant[i] : con[i];
                const auto& to = side == Side::left ? ant[t] : con[t];
                const bool uniform = side == Side::left && coin(o.uniform_left);
                const int uw = uni(0, o.max_weight);
                nlohmann::json pairs = nlohmann::json::array();
                std::set<std::string> used_targets;
                for (const auto& f : from)
                    for (const auto& g : to) {
                        if (!coin(o.pair_prob))
                            continue;
                        if (o.injective && !used_targets.insert(g).second)
                            continue;
                        pairs.push_back({f, g, uniform ? uw : uni(0, o.max_weight)});
                    }
                if (!pairs.empty())
                    doc["delta"].push_back({{"from", "n" + std::to_string(i)},
                                            {"child_index", ci},
                                            {"side", to_string(side)},
                                            {"pairs", pairs}});
            }
        }
    }
    return doc;
}

inline ProofGraph random_proof(std::mt19937_64& rng, const GenOptions& o = {})
{
    return parse_proof_graph(random_proof_json(rng, o));
}

/// Every query (node n0 with one of its value pairs).
inline std::vector<TracePairQuery> root_queries(const ProofGraph& p)
{
    std::vector<TracePairQuery> qs;
    const Node& r = p.node(p.root());
    for (ValueId a : r.ant_values)
        for (ValueId c : r.con_values)
            qs.push_back({p.root(), a, c});
    return qs;
}

/// A random proof passing every applicability gate of the decision pipeline
/// for its first root query.
inline std::pair<ProofGraph, TracePairQuery> random_restricted(std::mt19937_64& rng, GenOptions o = {})
{
    o.injective = true;
    if (o.uniform_left == 0.0)
        o.uniform_left = 0.8;
    for (;;) {
        ProofGraph p = random_proof(rng, o);
        const TracePairQuery q = root_query(p);
        const ValidationReport vr = validate(p);
        if (!vr.structurally_valid() || !vr.trace_injective)
            continue;
        if (!check_global_soundness(p).sound)
            continue;
        if (!check_restrictions(p, q).pass())
            continue;
        return {std::move(p), q};
    }
}

// --- independent oracles -------------------------------------------------------

/// Ordinals below w^w as dense coefficient vectors indexed by exponent.
struct DenseOrdinal {
    std::vector<std::uint64_t> coef; // coef[e] is the coefficient of w^e

    static DenseOrdinal of(const Ordinal& o)
    {
        DenseOrdinal d;
        for (const auto& t : o.terms()) {
            if (d.coef.size() <= t.exponent)
                d.coef.resize(t.exponent + 1, 0);
            d.coef[t.exponent] = t.coefficient;
        }
        return d;
    }

    int degree() const
    {
        for (int e = static_cast<int>(coef.size()) - 1; e >= 0; --e)
            if (coef[e] != 0)
                return e;
        return -1;
    }

    /// a + b: the terms of a below the leading exponent of b are absorbed.
    friend DenseOrdinal add(const DenseOrdinal& a, const DenseOrdinal& b)
    {
        const int db = b.degree();
        if (db < 0)
            return a;
        DenseOrdinal r;
        r.coef.assign(std::max(a.coef.size(), b.coef.size()), 0);
        for (std::size_t e = db + 1; e < a.coef.size(); ++e)
            r.coef[e] = a.coef[e];
        for (int e = 0; e <= db; ++e)
            r.coef[e] = b.coef[e];
        if (static_cast<std::size_t>(db) < a.coef.size())
            r.coef[db] += a.coef[db];
        return r;
    }

    /// Lexicographic comparison from the highest exponent down.
    friend int compare(const DenseOrdinal& a, const DenseOrdinal& b)
    {
        const std::size_t n = std::max(a.coef.size(), b.coef.size());
        for (std::size_t i = n; i-- > 0;) {
            const std::uint64_t x = i < a.coef.size() ? a.coef[i] : 0;
            const std::uint64_t y = i < b.coef.size() ? b.coef[i] : 0;
            if (x != y)
                return x < y ? -1 : 1;
        }
        return 0;
    }

    bool same(const Ordinal& o) const { return compare(*this, of(o)) == 0; }
};

inline Ordinal random_ordinal(std::mt19937_64& rng, int max_exp = 3, int max_coef = 4)
{
    std::vector<Ordinal::Term> terms;
    for (int e = max_exp; e >= 0; --e)
        if (std::bernoulli_distribution(0.5)(rng))
            terms.push_back({static_cast<std::uint32_t>(e),
                             static_cast<std::uint64_t>(std::uniform_int_distribution<int>(1, max_coef)(rng))});
    return Ordinal::from_terms(terms);
}

/// Reverse sum of the weights along a trace, computed by the dense oracle.
inline DenseOrdinal oracle_prog(const ProofGraph& p, const Path& path, const Trace& t)
{
    DenseOrdinal acc;
    for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
        const auto ci = p.child_index(path[i], path[i + 1]);
        const auto w = p.delta(path[i], *ci, t.side, t.values[i], t.values[i + 1]);
        acc = add(DenseOrdinal::of(*w), acc);
    }
    return acc;
}

/// All traces of exactly `len` values following a prefix of `path` from `v`.
inline std::vector<std::vector<ValueId>> oracle_traces(const ProofGraph& p, Side side, const Path& path, ValueId v,
                                                       std::size_t len)
{
    std::vector<std::vector<ValueId>> out;
    std::vector<ValueId> cur{v};
    std::function<void()> go = [&] {
        if (cur.size() == len) {
            out.push_back(cur);
            return;
        }
        const std::size_t i = cur.size() - 1;
        const auto ci = p.child_index(path[i], path[i + 1]);
        for (ValueId x : p.node(path[i + 1]).values(side))
            if (p.delta(path[i], *ci, side, cur.back(), x)) {
                cur.push_back(x);
                go();
                cur.pop_back();
            }
    };
    if (len >= 1 && len <= path.size() && p.has_value(path[0], side, v))
        go();
    return out;
}

/// Every path with at most `max_len` nodes starting at `from`.
inline std::vector<Path> all_paths(const ProofGraph& p, NodeId from, std::size_t max_len)
{
    std::vector<Path> out;
    Path cur{from};
    std::function<void()> go = [&] {
        out.push_back(cur);
        if (cur.size() == max_len)
            return;
        for (const Edge& e : p.node(cur.back()).children) {
            cur.push_back(e.target);
            go();
            cur.pop_back();
        }
    };
    go();
    return out;
}

inline Word path_word(const ProofGraph& p, const Path& path)
{
    Word w;
    for (NodeId n : path)
        w.push_back(p.node(n).name);
    return w;
}

/// Brute-force run enumeration over the unsorted transition list.
struct BruteRun {
    std::vector<StateId> states;
    DenseOrdinal value; // reverse sum of the transition weights
    bool accepting = false;
};

inline std::vector<BruteRun> brute_runs(const WeightedAutomaton& a, const Word& w)
{
    const auto all = a.transitions();
    std::vector<BruteRun> out;
    BruteRun cur;
    cur.states.push_back(a.initial());
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == w.size()) {
            cur.accepting = a.is_final(cur.states.back());
            out.push_back(cur);
            return;
        }
        for (const Transition& t : all) {
            if (t.from != cur.states.back() || a.letter(t.letter).name != w[i])
                continue;
            const BruteRun saved = cur;
            cur.states.push_back(t.to);
            cur.value = add(DenseOrdinal::of(t.weight), cur.value);
            go(i + 1);
            cur = saved;
        }
    };
    go(0);
    return out;
}

/// Max over accepting runs; nullopt stands for bottom.
inline std::optional<DenseOrdinal> brute_language_value(const WeightedAutomaton& a, const Word& w)
{
    std::optional<DenseOrdinal> best;
    for (const BruteRun& r : brute_runs(a, w))
        if (r.accepting && (!best || compare(*best, r.value) < 0))
            best = r.value;
    return best;
}

inline std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t max_len)
{
    std::vector<Word> out{{}};
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].size() < max_len)
            for (const auto& l : alphabet) {
                Word w = out[i];
                w.push_back(l);
                out.push_back(std::move(w));
            }
    return out;
}

inline std::vector<std::string> alphabet_of(const WeightedAutomaton& a)
{
    std::vector<std::string> out;
    for (const LetterInfo& l : a.letters())
        out.push_back(l.name);
    return out;
}

} // namespace cep::test
