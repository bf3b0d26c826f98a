#pragma once

// The three decidability restrictions relative to a query (finitely
// progressing, dynamic, balanced) and the structural thresholds W, in, C,
// maxStep and N.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cep/automata.hpp"
#include "cep/ordinal.hpp"
#include "cep/proof_graph.hpp"
#include "cep/traces.hpp"

namespace cep {

class restriction_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Thresholds {
    std::uint64_t trace_width = 0;     // W
    std::uint64_t in_degree = 0;       // in
    std::uint64_t cycle_threshold = 0; // C
    Ordinal max_step;
    std::optional<std::uint64_t> n_bound; // N, only when max_step is finite
};

namespace detail {
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        throw restriction_error("threshold overflow");
    return a * b;
}
inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b)
{
    if (b > std::numeric_limits<std::uint64_t>::max() - a)
        throw restriction_error("threshold overflow");
    return a + b;
}
} // namespace detail

/// Largest left trace pair weight anywhere in the proof (0 when none).
inline Ordinal max_left_step(const ProofGraph& p)
{
    Ordinal m;
    for (const Node& n : p.nodes())
        for (const Edge& e : n.children)
            for (const TracePair& tp : e.left)
                m = std::max(m, tp.weight);
    return m;
}

inline Thresholds compute_thresholds(const ProofGraph& p, const TracePairQuery& q)
{
    check_query(p, q);
    Thresholds t;
    for (const Node& n : p.nodes()) {
        t.trace_width = std::max<std::uint64_t>(t.trace_width, std::max(n.ant_values.size(), n.con_values.size()));
        t.cycle_threshold += static_cast<std::uint64_t>(n.ant_values.size()) * n.ant_values.size();
    }
    for (const auto& preds : p.predecessors())
        t.in_degree = std::max<std::uint64_t>(t.in_degree, preds.size());
    t.max_step = max_left_step(p);
    if (auto ms = t.max_step.finite_value()) {
        using detail::checked_add;
        using detail::checked_mul;
        t.n_bound = checked_add(checked_add(2, checked_mul(checked_mul(t.cycle_threshold, *ms), t.trace_width)),
                                t.trace_width);
    }
    return t;
}

struct EdgeRef {
    NodeId node = 0;
    std::size_t child_index = 0;
    Side side = Side::left;
    ValueId from = 0;
    ValueId to = 0;
    Ordinal weight;
};

struct FinitelyProgressingReport {
    bool left = true;
    bool right = true;
    std::vector<EdgeRef> offending;

    bool pass() const { return left && right; }
};

inline FinitelyProgressingReport check_finitely_progressing(const ProofGraph& p, const TracePairQuery& q)
{
    check_query(p, q);
    FinitelyProgressingReport r;
    for (Side side : {Side::left, Side::right}) {
        const ValueId start = side == Side::left ? q.ant_value : q.con_value;
        for (const NodeValue& s : reachable(p, side, {q.node, start})) {
            const Node& n = p.node(s.first);
            for (std::size_t i = 0; i < n.children.size(); ++i)
                for (const TracePair& tp : n.children[i].pairs(side))
                    if (tp.from == s.second && !tp.weight.is_finite()) {
                        (side == Side::left ? r.left : r.right) = false;
                        r.offending.push_back({s.first, i, side, tp.from, tp.to, tp.weight});
                    }
        }
    }
    return r;
}

struct DynamicReport {
    bool left = true;
    bool right = true;
    /// A zero-size cycle on the failing side.
    std::optional<PathTrace> witness;

    bool pass() const { return left && right; }
};

namespace detail {
/// A cycle in the zero-weight trace graph restricted to `nodes`, if any.
inline std::optional<PathTrace> zero_cycle(const ProofGraph& p, Side side, const std::set<NodeValue>& nodes)
{
    std::map<NodeValue, int> color; // 0 white, 1 on stack, 2 done
    std::vector<NodeValue> stack;
    std::optional<PathTrace> found;
    std::function<bool(const NodeValue&)> dfs = [&](const NodeValue& s) {
        color[s] = 1;
        stack.push_back(s);
        const Node& n = p.node(s.first);
        for (const Edge& e : n.children)
            for (const TracePair& tp : e.pairs(side)) {
                if (tp.from != s.second || !tp.weight.is_zero())
                    continue;
                const NodeValue t{e.target, tp.to};
                if (!nodes.count(t))
                    continue;
                if (color[t] == 1) {
                    auto it = std::find(stack.begin(), stack.end(), t);
                    PathTrace c{{}, {side, {}}};
                    for (; it != stack.end(); ++it) {
                        c.path.push_back(it->first);
                        c.trace.values.push_back(it->second);
                    }
                    c.path.push_back(t.first);
                    c.trace.values.push_back(t.second);
                    found = std::move(c);
                    return true;
                }
                if (color[t] == 0 && dfs(t))
                    return true;
            }
        stack.pop_back();
        color[s] = 2;
        return false;
    };
    for (const NodeValue& s : nodes)
        if (color[s] == 0 && dfs(s))
            return found;
    return std::nullopt;
}
} // namespace detail

inline DynamicReport check_dynamic(const ProofGraph& p, const TracePairQuery& q)
{
    check_query(p, q);
    DynamicReport r;
    for (Side side : {Side::left, Side::right}) {
        const ValueId start = side == Side::left ? q.ant_value : q.con_value;
        if (auto c = detail::zero_cycle(p, side, reachable(p, side, {q.node, start}))) {
            (side == Side::left ? r.left : r.right) = false;
            if (!r.witness)
                r.witness = std::move(c);
        }
    }
    return r;
}

struct BalancedReport {
    bool balanced = true;
    std::optional<BinaryCycle> witness;
    std::int64_t difference = 0; // Prog(first) - Prog(second) on the witness
};

inline BalancedReport check_balanced(const ProofGraph& p, const TracePairQuery& q)
{
    check_query(p, q);
    using Triple = std::tuple<NodeId, ValueId, ValueId>;
    struct Arc {
        Triple to;
        std::int64_t d;
    };
    const auto reach = reachable(p, Side::left, {q.node, q.ant_value});

    auto finite = [](const Ordinal& w) -> std::int64_t {
        auto v = w.finite_value();
        if (!v)
            throw restriction_error("infinite weight " + w.to_string() +
                                    " reached; the proof is not finitely progressing for this query");
        if (*v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max() / 4))
            throw restriction_error("weight too large");
        return static_cast<std::int64_t>(*v);
    };

    std::vector<Triple> verts;
    for (const auto& [n, x] : reach)
        for (const auto& [m, y] : reach)
            if (n == m)
                verts.emplace_back(n, x, y);
    std::map<Triple, std::vector<Arc>> adj;
    for (const Triple& s : verts) {
        const auto& [n, x, y] = s;
        auto& arcs = adj[s];
        for (const Edge& e : p.node(n).children)
            for (const TracePair& a : e.left)
                if (a.from == x)
                    for (const TracePair& b : e.left)
                        if (b.from == y)
                            arcs.push_back({{e.target, a.to, b.to}, finite(a.weight) - finite(b.weight)});
    }

    // Tarjan SCCs.
    std::map<Triple, int> index, low, comp;
    std::vector<Triple> stack;
    std::set<Triple> on_stack;
    int counter = 0, ncomp = 0;
    std::function<void(const Triple&)> strong = [&](const Triple& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        for (const Arc& a : adj[v]) {
            if (!index.count(a.to)) {
                strong(a.to);
                low[v] = std::min(low[v], low[a.to]);
            } else if (on_stack.count(a.to)) {
                low[v] = std::min(low[v], index[a.to]);
            }
        }
        if (low[v] == index[v]) {
            for (;;) {
                const Triple w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                comp[w] = ncomp;
                if (w == v)
                    break;
            }
            ++ncomp;
        }
    };
    for (const Triple& v : verts)
        if (!index.count(v))
            strong(v);

    BalancedReport r;
    std::set<int> done;
    for (const Triple& root : verts) {
        const int c = comp[root];
        if (!done.insert(c).second)
            continue;
        // Potentials by BFS from the component root along component arcs.
        std::map<Triple, std::int64_t> pot{{root, 0}};
        std::map<Triple, Triple> parent;
        std::deque<Triple> queue{root};
        while (!queue.empty()) {
            const Triple u = queue.front();
            queue.pop_front();
            for (const Arc& a : adj[u])
                if (comp[a.to] == c && !pot.count(a.to)) {
                    pot[a.to] = pot[u] + a.d;
                    parent[a.to] = u;
                    queue.push_back(a.to);
                }
        }
        for (const auto& [u, pu] : pot)
            for (const Arc& a : adj[u]) {
                if (comp[a.to] != c || pu + a.d == pot[a.to])
                    continue;
                // Closed walks root ->u ->v ->root and root ->v ->root differ by a
                // nonzero amount, so one of them, and then one of its simple
                // pieces, has nonzero total.
                auto tree_path = [&](Triple x) {
                    std::vector<Triple> path{x};
                    while (x != root) {
                        x = parent.at(x);
                        path.push_back(x);
                    }
                    std::reverse(path.begin(), path.end());
                    return path;
                };
                std::map<Triple, Triple> back_parent;
                std::deque<Triple> bq{a.to};
                std::set<Triple> seen{a.to};
                while (!bq.empty() && !seen.count(root)) {
                    const Triple x = bq.front();
                    bq.pop_front();
                    for (const Arc& b : adj[x])
                        if (comp[b.to] == c && seen.insert(b.to).second) {
                            back_parent[b.to] = x;
                            bq.push_back(b.to);
                        }
                }
                std::vector<Triple> back{root};
                for (Triple x = root; x != a.to;) {
                    x = back_parent.at(x);
                    back.push_back(x);
                }
                std::reverse(back.begin(), back.end()); // a.to ... root

                auto arc_d = [&](const Triple& x, const Triple& y) {
                    std::optional<std::int64_t> best;
                    for (const Arc& b : adj[x])
                        if (b.to == y)
                            best = b.d;
                    return *best;
                };
                auto walk_with = [&](std::vector<Triple> walk) {
                    walk.insert(walk.end(), back.begin() + 1, back.end());
                    return walk;
                };
                std::vector<Triple> w1 = tree_path(u);
                w1.push_back(a.to);
                w1 = walk_with(w1);
                std::vector<Triple> w2 = walk_with(tree_path(a.to));
                auto total = [&](const std::vector<Triple>& w) {
                    std::int64_t s = 0;
                    for (std::size_t i = 0; i + 1 < w.size(); ++i)
                        s += arc_d(w[i], w[i + 1]);
                    return s;
                };
                const std::vector<Triple>& walk = total(w1) != 0 ? w1 : w2;

                // Split the closed walk into simple cycles.
                std::vector<Triple> st;
                std::optional<std::vector<Triple>> simple;
                for (const Triple& x : walk) {
                    auto it = std::find(st.begin(), st.end(), x);
                    if (it != st.end()) {
                        std::vector<Triple> cyc(it, st.end());
                        cyc.push_back(x);
                        if (total(cyc) != 0 && !simple)
                            simple = cyc;
                        st.erase(it + 1, st.end());
                    } else {
                        st.push_back(x);
                    }
                }
                const std::vector<Triple> cyc = simple.value_or(walk);
                BinaryCycle bc;
                for (const auto& [n, x, y] : cyc) {
                    bc.path.push_back(n);
                    bc.first.push_back(x);
                    bc.second.push_back(y);
                }
                r.balanced = false;
                r.witness = std::move(bc);
                r.difference = total(cyc);
                return r;
            }
    }
    return r;
}

struct RestrictionsReport {
    FinitelyProgressingReport finitely_progressing;
    DynamicReport dynamic;
    std::optional<BalancedReport> balanced; // absent when not finitely progressing
    Thresholds thresholds;

    bool pass() const { return finitely_progressing.pass() && dynamic.pass() && balanced && balanced->balanced; }
};

inline RestrictionsReport check_restrictions(const ProofGraph& p, const TracePairQuery& q)
{
    RestrictionsReport r;
    r.finitely_progressing = check_finitely_progressing(p, q);
    r.dynamic = check_dynamic(p, q);
    if (r.finitely_progressing.left)
        r.balanced = check_balanced(p, q);
    r.thresholds = compute_thresholds(p, q);
    return r;
}

} // namespace cep
