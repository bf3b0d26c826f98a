#pragma once

// Paths, traces following them, trace sizes (reverse ordinal sums), maximal
// right-hand trace classification, bounded enumeration and simple cycles.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cep/ordinal.hpp"
#include "cep/proof_graph.hpp"

namespace cep {

using Path = std::vector<NodeId>;

struct Trace {
    Side side = Side::left;
    std::vector<ValueId> values;

    friend bool operator==(const Trace&, const Trace&) = default;
};

struct PathTrace {
    Path path;
    Trace trace;

    friend bool operator==(const PathTrace&, const PathTrace&) = default;
};

struct BinaryCycle {
    Path path;
    std::vector<ValueId> first;
    std::vector<ValueId> second;

    friend bool operator==(const BinaryCycle&, const BinaryCycle&) = default;
};

/// A (node, trace value) pair; the vertices of the trace graph.
using NodeValue = std::pair<NodeId, ValueId>;

inline void check_path(const ProofGraph& p, const Path& path)
{
    if (path.empty())
        throw query_error("empty path");
    for (NodeId n : path)
        if (n >= p.size())
            throw query_error("unknown node index " + std::to_string(n));
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (!p.child_index(path[i], path[i + 1]))
            throw query_error("\"" + p.node(path[i + 1]).name + "\" is not a child of \"" + p.node(path[i]).name + "\"");
}

namespace detail {
inline void check_trace_against_path(const ProofGraph& p, const Path& path, const Trace& t)
{
    check_path(p, path);
    if (t.values.empty())
        throw query_error("empty trace");
    if (t.values.size() > path.size())
        throw query_error("trace longer than its path");
    for (std::size_t i = 0; i < t.values.size(); ++i)
        if (t.values[i] >= p.value_count() || !p.has_value(path[i], t.side, t.values[i]))
            throw query_error("trace value at position " + std::to_string(i) + " is not a" +
                              (t.side == Side::left ? "n antecedent" : " consequent") + " value of \"" +
                              p.node(path[i]).name + "\"");
}
} // namespace detail

/// True when every consecutive pair of `t` is a trace pair on the aligned edge
/// of `path`. The trace may be shorter than the path.
inline bool follows(const ProofGraph& p, const Path& path, const Trace& t)
{
    detail::check_trace_against_path(p, path, t);
    for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
        const std::size_t ci = *p.child_index(path[i], path[i + 1]);
        if (!p.delta(path[i], ci, t.side, t.values[i], t.values[i + 1]))
            return false;
    }
    return true;
}

/// Size of `t` along `path`: the step weights summed in reverse order.
inline Ordinal prog_points(const ProofGraph& p, const Path& path, const Trace& t)
{
    if (!follows(p, path, t))
        throw query_error("trace does not follow path");
    Ordinal acc;
    for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
        const std::size_t ci = *p.child_index(path[i], path[i + 1]);
        acc = *p.delta(path[i], ci, t.side, t.values[i], t.values[i + 1]) + acc;
    }
    return acc;
}

struct RightTraceClass {
    bool maximal = false;
    bool positive = false;
    bool partially_maximal = false;
    bool fully_maximal = false;
    bool grounded = false;

    friend bool operator==(const RightTraceClass&, const RightTraceClass&) = default;
};

inline RightTraceClass classify_right_trace(const ProofGraph& p, const Path& path, const Trace& t)
{
    if (t.side != Side::right)
        throw query_error("classification applies to right-hand traces");
    if (!follows(p, path, t))
        throw query_error("trace does not follow path");
    const NodeId last = path[t.values.size() - 1];
    const ValueId v = t.values.back();
    RightTraceClass c;
    c.maximal = p.is_terminal(last, Side::right, v);
    c.positive = !p.is_excluded(last, v);
    c.partially_maximal = c.maximal && p.node(last).axiomatic();
    c.fully_maximal = c.maximal && !p.node(last).axiomatic();
    c.grounded = p.is_ground(last, v);
    return c;
}

namespace detail {
inline bool path_trace_less(const PathTrace& a, const PathTrace& b)
{
    return std::tie(a.path, a.trace.values) < std::tie(b.path, b.trace.values);
}

/// Visits every (path, trace) of equal lengths in 1..max_len starting at (n, v).
inline void for_each_trace(const ProofGraph& p, Side side, NodeId n, ValueId v, std::size_t max_len,
                           const std::function<void(const Path&, const std::vector<ValueId>&)>& visit)
{
    if (max_len == 0)
        return;
    Path path{n};
    std::vector<ValueId> vals{v};
    std::function<void()> go = [&] {
        visit(path, vals);
        if (path.size() == max_len)
            return;
        const Node& cur = p.node(path.back());
        for (const Edge& e : cur.children)
            for (const TracePair& tp : e.pairs(side)) {
                if (tp.from != vals.back())
                    continue;
                path.push_back(e.target);
                vals.push_back(tp.to);
                go();
                path.pop_back();
                vals.pop_back();
            }
    };
    go();
}
} // namespace detail

/// All traces on `side` starting with (n, v) along paths of length at most
/// `max_len`, trace and path of equal length, in lexicographic order.
inline std::vector<PathTrace> enumerate_traces(const ProofGraph& p, Side side, NodeId n, ValueId v, std::size_t max_len)
{
    if (!p.has_value(n, side, v))
        throw query_error("value is not a " + std::string(side == Side::left ? "antecedent" : "consequent") +
                          " value of \"" + p.node(n).name + "\"");
    std::vector<PathTrace> out;
    detail::for_each_trace(p, side, n, v, max_len,
                           [&](const Path& path, const std::vector<ValueId>& vals) { out.push_back({path, {side, vals}}); });
    std::sort(out.begin(), out.end(), detail::path_trace_less);
    return out;
}

/// Positive maximal right-hand traces from (n, v) along paths of length at
/// most `max_len`.
inline std::vector<PathTrace> enumerate_right_maximal(const ProofGraph& p, NodeId n, ValueId v, std::size_t max_len)
{
    if (!p.has_value(n, Side::right, v))
        throw query_error("value is not a consequent value of \"" + p.node(n).name + "\"");
    std::vector<PathTrace> out;
    detail::for_each_trace(p, Side::right, n, v, max_len, [&](const Path& path, const std::vector<ValueId>& vals) {
        const NodeId last = path.back();
        if (p.is_terminal(last, Side::right, vals.back()) && !p.is_excluded(last, vals.back()))
            out.push_back({path, {Side::right, vals}});
    });
    std::sort(out.begin(), out.end(), detail::path_trace_less);
    return out;
}

/// Successors of (node, value) in the trace graph of one side.
inline std::vector<NodeValue> trace_successors(const ProofGraph& p, Side side, NodeValue s)
{
    std::vector<NodeValue> out;
    for (const Edge& e : p.node(s.first).children)
        for (const TracePair& tp : e.pairs(side))
            if (tp.from == s.second)
                out.emplace_back(e.target, tp.to);
    return out;
}

/// (node, value) pairs reachable from `start`, `start` included.
inline std::set<NodeValue> reachable(const ProofGraph& p, Side side, NodeValue start)
{
    std::set<NodeValue> seen{start};
    std::vector<NodeValue> stack{start};
    while (!stack.empty()) {
        const NodeValue s = stack.back();
        stack.pop_back();
        for (const NodeValue& t : trace_successors(p, side, s))
            if (seen.insert(t).second)
                stack.push_back(t);
    }
    return seen;
}

/// Every simple cycle of the trace graph on `side`, listed once per rotation.
inline std::vector<PathTrace> simple_cycles(const ProofGraph& p, Side side)
{
    std::vector<PathTrace> out;
    for (NodeId n = 0; n < p.size(); ++n)
        for (ValueId v : p.node(n).values(side)) {
            const NodeValue start{n, v};
            Path path{n};
            std::vector<ValueId> vals{v};
            std::set<NodeValue> on_path;
            std::function<void(NodeValue)> go = [&](NodeValue cur) {
                for (const NodeValue& next : trace_successors(p, side, cur)) {
                    if (next == start) {
                        Path cp = path;
                        cp.push_back(next.first);
                        auto cv = vals;
                        cv.push_back(next.second);
                        out.push_back({std::move(cp), {side, std::move(cv)}});
                        continue;
                    }
                    if (on_path.count(next))
                        continue;
                    on_path.insert(next);
                    path.push_back(next.first);
                    vals.push_back(next.second);
                    go(next);
                    path.pop_back();
                    vals.pop_back();
                    on_path.erase(next);
                }
            };
            go(start);
        }
    std::sort(out.begin(), out.end(), detail::path_trace_less);
    return out;
}

/// Every simple binary cycle of left-hand traces, repetition judged on the
/// (node, value, value) triple; listed once per rotation, diagonal included.
inline std::vector<BinaryCycle> simple_binary_cycles(const ProofGraph& p)
{
    using Triple = std::tuple<NodeId, ValueId, ValueId>;
    auto successors = [&](const Triple& s) {
        std::vector<Triple> out;
        const auto& [n, x, y] = s;
        for (const Edge& e : p.node(n).children)
            for (const TracePair& a : e.left)
                if (a.from == x)
                    for (const TracePair& b : e.left)
                        if (b.from == y)
                            out.emplace_back(e.target, a.to, b.to);
        return out;
    };
    std::vector<BinaryCycle> out;
    for (NodeId n = 0; n < p.size(); ++n)
        for (ValueId x : p.node(n).ant_values)
            for (ValueId y : p.node(n).ant_values) {
                const Triple start{n, x, y};
                BinaryCycle cur{{n}, {x}, {y}};
                std::set<Triple> on_path;
                std::function<void(const Triple&)> go = [&](const Triple& s) {
                    for (const Triple& next : successors(s)) {
                        const auto& [m, a, b] = next;
                        if (next == start) {
                            BinaryCycle c = cur;
                            c.path.push_back(m);
                            c.first.push_back(a);
                            c.second.push_back(b);
                            out.push_back(std::move(c));
                            continue;
                        }
                        if (on_path.count(next))
                            continue;
                        on_path.insert(next);
                        cur.path.push_back(m);
                        cur.first.push_back(a);
                        cur.second.push_back(b);
                        go(next);
                        cur.path.pop_back();
                        cur.first.pop_back();
                        cur.second.pop_back();
                        on_path.erase(next);
                    }
                };
                go(start);
            }
    std::sort(out.begin(), out.end(), [](const BinaryCycle& a, const BinaryCycle& b) {
        return std::tie(a.path, a.first, a.second) < std::tie(b.path, b.first, b.second);
    });
    return out;
}

} // namespace cep
