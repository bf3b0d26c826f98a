#pragma once

// Global soundness: every infinite path has a tail followed by a left-hand
// trace that progresses infinitely often. Decided by closing the per-edge
// sloped relations under composition and inspecting idempotent loops.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "cep/detail/parallel.hpp"
#include "cep/proof_graph.hpp"
#include "cep/traces.hpp"

namespace cep {

enum class Slope : unsigned char { flat = 0, down = 1 };

struct SlopedArc {
    ValueId from = 0;
    ValueId to = 0;
    Slope slope = Slope::flat;

    friend auto operator<=>(const SlopedArc&, const SlopedArc&) = default;
};

/// Arcs sorted by (from, to); at most one arc per value pair, down wins.
using SlopedRelation = std::vector<SlopedArc>;

inline SlopedRelation edge_relation(const Edge& e)
{
    SlopedRelation r;
    for (const TracePair& tp : e.left)
        r.push_back({tp.from, tp.to, tp.weight.is_zero() ? Slope::flat : Slope::down});
    std::sort(r.begin(), r.end());
    return r;
}

inline SlopedRelation compose(const SlopedRelation& a, const SlopedRelation& b)
{
    std::map<std::pair<ValueId, ValueId>, Slope> acc;
    for (const SlopedArc& x : a)
        for (const SlopedArc& y : b) {
            if (x.to != y.from)
                continue;
            const Slope s = (x.slope == Slope::down || y.slope == Slope::down) ? Slope::down : Slope::flat;
            auto [it, inserted] = acc.emplace(std::make_pair(x.from, y.to), s);
            if (!inserted && s == Slope::down)
                it->second = Slope::down;
        }
    SlopedRelation r;
    r.reserve(acc.size());
    for (const auto& [k, s] : acc)
        r.push_back({k.first, k.second, s});
    return r;
}

struct SoundnessReport {
    bool sound = true;
    /// Nodes from the root up to (excluding) the first cycle node; empty when
    /// the cycle is not reachable from the root.
    Path stem;
    /// Cycle path, first and last node equal.
    Path cycle;
    SlopedRelation cycle_relation;
    std::size_t closure_size = 0;
    std::size_t rounds = 0;
};

namespace detail {
inline std::optional<Path> shortest_path(const ProofGraph& p, NodeId from, NodeId to)
{
    std::vector<std::optional<NodeId>> parent(p.size());
    std::vector<bool> seen(p.size(), false);
    std::deque<NodeId> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        if (u == to) {
            Path path{to};
            for (NodeId c = to; parent[c]; c = *parent[c])
                path.push_back(*parent[c]);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (const Edge& e : p.node(u).children)
            if (!seen[e.target]) {
                seen[e.target] = true;
                parent[e.target] = u;
                queue.push_back(e.target);
            }
    }
    return std::nullopt;
}
} // namespace detail

inline SoundnessReport check_global_soundness(const ProofGraph& p)
{
    using Key = std::tuple<NodeId, NodeId, SlopedRelation>;
    struct Item {
        Key key;
        Path path;
    };
    std::map<Key, std::size_t> index;
    std::vector<Item> items;

    std::vector<Item> frontier;
    for (NodeId u = 0; u < p.size(); ++u)
        for (const Edge& e : p.node(u).children) {
            Key k{u, e.target, edge_relation(e)};
            if (index.emplace(k, items.size()).second) {
                items.push_back({k, {u, e.target}});
                frontier.push_back(items.back());
            }
        }

    SoundnessReport report;
    while (!frontier.empty()) {
        ++report.rounds;
        // Successors of each frontier element are computed independently and
        // merged in frontier order, so the closure and its witnesses do not
        // depend on the worker count.
        auto succ = detail::parallel_map<std::vector<Item>>(frontier.size(), [&](std::size_t i) {
            const auto& [u, v, r] = frontier[i].key;
            std::vector<Item> out;
            for (const Edge& e : p.node(v).children) {
                Path path = frontier[i].path;
                path.push_back(e.target);
                out.push_back({Key{u, e.target, compose(r, edge_relation(e))}, std::move(path)});
            }
            return out;
        });
        std::vector<Item> next;
        for (auto& group : succ)
            for (auto& it : group)
                if (index.emplace(it.key, items.size()).second) {
                    items.push_back(it);
                    next.push_back(std::move(it));
                }
        frontier = std::move(next);
    }
    report.closure_size = items.size();

    for (const Item& it : items) {
        const auto& [u, v, r] = it.key;
        if (u != v || compose(r, r) != r)
            continue;
        const bool progresses = std::any_of(r.begin(), r.end(), [](const SlopedArc& a) {
            return a.from == a.to && a.slope == Slope::down;
        });
        if (progresses)
            continue;
        report.sound = false;
        report.cycle = it.path;
        report.cycle_relation = r;
        if (auto sp = detail::shortest_path(p, p.root(), u)) {
            sp->pop_back();
            report.stem = *sp;
        }
        break;
    }
    return report;
}

} // namespace cep
