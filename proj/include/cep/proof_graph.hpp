#pragma once

// Cyclic pre-proofs: a rooted graph of rule instances with ordered children,
// trace values on both sides of each sequent, per-edge trace pair weights,
// and the decidable annotations (ground / excluded / equates) that stand in
// for the semantic predicates.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cep/ordinal.hpp"

namespace cep {

using NodeId = std::uint32_t;
using ValueId = std::uint32_t;

enum class Side { left, right };

inline const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }

/// Structural problems in an input document: bad syntax, dangling references.
class proof_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A query that does not fit the proof it is asked about (unknown node, value
/// from the wrong namespace, malformed path).
class query_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TracePair {
    ValueId from = 0;
    ValueId to = 0;
    Ordinal weight;

    friend bool operator==(const TracePair&, const TracePair&) = default;
};

/// The i-th premise edge of a node with the left and right trace pair maps
/// attached to it.
struct Edge {
    NodeId target = 0;
    std::vector<TracePair> left;
    std::vector<TracePair> right;

    const std::vector<TracePair>& pairs(Side s) const { return s == Side::left ? left : right; }
    std::vector<TracePair>& pairs(Side s) { return s == Side::left ? left : right; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Node {
    std::string name;
    std::string rule;
    std::string antecedent;
    std::string consequent;
    std::vector<ValueId> ant_values; // sorted
    std::vector<ValueId> con_values; // sorted
    std::vector<Edge> children;
    std::vector<ValueId> ground;                         // sorted
    std::vector<ValueId> excluded;                       // sorted
    std::vector<std::pair<ValueId, ValueId>> equates;    // (antecedent, consequent), sorted

    bool axiomatic() const noexcept { return children.empty(); }

    const std::vector<ValueId>& values(Side s) const { return s == Side::left ? ant_values : con_values; }

    friend bool operator==(const Node&, const Node&) = default;
};

namespace detail {
template <class T>
bool sorted_contains(const std::vector<T>& v, const T& x)
{
    return std::binary_search(v.begin(), v.end(), x);
}
} // namespace detail

class ProofGraph {
public:
    ProofGraph() = default;

    // --- construction -----------------------------------------------------

    ValueId intern_value(const std::string& name)
    {
        auto [it, inserted] = value_ids_.emplace(name, static_cast<ValueId>(value_names_.size()));
        if (inserted)
            value_names_.push_back(name);
        return it->second;
    }

    NodeId add_node(Node n)
    {
        if (node_ids_.count(n.name))
            throw proof_error("duplicate node id \"" + n.name + "\"");
        const auto id = static_cast<NodeId>(nodes_.size());
        node_ids_.emplace(n.name, id);
        nodes_.push_back(std::move(n));
        return id;
    }

    void set_root(NodeId r) { root_ = r; }
    Node& mutable_node(NodeId n) { return nodes_.at(n); }

    /// Sorts every per-node collection so queries can binary search.
    void normalize()
    {
        for (Node& n : nodes_) {
            for (auto* v : {&n.ant_values, &n.con_values, &n.ground, &n.excluded}) {
                std::sort(v->begin(), v->end());
                v->erase(std::unique(v->begin(), v->end()), v->end());
            }
            std::sort(n.equates.begin(), n.equates.end());
            n.equates.erase(std::unique(n.equates.begin(), n.equates.end()), n.equates.end());
            for (Edge& e : n.children)
                for (auto* ps : {&e.left, &e.right})
                    std::sort(ps->begin(), ps->end(), [](const TracePair& a, const TracePair& b) {
                        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
                    });
        }
    }

    // --- structure ------------------------------------------------------------

    NodeId root() const noexcept { return root_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const Node& node(NodeId n) const { return nodes_.at(n); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    const std::string& value_name(ValueId v) const { return value_names_.at(v); }
    std::size_t value_count() const noexcept { return value_names_.size(); }

    std::optional<NodeId> find_node(const std::string& name) const
    {
        auto it = node_ids_.find(name);
        if (it == node_ids_.end())
            return std::nullopt;
        return it->second;
    }
    std::optional<ValueId> find_value(const std::string& name) const
    {
        auto it = value_ids_.find(name);
        if (it == value_ids_.end())
            return std::nullopt;
        return it->second;
    }

    NodeId require_node(const std::string& name) const
    {
        if (auto n = find_node(name))
            return *n;
        throw query_error("unknown node \"" + name + "\"");
    }

    /// Resolves a value name and checks it belongs to the given side at `n`.
    ValueId require_value(NodeId n, Side side, const std::string& name) const
    {
        auto v = find_value(name);
        if (!v || !has_value(n, side, *v))
            throw query_error(std::string("unknown ") + (side == Side::left ? "antecedent" : "consequent") +
                              " value \"" + name + "\" at node \"" + node(n).name + "\"");
        return *v;
    }

    bool has_value(NodeId n, Side side, ValueId v) const { return detail::sorted_contains(node(n).values(side), v); }

    /// Index of `child` among the children of `parent`; children are distinct.
    std::optional<std::size_t> child_index(NodeId parent, NodeId child) const
    {
        const auto& ch = node(parent).children;
        for (std::size_t i = 0; i < ch.size(); ++i)
            if (ch[i].target == child)
                return i;
        return std::nullopt;
    }

    /// Weight of the trace pair (from, to) on the edge parent -> child, if any.
    std::optional<Ordinal> delta(NodeId parent, std::size_t child, Side side, ValueId from, ValueId to) const
    {
        for (const TracePair& tp : node(parent).children.at(child).pairs(side))
            if (tp.from == from && tp.to == to)
                return tp.weight;
        return std::nullopt;
    }

    /// Values at `n` on `side` with no outgoing trace pair on any child edge.
    std::vector<ValueId> terminal_values(NodeId n, Side side) const
    {
        if (n >= nodes_.size())
            throw query_error("unknown node index " + std::to_string(n));
        std::vector<ValueId> out;
        for (ValueId v : node(n).values(side))
            if (is_terminal(n, side, v))
                out.push_back(v);
        return out;
    }

    bool is_terminal(NodeId n, Side side, ValueId v) const
    {
        for (const Edge& e : node(n).children)
            for (const TracePair& tp : e.pairs(side))
                if (tp.from == v)
                    return false;
        return true;
    }

    bool is_ground(NodeId n, ValueId v) const { return detail::sorted_contains(node(n).ground, v); }
    bool is_excluded(NodeId n, ValueId v) const { return detail::sorted_contains(node(n).excluded, v); }

    /// Antecedent values equated with consequent value `con` at `n`.
    std::vector<ValueId> equated_with(NodeId n, ValueId con) const
    {
        std::vector<ValueId> out;
        for (const auto& [a, c] : node(n).equates)
            if (c == con && has_value(n, Side::left, a))
                out.push_back(a);
        return out;
    }

    /// Distinct parents of each node.
    std::vector<std::vector<NodeId>> predecessors() const
    {
        std::vector<std::vector<NodeId>> preds(nodes_.size());
        for (NodeId u = 0; u < nodes_.size(); ++u)
            for (const Edge& e : nodes_[u].children)
                if (preds[e.target].empty() || preds[e.target].back() != u)
                    preds[e.target].push_back(u);
        return preds;
    }

    friend bool operator==(const ProofGraph& a, const ProofGraph& b)
    {
        return a.root_ == b.root_ && a.nodes_ == b.nodes_ && a.value_names_ == b.value_names_;
    }

private:
    std::vector<Node> nodes_;
    NodeId root_ = 0;
    std::vector<std::string> value_names_;
    std::map<std::string, NodeId> node_ids_;
    std::map<std::string, ValueId> value_ids_;
};

// --- validation --------------------------------------------------------------

struct Violation {
    std::string kind; // "delta domain", "delta codomain", "namespace overlap", "annotation scope", "trace injectivity"
    std::string message;
    std::optional<NodeId> node;
    std::optional<std::size_t> child_index;
    std::optional<Side> side;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool trace_injective = true;

    /// True when nothing but trace-injectivity findings were reported.
    bool structurally_valid() const
    {
        return std::all_of(violations.begin(), violations.end(),
                           [](const Violation& v) { return v.kind == "trace injectivity"; });
    }
    bool clean() const { return violations.empty(); }
};

inline ValidationReport validate(const ProofGraph& p)
{
    ValidationReport report;
    auto add = [&](std::string kind, std::string msg, std::optional<NodeId> n = std::nullopt,
                   std::optional<std::size_t> ci = std::nullopt, std::optional<Side> side = std::nullopt) {
        report.violations.push_back({std::move(kind), std::move(msg), n, ci, side});
    };

    std::set<ValueId> ant_all;
    std::set<ValueId> con_all;
    for (const Node& n : p.nodes()) {
        ant_all.insert(n.ant_values.begin(), n.ant_values.end());
        con_all.insert(n.con_values.begin(), n.con_values.end());
    }
    for (ValueId v : ant_all)
        if (con_all.count(v))
            add("namespace overlap", "value \"" + p.value_name(v) + "\" used as both antecedent and consequent value");

    for (NodeId u = 0; u < p.size(); ++u) {
        const Node& n = p.node(u);
        for (ValueId v : n.ground)
            if (!p.has_value(u, Side::right, v))
                add("annotation scope", "ground value \"" + p.value_name(v) + "\" is not a consequent value of \"" + n.name + "\"", u);
        for (ValueId v : n.excluded)
            if (!p.has_value(u, Side::right, v))
                add("annotation scope", "excluded value \"" + p.value_name(v) + "\" is not a consequent value of \"" + n.name + "\"", u);
        for (const auto& [a, c] : n.equates)
            if (!p.has_value(u, Side::left, a) || !p.has_value(u, Side::right, c))
                add("annotation scope", "equated pair (\"" + p.value_name(a) + "\", \"" + p.value_name(c) +
                                            "\") is not drawn from the values of \"" + n.name + "\"", u);

        for (std::size_t i = 0; i < n.children.size(); ++i) {
            const Edge& e = n.children[i];
            const Node& child = p.node(e.target);
            for (Side side : {Side::left, Side::right}) {
                std::map<ValueId, ValueId> source_of;
                for (const TracePair& tp : e.pairs(side)) {
                    const std::string where = "edge " + n.name + "->" + child.name + " (" + to_string(side) + ")";
                    if (!p.has_value(u, side, tp.from))
                        add("delta domain", where + ": \"" + p.value_name(tp.from) + "\" is not a " +
                                                (side == Side::left ? "antecedent" : "consequent") + " value of \"" + n.name + "\"",
                            u, i, side);
                    if (!p.has_value(e.target, side, tp.to))
                        add("delta codomain", where + ": \"" + p.value_name(tp.to) + "\" is not a " +
                                                  (side == Side::left ? "antecedent" : "consequent") + " value of \"" + child.name + "\"",
                            u, i, side);
                    auto [it, inserted] = source_of.emplace(tp.to, tp.from);
                    if (!inserted && it->second != tp.from) {
                        report.trace_injective = false;
                        add("trace injectivity", where + ": \"" + p.value_name(it->second) + "\" and \"" +
                                                     p.value_name(tp.from) + "\" both map to \"" + p.value_name(tp.to) + "\"",
                            u, i, side);
                    }
                }
            }
        }
    }
    return report;
}

} // namespace cep
