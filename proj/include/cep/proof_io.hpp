#pragma once

// JSON reading and writing of proof objects.
//
//   {"root": id,
//    "nodes": [{"id", "rule", "axiom", "sequent": {"ant", "con"},
//               "ant_values", "con_values", "children",
//               "ground", "excluded", "equates": [[a, c], ...]}],
//    "delta": [{"from", "child_index", "side": "left"|"right",
//               "pairs": [[v, v', weight], ...]}]}
//
// Weights are ordinal literals ("w*2+3") or non-negative integers.

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cep/ordinal.hpp"
#include "cep/proof_graph.hpp"

namespace cep {

using ordered_json = nlohmann::ordered_json;

namespace detail {

class ProofReader {
public:
    ProofGraph read(const nlohmann::json& doc)
    {
        if (!doc.is_object())
            fail("", "document must be a JSON object");
        check_keys(doc, "", {"root", "nodes", "delta"});

        if (!doc.contains("nodes") || !doc.at("nodes").is_array() || doc.at("nodes").empty())
            fail("/nodes", "root missing");
        if (!doc.contains("root"))
            fail("/root", "root missing");

        const auto& nodes = doc.at("nodes");
        // First pass: ids and value names, so later references can be checked.
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto& jn = nodes[i];
            const std::string at = "/nodes/" + std::to_string(i);
            if (!jn.is_object())
                fail(at, "node must be an object");
            check_keys(jn, at, {"id", "rule", "axiom", "sequent", "ant_values", "con_values", "children", "ground",
                                "excluded", "equates"});
            Node n;
            n.name = string_at(jn, "id", at, true);
            n.rule = string_at(jn, "rule", at, false);
            if (jn.contains("sequent")) {
                const auto& s = jn.at("sequent");
                if (!s.is_object())
                    fail(at + "/sequent", "sequent must be an object");
                check_keys(s, at + "/sequent", {"ant", "con"});
                n.antecedent = string_at(s, "ant", at + "/sequent", false);
                n.consequent = string_at(s, "con", at + "/sequent", false);
            }
            for (const auto& v : string_list(jn, "ant_values", at))
                n.ant_values.push_back(g_.intern_value(v));
            for (const auto& v : string_list(jn, "con_values", at))
                n.con_values.push_back(g_.intern_value(v));
            if (has_duplicates(n.ant_values) || has_duplicates(n.con_values))
                fail(at, "duplicate trace value in node \"" + n.name + "\"");
            if (g_.find_node(n.name))
                fail(at + "/id", "duplicate node id \"" + n.name + "\"");
            g_.add_node(std::move(n));
        }

        if (!doc.at("root").is_string())
            fail("/root", "root must be a string");
        const std::string root = doc.at("root").get<std::string>();
        auto rid = g_.find_node(root);
        if (!rid)
            fail("/root", "root \"" + root + "\" is not a node");
        g_.set_root(*rid);

        // Second pass: children and annotations.
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto& jn = nodes[i];
            const std::string at = "/nodes/" + std::to_string(i);
            Node& n = g_.mutable_node(static_cast<NodeId>(i));
            const auto children = string_list(jn, "children", at);
            std::set<NodeId> seen;
            for (std::size_t c = 0; c < children.size(); ++c) {
                auto cid = g_.find_node(children[c]);
                if (!cid)
                    fail(at + "/children/" + std::to_string(c), "dangling child reference \"" + children[c] + "\"");
                if (!seen.insert(*cid).second)
                    fail(at + "/children/" + std::to_string(c), "repeated child \"" + children[c] + "\"");
                n.children.push_back(Edge{*cid, {}, {}});
            }
            if (jn.contains("axiom")) {
                if (!jn.at("axiom").is_boolean())
                    fail(at + "/axiom", "axiom must be a boolean");
                if (jn.at("axiom").get<bool>() != n.children.empty())
                    fail(at + "/axiom", "axiom flag disagrees with children of \"" + n.name + "\"");
            }
            for (const auto& v : string_list(jn, "ground", at))
                n.ground.push_back(value_ref(v, at + "/ground"));
            for (const auto& v : string_list(jn, "excluded", at))
                n.excluded.push_back(value_ref(v, at + "/excluded"));
            if (jn.contains("equates")) {
                const auto& eq = jn.at("equates");
                if (!eq.is_array())
                    fail(at + "/equates", "equates must be an array");
                for (std::size_t k = 0; k < eq.size(); ++k) {
                    const std::string where = at + "/equates/" + std::to_string(k);
                    if (!eq[k].is_array() || eq[k].size() != 2 || !eq[k][0].is_string() || !eq[k][1].is_string())
                        fail(where, "equated pair must be [antecedent value, consequent value]");
                    n.equates.emplace_back(value_ref(eq[k][0].get<std::string>(), where),
                                           value_ref(eq[k][1].get<std::string>(), where));
                }
            }
        }

        if (doc.contains("delta")) {
            const auto& delta = doc.at("delta");
            if (!delta.is_array())
                fail("/delta", "delta must be an array");
            std::set<std::tuple<NodeId, std::size_t, int>> blocks;
            for (std::size_t i = 0; i < delta.size(); ++i)
                read_delta(delta[i], "/delta/" + std::to_string(i), blocks);
        }
        g_.normalize();
        return std::move(g_);
    }

private:
    void read_delta(const nlohmann::json& jd, const std::string& at, std::set<std::tuple<NodeId, std::size_t, int>>& blocks)
    {
        if (!jd.is_object())
            fail(at, "delta block must be an object");
        check_keys(jd, at, {"from", "child_index", "side", "pairs"});
        const std::string from = string_at(jd, "from", at, true);
        auto fid = g_.find_node(from);
        if (!fid)
            fail(at + "/from", "dangling node reference \"" + from + "\"");
        if (!jd.contains("child_index") || !jd.at("child_index").is_number_unsigned())
            fail(at + "/child_index", "child_index must be a non-negative integer");
        const auto ci = jd.at("child_index").get<std::size_t>();
        Node& n = g_.mutable_node(*fid);
        if (ci >= n.children.size())
            fail(at + "/child_index", "child_index " + std::to_string(ci) + " out of range for node \"" + from + "\"");
        const std::string side_name = string_at(jd, "side", at, true);
        if (side_name != "left" && side_name != "right")
            fail(at + "/side", "side must be \"left\" or \"right\"");
        const Side side = side_name == "left" ? Side::left : Side::right;
        if (!blocks.emplace(*fid, ci, side == Side::left ? 0 : 1).second)
            fail(at, "repeated delta block for edge " + from + "#" + std::to_string(ci) + " (" + side_name + ")");

        auto& pairs = n.children[ci].pairs(side);
        if (!jd.contains("pairs") || !jd.at("pairs").is_array())
            fail(at + "/pairs", "pairs must be an array");
        const auto& jp = jd.at("pairs");
        for (std::size_t k = 0; k < jp.size(); ++k) {
            const std::string where = at + "/pairs/" + std::to_string(k);
            const auto& p = jp[k];
            if (!p.is_array() || p.size() != 3 || !p[0].is_string() || !p[1].is_string())
                fail(where, "trace pair must be [value, value, weight]");
            TracePair tp;
            tp.from = value_ref(p[0].get<std::string>(), where);
            tp.to = value_ref(p[1].get<std::string>(), where);
            if (p[2].is_number_unsigned() || (p[2].is_number_integer() && p[2].get<std::int64_t>() >= 0)) {
                tp.weight = Ordinal(p[2].get<std::uint64_t>());
            } else if (p[2].is_string()) {
                try {
                    tp.weight = Ordinal::parse(p[2].get<std::string>());
                } catch (const ordinal_error& e) {
                    fail(where + "/2", std::string("bad weight: ") + e.what());
                }
            } else {
                fail(where + "/2", "weight must be an ordinal literal or a non-negative integer");
            }
            for (const TracePair& q : pairs)
                if (q.from == tp.from && q.to == tp.to)
                    fail(where, "repeated trace pair (" + p[0].get<std::string>() + ", " + p[1].get<std::string>() + ")");
            pairs.push_back(std::move(tp));
        }
    }

    ValueId value_ref(const std::string& name, const std::string& at)
    {
        auto v = g_.find_value(name);
        if (!v)
            fail(at, "dangling trace value reference \"" + name + "\"");
        return *v;
    }

    static bool has_duplicates(std::vector<ValueId> v)
    {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    }

    static void check_keys(const nlohmann::json& obj, const std::string& at, std::initializer_list<const char*> allowed)
    {
        for (const auto& item : obj.items()) {
            bool ok = false;
            for (const char* k : allowed)
                ok = ok || item.key() == k;
            if (!ok)
                fail(at + "/" + item.key(), "unknown key \"" + item.key() + "\"");
        }
    }

    static std::string string_at(const nlohmann::json& obj, const char* key, const std::string& at, bool required)
    {
        if (!obj.contains(key)) {
            if (required)
                fail(at + "/" + key, std::string("missing \"") + key + "\"");
            return {};
        }
        if (!obj.at(key).is_string())
            fail(at + "/" + key, std::string("\"") + key + "\" must be a string");
        return obj.at(key).get<std::string>();
    }

    static std::vector<std::string> string_list(const nlohmann::json& obj, const char* key, const std::string& at)
    {
        std::vector<std::string> out;
        if (!obj.contains(key))
            return out;
        const auto& arr = obj.at(key);
        if (!arr.is_array())
            fail(at + "/" + key, std::string("\"") + key + "\" must be an array of strings");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string())
                fail(at + "/" + key + "/" + std::to_string(i), "expected a string");
            out.push_back(arr[i].get<std::string>());
        }
        return out;
    }

    [[noreturn]] static void fail(const std::string& at, const std::string& what)
    {
        throw proof_error((at.empty() ? std::string("/") : at) + ": " + what);
    }

    ProofGraph g_;
};

} // namespace detail

inline ProofGraph parse_proof_graph(const nlohmann::json& doc) { return detail::ProofReader().read(doc); }

inline ProofGraph parse_proof_graph(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw proof_error(std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
    }
    return parse_proof_graph(doc);
}

inline ProofGraph parse_proof_graph(const std::string& text) { return parse_proof_graph(std::string_view(text)); }
inline ProofGraph parse_proof_graph(const char* text) { return parse_proof_graph(std::string_view(text)); }

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw proof_error("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ProofGraph load_proof_graph(const std::string& path) { return parse_proof_graph(read_file(path)); }

inline ordered_json to_json(const ProofGraph& p)
{
    auto names = [&](const std::vector<ValueId>& vs) {
        ordered_json a = ordered_json::array();
        for (ValueId v : vs)
            a.push_back(p.value_name(v));
        return a;
    };
    ordered_json doc;
    doc["root"] = p.node(p.root()).name;
    ordered_json nodes = ordered_json::array();
    ordered_json delta = ordered_json::array();
    for (const Node& n : p.nodes()) {
        ordered_json jn;
        jn["id"] = n.name;
        jn["rule"] = n.rule;
        jn["axiom"] = n.axiomatic();
        jn["sequent"] = {{"ant", n.antecedent}, {"con", n.consequent}};
        jn["ant_values"] = names(n.ant_values);
        jn["con_values"] = names(n.con_values);
        ordered_json ch = ordered_json::array();
        for (const Edge& e : n.children)
            ch.push_back(p.node(e.target).name);
        jn["children"] = ch;
        jn["ground"] = names(n.ground);
        jn["excluded"] = names(n.excluded);
        ordered_json eq = ordered_json::array();
        for (const auto& [a, c] : n.equates)
            eq.push_back({p.value_name(a), p.value_name(c)});
        jn["equates"] = eq;
        nodes.push_back(jn);

        for (std::size_t i = 0; i < n.children.size(); ++i)
            for (Side side : {Side::left, Side::right}) {
                const auto& pairs = n.children[i].pairs(side);
                if (pairs.empty())
                    continue;
                ordered_json jd;
                jd["from"] = n.name;
                jd["child_index"] = i;
                jd["side"] = to_string(side);
                ordered_json jp = ordered_json::array();
                for (const TracePair& tp : pairs)
                    jp.push_back({p.value_name(tp.from), p.value_name(tp.to), tp.weight.to_string()});
                jd["pairs"] = jp;
                delta.push_back(jd);
            }
    }
    doc["nodes"] = nodes;
    doc["delta"] = delta;
    return doc;
}

inline std::string serialize_proof_graph(const ProofGraph& p) { return to_json(p).dump(2) + "\n"; }

inline ordered_json to_json(const ProofGraph& p, const ValidationReport& r)
{
    ordered_json out;
    out["structurally_valid"] = r.structurally_valid();
    out["trace_injective"] = r.trace_injective;
    ordered_json vs = ordered_json::array();
    for (const Violation& v : r.violations) {
        ordered_json jv;
        jv["kind"] = v.kind;
        jv["message"] = v.message;
        jv["node"] = v.node ? ordered_json(p.node(*v.node).name) : ordered_json(nullptr);
        jv["child_index"] = v.child_index ? ordered_json(*v.child_index) : ordered_json(nullptr);
        jv["side"] = v.side ? ordered_json(to_string(*v.side)) : ordered_json(nullptr);
        vs.push_back(jv);
    }
    out["violations"] = vs;
    return out;
}

} // namespace cep
