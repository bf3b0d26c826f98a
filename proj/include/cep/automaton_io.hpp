#pragma once

// JSON and Graphviz renderings of weighted automata.
//
//   {"kind", "initial": name,
//    "alphabet": [{"name", "kind": "node"|"pair"|"symbol"}],
//    "states": [{"name", "tag", "final", "node", "value", "level"}],
//    "transitions": [{"from", "letter", "to", "weight"}]}
//
// When reading, "alphabet" may be omitted (letters default to kind "symbol"),
// and only "name" and "final" are required per state.

#include <sstream>
#include <string>

#include <json.hpp>

#include "cep/automata.hpp"
#include "cep/proof_graph.hpp"
#include "cep/proof_io.hpp"

namespace cep {

inline ordered_json to_json(const WeightedAutomaton& a, const ProofGraph* p = nullptr)
{
    ordered_json doc;
    doc["kind"] = to_string(a.kind);
    if (a.kind == AutomatonKind::antecedent_approx)
        doc["level"] = a.approx_level;
    doc["initial"] = a.state(a.initial()).name;
    ordered_json alphabet = ordered_json::array();
    for (const LetterInfo& l : a.letters())
        alphabet.push_back({{"name", l.name}, {"kind", to_string(l.kind)}});
    doc["alphabet"] = alphabet;
    ordered_json states = ordered_json::array();
    for (const StateInfo& s : a.states()) {
        ordered_json js;
        js["name"] = s.name;
        js["tag"] = to_string(s.tag);
        js["final"] = s.final;
        if (s.node)
            js["node"] = p ? ordered_json(p->node(*s.node).name) : ordered_json(*s.node);
        if (s.value)
            js["value"] = p ? ordered_json(p->value_name(*s.value)) : ordered_json(*s.value);
        if (s.tag == StateTag::top_chain)
            js["level"] = s.level;
        states.push_back(js);
    }
    doc["states"] = states;
    ordered_json ts = ordered_json::array();
    for (StateId s = 0; s < a.state_count(); ++s)
        for (const Transition& t : a.out(s))
            ts.push_back({{"from", a.state(t.from).name},
                          {"letter", a.letter(t.letter).name},
                          {"to", a.state(t.to).name},
                          {"weight", t.weight.to_string()}});
    doc["transitions"] = ts;
    return doc;
}

namespace detail {
inline StateTag parse_tag(const std::string& s)
{
    for (StateTag t : {StateTag::plain, StateTag::start, StateTag::node_value, StateTag::bottom, StateTag::top,
                       StateTag::top_chain})
        if (s == to_string(t))
            return t;
    throw automaton_error("unknown state tag \"" + s + "\"");
}

inline LetterKind parse_letter_kind(const std::string& s)
{
    for (LetterKind k : {LetterKind::symbol, LetterKind::node, LetterKind::pair})
        if (s == to_string(k))
            return k;
    throw automaton_error("unknown letter kind \"" + s + "\"");
}
} // namespace detail

/// Reads an automaton document. Node and value references are kept only as
/// display data; the result is a raw automaton.
inline WeightedAutomaton parse_automaton(const nlohmann::json& doc)
{
    auto fail = [](const std::string& at, const std::string& what) -> void {
        throw automaton_error(at + ": " + what);
    };
    if (!doc.is_object())
        fail("/", "document must be a JSON object");
    for (const auto& item : doc.items())
        if (item.key() != "kind" && item.key() != "level" && item.key() != "initial" && item.key() != "alphabet" &&
            item.key() != "states" && item.key() != "transitions")
            fail("/" + item.key(), "unknown key \"" + item.key() + "\"");
    WeightedAutomaton a;
    try {
        if (doc.contains("alphabet"))
            for (const auto& l : doc.at("alphabet"))
                a.intern_letter(l.at("name").get<std::string>(),
                                l.contains("kind") ? detail::parse_letter_kind(l.at("kind").get<std::string>())
                                                   : LetterKind::symbol);
        if (!doc.contains("states") || !doc.at("states").is_array() || doc.at("states").empty())
            fail("/states", "states missing");
        for (const auto& js : doc.at("states")) {
            StateInfo s;
            s.name = js.at("name").get<std::string>();
            s.final = js.value("final", false);
            if (js.contains("tag"))
                s.tag = detail::parse_tag(js.at("tag").get<std::string>());
            if (js.contains("level"))
                s.level = js.at("level").get<std::uint32_t>();
            a.add_state(std::move(s));
        }
        if (!doc.contains("initial"))
            fail("/initial", "initial state missing");
        auto init = a.find_state(doc.at("initial").get<std::string>());
        if (!init)
            fail("/initial", "unknown initial state");
        a.set_initial(*init);
        if (doc.contains("transitions")) {
            const auto& ts = doc.at("transitions");
            for (std::size_t i = 0; i < ts.size(); ++i) {
                const std::string at = "/transitions/" + std::to_string(i);
                const auto& jt = ts[i];
                auto from = a.find_state(jt.at("from").get<std::string>());
                auto to = a.find_state(jt.at("to").get<std::string>());
                if (!from || !to)
                    fail(at, "unknown state");
                const LetterId l = a.intern_letter(jt.at("letter").get<std::string>());
                Ordinal w;
                const auto& jw = jt.contains("weight") ? jt.at("weight") : nlohmann::json(0);
                if (jw.is_number_unsigned())
                    w = Ordinal(jw.get<std::uint64_t>());
                else if (jw.is_string())
                    w = Ordinal::parse(jw.get<std::string>());
                else
                    fail(at + "/weight", "weight must be an ordinal literal or a non-negative integer");
                a.add_transition(*from, l, *to, w);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw automaton_error(std::string("malformed automaton: ") + e.what());
    } catch (const ordinal_error& e) {
        throw automaton_error(std::string("bad weight: ") + e.what());
    }
    a.seal();
    return a;
}

inline WeightedAutomaton parse_automaton(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw automaton_error(std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
    }
    return parse_automaton(doc);
}

inline WeightedAutomaton parse_automaton(const std::string& text) { return parse_automaton(std::string_view(text)); }
inline WeightedAutomaton parse_automaton(const char* text) { return parse_automaton(std::string_view(text)); }

namespace detail {
inline std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}
} // namespace detail

/// Graphviz rendering: states in creation order, finals double-circled,
/// edges labelled "letter / weight".
inline std::string export_dot(const WeightedAutomaton& a)
{
    std::ostringstream os;
    os << "digraph automaton {\n";
    os << "  rankdir=LR;\n";
    if (a.state_count() == 0) {
        os << "}\n";
        return os.str();
    }
    os << "  __init [shape=point];\n";
    for (StateId s = 0; s < a.state_count(); ++s) {
        const StateInfo& st = a.state(s);
        os << "  s" << s << " [label=\"" << detail::dot_escape(st.name) << "\\n" << to_string(st.tag)
           << "\", shape=" << (st.final ? "doublecircle" : "circle") << "];\n";
    }
    os << "  __init -> s" << a.initial() << ";\n";
    for (StateId s = 0; s < a.state_count(); ++s)
        for (const Transition& t : a.out(s))
            os << "  s" << t.from << " -> s" << t.to << " [label=\"" << detail::dot_escape(a.letter(t.letter).name)
               << " / " << t.weight.to_string() << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace cep
