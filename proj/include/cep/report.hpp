#pragma once

// JSON renderings of analysis results. Field order is fixed.

#include <string>
#include <vector>

#include "cep/automata.hpp"
#include "cep/automaton_io.hpp"
#include "cep/containment.hpp"
#include "cep/decision.hpp"
#include "cep/proof_io.hpp"
#include "cep/restrictions.hpp"
#include "cep/soundness.hpp"
#include "cep/traces.hpp"

namespace cep {

inline ordered_json node_names(const ProofGraph& p, const Path& path)
{
    ordered_json a = ordered_json::array();
    for (NodeId n : path)
        a.push_back(p.node(n).name);
    return a;
}

inline ordered_json value_names(const ProofGraph& p, const std::vector<ValueId>& vs)
{
    ordered_json a = ordered_json::array();
    for (ValueId v : vs)
        a.push_back(p.value_name(v));
    return a;
}

inline ordered_json to_json(const ProofGraph& p, const PathTrace& pt)
{
    ordered_json j;
    j["side"] = to_string(pt.trace.side);
    j["path"] = node_names(p, pt.path);
    j["values"] = value_names(p, pt.trace.values);
    j["size"] = prog_points(p, pt.path, pt.trace).to_string();
    return j;
}

inline ordered_json to_json(const ProofGraph& p, const BinaryCycle& c)
{
    ordered_json j;
    j["path"] = node_names(p, c.path);
    j["first"] = value_names(p, c.first);
    j["second"] = value_names(p, c.second);
    j["size_first"] = prog_points(p, c.path, {Side::left, c.first}).to_string();
    j["size_second"] = prog_points(p, c.path, {Side::left, c.second}).to_string();
    return j;
}

inline ordered_json to_json(const RightTraceClass& c)
{
    ordered_json j;
    j["maximal"] = c.maximal;
    j["positive"] = c.positive;
    j["partially_maximal"] = c.partially_maximal;
    j["fully_maximal"] = c.fully_maximal;
    j["grounded"] = c.grounded;
    return j;
}

inline ordered_json to_json(const ProofGraph& p, const SoundnessReport& r)
{
    ordered_json j;
    j["sound"] = r.sound;
    j["closure_size"] = r.closure_size;
    j["rounds"] = r.rounds;
    if (r.sound) {
        j["witness"] = nullptr;
    } else {
        ordered_json w;
        w["stem"] = node_names(p, r.stem);
        w["cycle"] = node_names(p, r.cycle);
        ordered_json rel = ordered_json::array();
        for (const SlopedArc& a : r.cycle_relation)
            rel.push_back({p.value_name(a.from), p.value_name(a.to), a.slope == Slope::down ? "down" : "flat"});
        w["relation"] = rel;
        j["witness"] = w;
    }
    return j;
}

inline ordered_json to_json(const Thresholds& t)
{
    ordered_json j;
    j["trace_width"] = t.trace_width;
    j["in_degree"] = t.in_degree;
    j["cycle_threshold"] = t.cycle_threshold;
    j["max_step"] = t.max_step.to_string();
    j["n_bound"] = t.n_bound ? ordered_json(*t.n_bound) : ordered_json(nullptr);
    return j;
}

inline ordered_json to_json(const ProofGraph& p, const RestrictionsReport& r)
{
    ordered_json j;
    j["pass"] = r.pass();
    ordered_json fp;
    fp["pass"] = r.finitely_progressing.pass();
    fp["left"] = r.finitely_progressing.left;
    fp["right"] = r.finitely_progressing.right;
    ordered_json off = ordered_json::array();
    for (const EdgeRef& e : r.finitely_progressing.offending) {
        ordered_json je;
        je["from"] = p.node(e.node).name;
        je["child_index"] = e.child_index;
        je["to"] = p.node(p.node(e.node).children[e.child_index].target).name;
        je["side"] = to_string(e.side);
        je["pair"] = {p.value_name(e.from), p.value_name(e.to)};
        je["weight"] = e.weight.to_string();
        off.push_back(je);
    }
    fp["offending"] = off;
    j["finitely_progressing"] = fp;

    ordered_json dy;
    dy["pass"] = r.dynamic.pass();
    dy["left"] = r.dynamic.left;
    dy["right"] = r.dynamic.right;
    dy["witness"] = r.dynamic.witness ? to_json(p, *r.dynamic.witness) : ordered_json(nullptr);
    j["dynamic"] = dy;

    if (r.balanced) {
        ordered_json ba;
        ba["pass"] = r.balanced->balanced;
        ba["witness"] = r.balanced->witness ? to_json(p, *r.balanced->witness) : ordered_json(nullptr);
        ba["difference"] = r.balanced->difference;
        j["balanced"] = ba;
    } else {
        j["balanced"] = nullptr;
    }
    j["thresholds"] = to_json(r.thresholds);
    return j;
}

inline ordered_json to_json(const ContainmentVerdict& v)
{
    ordered_json j;
    j["status"] = to_string(v.status);
    j["engine"] = to_string(v.engine);
    j["relation"] = v.strict ? "lt" : "leq";
    j[v.engine == Engine::lagset ? "lag_cap" : "length_bound"] = v.parameter;
    j["explored"] = v.explored;
    if (v.engine == Engine::lagset) {
        j["clamped"] = v.clamped;
        j["spurious"] = v.spurious;
    }
    j["note"] = v.note;
    if (v.counterexample) {
        ordered_json c;
        c["word"] = v.counterexample->word;
        c["b_value"] = v.counterexample->b_value.to_string();
        c["a_value"] = v.counterexample->a_value.to_string();
        j["counterexample"] = c;
    } else {
        j["counterexample"] = nullptr;
    }
    return j;
}

inline ordered_json to_json(const ProofGraph& p, const OrderVerdict& v)
{
    ordered_json j;
    j["relation"] = v.strict ? "lt" : "leq";
    j["status"] = to_string(v.status);
    j["reason"] = v.reason;
    j["validation"] = to_json(p, v.validation);
    j["soundness"] = v.soundness ? to_json(p, *v.soundness) : ordered_json(nullptr);
    j["restrictions"] = v.restrictions ? to_json(p, *v.restrictions) : ordered_json(nullptr);
    j["grounded"] = v.grounded ? ordered_json(*v.grounded) : ordered_json(nullptr);
    j["containment"] = v.containment ? to_json(*v.containment) : ordered_json(nullptr);
    j["witness_trace"] = v.witness_trace ? to_json(p, *v.witness_trace) : ordered_json(nullptr);
    return j;
}

} // namespace cep
