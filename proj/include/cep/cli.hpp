#pragma once

// The `cep` command line front end. `run` takes explicit streams so it can be
// driven from tests.
//
// Exit codes: 0 positive outcome, 3 negative outcome, 4 not applicable,
// 5 undecided, 2 usage error, 1 input error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cep/automaton_io.hpp"
#include "cep/decision.hpp"
#include "cep/detail/parallel.hpp"
#include "cep/proof_io.hpp"
#include "cep/report.hpp"

namespace cep::cli {

enum Exit : int { ok = 0, input_error = 1, usage_error = 2, negative = 3, not_applicable = 4, undecided = 5 };

inline std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

inline std::shared_ptr<spdlog::logger> logger()
{
    static std::shared_ptr<spdlog::logger> log = [] {
        auto l = spdlog::get("cep");
        if (!l)
            l = spdlog::stderr_color_mt("cep");
        const char* env = std::getenv("CEP_LOG");
        l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
        return l;
    }();
    return log;
}

namespace detail {

struct Common {
    bool json = false;
    bool timing = false;
    unsigned jobs = 1;
};

struct Input {
    std::string path;
    std::string bytes;
};

inline Input read_input(const std::string& path)
{
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return {path, ss.str()};
    }
    return {path, read_file(path)};
}

/// Arguments after the program name, without the options that must not
/// influence report bytes.
inline ordered_json command_echo(int argc, const char* const* argv)
{
    ordered_json a = ordered_json::array();
    for (int i = 1; i < argc; ++i) {
        const std::string s = argv[i];
        if (s == "--timing")
            continue;
        if (s == "--jobs" || s == "-j") {
            ++i;
            continue;
        }
        if (s.rfind("--jobs=", 0) == 0)
            continue;
        a.push_back(s);
    }
    return a;
}

inline void add_query_options(CLI::App* sub, std::string& node, std::string& ant, std::string& con)
{
    sub->add_option("--node", node, "query node id")->required();
    sub->add_option("--ant", ant, "antecedent trace value")->required();
    sub->add_option("--con", con, "consequent trace value")->required();
}

inline std::string join(const ProofGraph& p, const Path& path)
{
    std::string s = "[";
    for (std::size_t i = 0; i < path.size(); ++i)
        s += (i ? "," : "") + p.node(path[i]).name;
    return s + "]";
}

inline std::string join_values(const ProofGraph& p, const std::vector<ValueId>& vs)
{
    std::string s = "[";
    for (std::size_t i = 0; i < vs.size(); ++i)
        s += (i ? "," : "") + p.value_name(vs[i]);
    return s + "]";
}

inline std::string join_word(const Word& w)
{
    std::string s = "[";
    for (std::size_t i = 0; i < w.size(); ++i)
        s += (i ? "," : "") + w[i];
    return s + "]";
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"cep: cyclic entailment proofs, trace value orderings and weighted automata", "cep"};
    app.require_subcommand(1);
    app.fallthrough();
    detail::Common common;
    app.add_flag("--json", common.json, "print a JSON report");
    app.add_flag("--timing", common.timing, "include wall-clock timing in the report");
    app.add_option("-j,--jobs", common.jobs, "worker threads")->check(CLI::Range(1u, 256u));

    std::string file, file2, node, ant, con, value, cycles, dot_out, export_out, engine = "lagset";
    std::uint64_t max_len = 6, approx = 0, lag_cap = 0, oracle_len = 12;
    bool strict = false, full = false, consequent = false, amb = false;

    auto* validate_cmd = app.add_subcommand("validate", "structural validation of a proof");
    validate_cmd->add_option("file", file, "proof JSON ('-' for stdin)")->required();

    auto* sound_cmd = app.add_subcommand("soundness", "global soundness check");
    sound_cmd->add_option("file", file, "proof JSON")->required();

    auto* traces_cmd = app.add_subcommand("traces", "enumerate traces or simple cycles");
    traces_cmd->add_option("file", file, "proof JSON")->required();
    traces_cmd->add_option("--node", node, "start node");
    traces_cmd->add_option("--value", value, "start trace value");
    traces_cmd->add_option("--max-len", max_len, "maximum path length")->check(CLI::Range(1u, 64u));
    traces_cmd->add_option("--cycles", cycles, "list simple cycles instead")->check(CLI::IsMember({"left", "right", "binary"}));

    auto* automata_cmd = app.add_subcommand("automata", "build a weighted automaton for a query");
    automata_cmd->add_option("file", file, "proof JSON")->required();
    detail::add_query_options(automata_cmd, node, ant, con);
    auto* approx_opt = automata_cmd->add_option("--approx", approx, "approximate antecedent automaton level")
                           ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000}));
    auto* full_opt = automata_cmd->add_flag("--full", full, "full antecedent automaton");
    auto* con_opt = automata_cmd->add_flag("--consequent", consequent, "consequent automaton (default)");
    approx_opt->excludes(full_opt)->excludes(con_opt);
    full_opt->excludes(con_opt);
    automata_cmd->add_option("--dot", dot_out, "write Graphviz rendering to this file");
    automata_cmd->add_option("--export", export_out, "write the automaton as JSON to this file");
    automata_cmd->add_flag("--ambiguity", amb, "classify the ambiguity of the automaton");

    auto* restr_cmd = app.add_subcommand("restrictions", "check the decidability restrictions for a query");
    restr_cmd->add_option("file", file, "proof JSON")->required();
    detail::add_query_options(restr_cmd, node, ant, con);

    auto* contain_cmd = app.add_subcommand("contain", "quantitative containment between two automata files");
    contain_cmd->add_option("b", file, "automaton B (JSON)")->required();
    contain_cmd->add_option("a", file2, "automaton A (JSON)")->required();

    auto* order_cmd = app.add_subcommand("order", "decide the trace value ordering for a query");
    order_cmd->add_option("file", file, "proof JSON")->required();
    detail::add_query_options(order_cmd, node, ant, con);

    for (auto* sub : {contain_cmd, order_cmd}) {
        sub->add_flag("--strict", strict, "strict ordering");
        sub->add_option("--engine", engine, "containment engine")->check(CLI::IsMember({"lagset", "oracle"}));
        sub->add_option("--lag-cap", lag_cap, "lag cap for the lagset engine")->check(CLI::PositiveNumber);
        sub->add_option("--oracle-len", oracle_len, "word length bound for the oracle engine")
            ->check(CLI::Range(std::uint64_t{0}, std::uint64_t{64}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    set_default_jobs(common.jobs);
    auto log = logger();
    const auto t0 = std::chrono::steady_clock::now();

    ordered_json report;
    report["tool"] = "cep";
    report["command"] = detail::command_echo(argc, argv);
    ordered_json inputs = ordered_json::array();
    std::ostringstream text;

    auto emit = [&](ordered_json result) {
        report["inputs"] = inputs;
        report["result"] = std::move(result);
        if (common.timing)
            report["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (common.json)
            out << report.dump(2) << "\n";
        else
            out << text.str();
    };

    try {
        auto load = [&](const std::string& path) {
            detail::Input in = detail::read_input(path);
            inputs.push_back({{"path", path}, {"sha256", sha256_hex(in.bytes)}});
            return in;
        };

        if (app.got_subcommand(contain_cmd)) {
            const WeightedAutomaton b = parse_automaton(load(file).bytes);
            const WeightedAutomaton a = parse_automaton(load(file2).bytes);
            log->debug("contain: {} / {} states", b.state_count(), a.state_count());
            const ContainmentVerdict v = engine == "oracle" ? oracle_compare(b, a, strict, oracle_len)
                                                            : decide_containment(b, a, strict, {lag_cap ? lag_cap : 64});
            text << to_string(v.status) << "\n";
            if (v.counterexample)
                text << "counterexample " << detail::join_word(v.counterexample->word) << ": L_b = "
                     << v.counterexample->b_value.to_string() << ", L_a = " << v.counterexample->a_value.to_string() << "\n";
            emit(to_json(v));
            return v.status == ContainmentStatus::verified  ? ok
                   : v.status == ContainmentStatus::refuted ? negative
                                                            : undecided;
        }

        const ProofGraph p = parse_proof_graph(load(file).bytes);
        log->debug("loaded {} nodes", p.size());

        if (app.got_subcommand(validate_cmd)) {
            const ValidationReport r = validate(p);
            for (const Violation& v : r.violations)
                text << v.kind << ": " << v.message << "\n";
            text << (r.clean() ? "valid\n" : "findings: " + std::to_string(r.violations.size()) + "\n");
            emit(to_json(p, r));
            return r.clean() ? ok : negative;
        }

        if (app.got_subcommand(sound_cmd)) {
            const SoundnessReport r = check_global_soundness(p);
            if (r.sound)
                text << "sound\n";
            else
                text << "unsound: stem " << detail::join(p, r.stem) << ", cycle " << detail::join(p, r.cycle) << "\n";
            emit(to_json(p, r));
            return r.sound ? ok : negative;
        }

        if (app.got_subcommand(traces_cmd)) {
            ordered_json res;
            if (!cycles.empty()) {
                ordered_json list = ordered_json::array();
                if (cycles == "binary") {
                    for (const BinaryCycle& c : simple_binary_cycles(p)) {
                        list.push_back(to_json(p, c));
                        text << detail::join(p, c.path) << " " << detail::join_values(p, c.first) << " "
                             << detail::join_values(p, c.second) << "\n";
                    }
                } else {
                    for (const PathTrace& c : simple_cycles(p, cycles == "left" ? Side::left : Side::right)) {
                        list.push_back(to_json(p, c));
                        text << detail::join(p, c.path) << " " << detail::join_values(p, c.trace.values) << "\n";
                    }
                }
                res["cycles"] = cycles;
                res["items"] = list;
            } else {
                if (node.empty() || value.empty())
                    throw query_error("traces needs --node and --value, or --cycles");
                const NodeId n = p.require_node(node);
                const auto v = p.find_value(value);
                if (!v)
                    throw query_error("unknown trace value \"" + value + "\"");
                const bool right = p.has_value(n, Side::right, *v);
                if (!right && !p.has_value(n, Side::left, *v))
                    throw query_error("\"" + value + "\" is not a trace value of \"" + node + "\"");
                const auto list = right ? enumerate_right_maximal(p, n, *v, max_len)
                                        : enumerate_traces(p, Side::left, n, *v, max_len);
                ordered_json items = ordered_json::array();
                for (const PathTrace& pt : list) {
                    ordered_json j = to_json(p, pt);
                    if (right)
                        j["class"] = to_json(classify_right_trace(p, pt.path, pt.trace));
                    items.push_back(j);
                    text << detail::join(p, pt.path) << " " << detail::join_values(p, pt.trace.values) << " size "
                         << prog_points(p, pt.path, pt.trace).to_string() << "\n";
                }
                res["side"] = right ? "right" : "left";
                res["selection"] = right ? "positive maximal" : "all";
                res["max_len"] = max_len;
                res["items"] = items;
            }
            emit(res);
            return ok;
        }

        const TracePairQuery q = make_query(p, node, ant, con);

        if (app.got_subcommand(automata_cmd)) {
            WeightedAutomaton a = approx ? build_antecedent_approx(p, q, static_cast<std::uint32_t>(approx))
                                  : full ? build_antecedent_full(p, q)
                                         : build_consequent(p, q);
            if (!dot_out.empty()) {
                std::ofstream f(dot_out, std::ios::binary);
                if (!f)
                    throw proof_error("cannot write \"" + dot_out + "\"");
                f << export_dot(a);
            }
            const ordered_json aj = to_json(a, &p);
            if (!export_out.empty()) {
                std::ofstream f(export_out, std::ios::binary);
                if (!f)
                    throw proof_error("cannot write \"" + export_out + "\"");
                f << aj.dump(2) << "\n";
            }
            std::size_t finals = 0;
            for (const StateInfo& s : a.states())
                finals += s.final ? 1 : 0;
            ordered_json res;
            res["kind"] = to_string(a.kind);
            res["states"] = a.state_count();
            res["transitions"] = a.transition_count();
            res["finals"] = finals;
            if (a.kind == AutomatonKind::consequent)
                res["grounded"] = is_grounded(a, p);
            if (amb)
                res["ambiguity"] = to_string(ambiguity(a));
            res["automaton"] = aj;
            text << to_string(a.kind) << ": " << a.state_count() << " states, " << a.transition_count()
                 << " transitions, " << finals << " final\n";
            if (amb)
                text << "ambiguity: " << to_string(ambiguity(a)) << "\n";
            emit(res);
            return ok;
        }

        if (app.got_subcommand(restr_cmd)) {
            const RestrictionsReport r = check_restrictions(p, q);
            text << "finitely progressing: " << (r.finitely_progressing.pass() ? "yes" : "no") << "\n"
                 << "dynamic: " << (r.dynamic.pass() ? "yes" : "no") << "\n"
                 << "balanced: " << (r.balanced ? (r.balanced->balanced ? "yes" : "no") : "not checked") << "\n"
                 << "W=" << r.thresholds.trace_width << " in=" << r.thresholds.in_degree
                 << " C=" << r.thresholds.cycle_threshold << " maxStep=" << r.thresholds.max_step.to_string()
                 << " N=" << (r.thresholds.n_bound ? std::to_string(*r.thresholds.n_bound) : "undefined") << "\n";
            emit(to_json(p, r));
            return r.pass() ? ok : negative;
        }

        if (app.got_subcommand(order_cmd)) {
            DecisionOptions opt;
            opt.engine = engine == "oracle" ? Engine::oracle : Engine::lagset;
            if (lag_cap)
                opt.lag_cap = lag_cap;
            opt.oracle_len = oracle_len;
            log->debug("order: {} {} {} strict={}", node, ant, con, strict);
            const OrderVerdict v = decide_order(p, q, strict, opt);
            text << to_string(v.status) << " (" << v.reason << ")\n";
            if (v.containment && v.containment->counterexample)
                text << "counterexample " << detail::join_word(v.containment->counterexample->word)
                     << ": consequent " << v.containment->counterexample->b_value.to_string() << ", antecedent "
                     << v.containment->counterexample->a_value.to_string() << "\n";
            if (v.soundness && !v.soundness->sound)
                text << "unsound cycle " << detail::join(p, v.soundness->cycle) << "\n";
            emit(to_json(p, v));
            switch (v.status) {
            case OrderStatus::holds: return ok;
            case OrderStatus::fails: return negative;
            case OrderStatus::not_applicable: return not_applicable;
            case OrderStatus::unknown: return undecided;
            }
        }
    } catch (const proof_error& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const query_error& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const automaton_error& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    return ok;
}

} // namespace cep::cli
