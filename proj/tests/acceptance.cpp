// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "cep/cli.hpp"
#include "properties.hpp"

using namespace cep;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kFixtureSeconds = 1.0;
constexpr int kOrdinalTriples = 500;
constexpr int kCorpusProofs = 100;
constexpr std::size_t kFaithfulLen = 8;
constexpr std::size_t kApproxLen = 6;
constexpr std::size_t kRunBoundLen = 6;
constexpr int kBalancedInstances = 100;
constexpr std::size_t kBalancedLen = 10;
constexpr int kCoherenceInstances = 100;
constexpr std::uint64_t kDefinitionLen = 10;
constexpr std::uint64_t kDefinitionLenRetry = 16;
constexpr double kMaxUnknownRate = 0.10;
constexpr int kEnginePairs = 200;
constexpr std::uint64_t kOracleLen = 12;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
    std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << std::endl;
    failures += ok ? 0 : 1;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_tally(const test::Tally& t)
{
    std::string s = std::to_string(t.checked) + " checks, " + std::to_string(t.violations) + " violations";
    if (!t.notes.empty())
        s += " (first: " + t.notes.front() + ")";
    return s;
}

std::vector<ProofGraph> corpus(std::uint64_t seed, test::GenOptions o = {})
{
    std::mt19937_64 rng(seed);
    std::vector<ProofGraph> out;
    for (int i = 0; i < kCorpusProofs; ++i)
        out.push_back(test::random_proof(rng, o));
    return out;
}

void fixture_verdicts()
{
    bool ok = true;
    double worst = 0;
    std::string detail;
    auto timed = [&](const std::string& what, auto&& f) {
        const auto t0 = Clock::now();
        const bool good = f();
        const double s = seconds_since(t0);
        worst = std::max(worst, s);
        ok = ok && good && s < kFixtureSeconds;
        detail += what + (good ? " ok" : " WRONG") + "; ";
    };
    const ProofGraph loop2 = test::fixture("loop2"), strict2 = test::fixture("strict2"), unsound1 = test::fixture("unsound1");
    timed("loop2 <=", [&] { return decide_order(loop2, test::root_query(loop2), false).status == OrderStatus::holds; });
    timed("loop2 <", [&] { return decide_order(loop2, test::root_query(loop2), true).status == OrderStatus::fails; });
    timed("strict2 <", [&] { return decide_order(strict2, test::root_query(strict2), true).status == OrderStatus::holds; });
    timed("unsound1 soundness", [&] {
        const SoundnessReport r = check_global_soundness(unsound1);
        return !r.sound && r.cycle.size() >= 2 && r.cycle.front() == r.cycle.back();
    });
    char buf[64];
    std::snprintf(buf, sizeof buf, "slowest %.3f s (limit %.1f s)", worst, kFixtureSeconds);
    report(1, "fixture verdicts", ok, detail + buf);
}

void ordinal_laws()
{
    std::mt19937_64 rng(2001);
    std::size_t checked = 0, bad = 0;
    auto law = [&](bool ok) {
        ++checked;
        bad += ok ? 0 : 1;
    };
    for (int i = 0; i < kOrdinalTriples; ++i) {
        const Ordinal a = test::random_ordinal(rng), b = test::random_ordinal(rng), c = test::random_ordinal(rng);
        law(ord_add(ord_add(a, b), c) == ord_add(a, ord_add(b, c)));
        law(ord_add(a, Ordinal()) == a && ord_add(Ordinal(), a) == a);
        law(test::DenseOrdinal::of(a + b).same(a + b) && add(test::DenseOrdinal::of(a), test::DenseOrdinal::of(b)).same(a + b));
        const Weight x(a), y(b), z(c);
        law(trop_otimes(trop_otimes(x, y), z) == trop_otimes(x, trop_otimes(y, z)));
        law(trop_oplus(trop_oplus(x, y), z) == trop_oplus(x, trop_oplus(y, z)));
        law(trop_oplus(x, y) == trop_oplus(y, x));
        law(trop_otimes(x, trop_oplus(y, z)) == trop_oplus(trop_otimes(x, y), trop_otimes(x, z)));
        law(trop_otimes(trop_oplus(y, z), x) == trop_oplus(trop_otimes(y, x), trop_otimes(z, x)));
        law(trop_otimes(x, Weight::zero()) == x && trop_otimes(Weight::zero(), x) == x);
        law(trop_oplus(x, Weight::bottom()) == x);
        law(trop_otimes(x, Weight::bottom()).is_bottom() && trop_otimes(Weight::bottom(), x).is_bottom());
    }
    const Ordinal one(1), w = Ordinal::omega();
    const bool noncomm = ord_add(one, w) != ord_add(w, one);
    const bool product = trop_otimes(Weight(w), Weight(one)) == Weight(w);
    report(2, "ordinal laws", bad == 0 && noncomm && product,
           std::to_string(kOrdinalTriples) + " triples, " + std::to_string(checked) + " checks, " + std::to_string(bad) +
               " violations; 1+w != w+1: " + (noncomm ? "yes" : "no") + "; w (x) 1 = w: " + (product ? "yes" : "no"));
}

void faithfulness(const std::vector<ProofGraph>& proofs)
{
    test::Tally t;
    for (const ProofGraph& p : proofs)
        t += test::check_faithfulness(p, test::root_query(p), kFaithfulLen);
    report(3, "automata faithfulness", t.violations == 0 && t.checked > 0,
           std::to_string(proofs.size()) + " proofs, words <= " + std::to_string(kFaithfulLen) + ", " + fmt_tally(t));
}

void approximation(const std::vector<ProofGraph>& proofs)
{
    test::Tally t;
    for (const ProofGraph& p : proofs)
        for (std::uint32_t n : {1u, 2u, 3u})
            t += test::check_approximation(p, test::root_query(p), n, kApproxLen);
    report(4, "approximation collapse and lifting", t.violations == 0 && t.checked > 0,
           "n in {1,2,3}, runs <= " + std::to_string(kApproxLen) + " letters, " + fmt_tally(t));
}

void ambiguity_bounds()
{
    const ProofGraph p = test::fixture("ambig1");
    const TracePairQuery q = make_query(p, "n0", "a", "c");
    const bool full_inf = ambiguity(build_antecedent_full(p, q)) == Ambiguity::infinite;
    bool approx_fin = true;
    for (std::uint32_t n : {1u, 2u, 3u})
        approx_fin = approx_fin && ambiguity(build_antecedent_approx(p, q, n)) == Ambiguity::finite;

    test::GenOptions o;
    o.injective = true;
    test::Tally t;
    for (const ProofGraph& g : corpus(2005, o))
        for (std::uint32_t n : {1u, 2u, 3u})
            t += test::check_run_bounds(g, test::root_query(g), n, kRunBoundLen);
    report(5, "ambiguity", full_inf && approx_fin && t.violations == 0,
           std::string("ambig1 full: ") + (full_inf ? "infinite" : "NOT infinite") + ", A(1..3): " +
               (approx_fin ? "finite" : "NOT finite") + "; run bounds on " + std::to_string(kCorpusProofs) +
               " trace-injective proofs, words <= " + std::to_string(kRunBoundLen) + ": " + fmt_tally(t));
}

void size_difference()
{
    std::mt19937_64 rng(2006);
    test::Tally t;
    for (int i = 0; i < kBalancedInstances; ++i) {
        auto [p, q] = test::random_balanced(rng);
        t += test::check_size_difference(p, q, kBalancedLen);
    }
    report(6, "left trace size difference bound", t.violations == 0 && t.checked > 0,
           std::to_string(kBalancedInstances) + " restricted instances, paths <= " + std::to_string(kBalancedLen) + ", " +
               fmt_tally(t));
}

void coherence()
{
    std::mt19937_64 rng(2007);
    std::size_t decided = 0, unknown = 0, disagree = 0, late = 0, total = 0;
    std::string first;
    for (int i = 0; i < kCoherenceInstances; ++i) {
        auto [p, q] = test::random_restricted(rng);
        for (bool strict : {false, true}) {
            ++total;
            const OrderVerdict v = decide_order(p, q, strict);
            if (v.status == OrderStatus::unknown || v.status == OrderStatus::not_applicable) {
                ++unknown;
                continue;
            }
            ++decided;
            const bool cx = definition_oracle(p, q, strict, kDefinitionLen).counterexample_found;
            bool ok = (v.status == OrderStatus::holds) != cx;
            if (!ok && v.status == OrderStatus::fails && definition_oracle(p, q, strict, kDefinitionLenRetry).counterexample_found) {
                ok = true;
                ++late;
            }
            if (!ok) {
                ++disagree;
                if (first.empty())
                    first = "instance " + std::to_string(i) + (strict ? " strict" : " non-strict");
            }
        }
    }
    const double rate = total ? static_cast<double>(unknown) / static_cast<double>(total) : 1.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu decisions, %zu disagreements, %zu FAILS confirmed only at length %llu, unknown rate %.1f%% (limit %.0f%%)",
                  decided, disagree, late, static_cast<unsigned long long>(kDefinitionLenRetry), 100.0 * rate,
                  100.0 * kMaxUnknownRate);
    report(7, "decision coherence", disagree == 0 && rate < kMaxUnknownRate, buf + (first.empty() ? "" : "; first: " + first));
}

void engines()
{
    std::mt19937_64 rng(2008);
    std::size_t contradictions = 0, refuted = 0, verified = 0, unknown = 0, bad_witness = 0;
    for (int i = 0; i < kEnginePairs; ++i) {
        auto [p, q] = test::random_restricted(rng);
        const bool strict = i % 2 == 1;
        const Thresholds t = compute_thresholds(p, q);
        const WeightedAutomaton b = build_consequent(p, q);
        const WeightedAutomaton a = build_antecedent_approx(p, q, static_cast<std::uint32_t>(*t.n_bound));
        const ContainmentVerdict l = decide_containment(b, a, strict, {default_lag_cap(p, t)});
        const ContainmentVerdict o = oracle_compare(b, a, strict, kOracleLen);
        const bool lr = l.status == ContainmentStatus::refuted, orf = o.status == ContainmentStatus::refuted;
        if (l.status == ContainmentStatus::verified && orf)
            ++contradictions;
        if (lr && !orf && l.counterexample->word.size() <= kOracleLen)
            ++contradictions;
        if (lr && orf && l.counterexample->word != o.counterexample->word)
            ++contradictions;
        verified += l.status == ContainmentStatus::verified;
        unknown += !lr && l.status != ContainmentStatus::verified;
        for (const ContainmentVerdict* v : {&l, &o}) {
            if (!v->counterexample)
                continue;
            ++refuted;
            const Counterexample& c = *v->counterexample;
            const bool again = violates(language_value(b, c.word), language_value(a, c.word), strict) &&
                               language_value(b, c.word) == c.b_value && language_value(a, c.word) == c.a_value;
            bad_witness += again ? 0 : 1;
        }
    }
    report(8, "engine cross-validation", contradictions == 0 && bad_witness == 0,
           std::to_string(kEnginePairs) + " pairs, oracle length " + std::to_string(kOracleLen) + ": " +
               std::to_string(contradictions) + " contradictions; lagset verified " + std::to_string(verified) +
               ", undecided " + std::to_string(unknown) + "; " + std::to_string(refuted) + " witnesses, " +
               std::to_string(bad_witness) + " failed revalidation");
}

struct CliResult {
    int code;
    std::string out, err;
};

CliResult cli_run(std::vector<std::string> args)
{
    args.insert(args.begin(), "cep");
    std::vector<const char*> argv;
    for (const auto& s : args)
        argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

void determinism()
{
    const auto tmp = std::filesystem::temp_directory_path();
    const std::string bfile = (tmp / "cep_acceptance_b.json").string(), afile = (tmp / "cep_acceptance_a.json").string();
    const std::vector<std::string> q{"--node", "n0", "--ant", "a", "--con", "c"};
    auto with_q = [&](std::vector<std::string> v) {
        v.insert(v.end(), q.begin(), q.end());
        return v;
    };
    std::vector<std::vector<std::string>> commands;
    for (const char* name : {"loop2", "strict2", "unsound1", "ambig1"}) {
        const std::string f = test::fixture_path(name);
        commands.push_back({"validate", f});
        commands.push_back({"soundness", f});
        commands.push_back({"traces", f, "--node", "n0", "--value", "c", "--max-len", "7"});
        commands.push_back({"traces", f, "--cycles", "binary"});
        commands.push_back(with_q({"automata", f}));
        commands.push_back(with_q({"automata", f, "--full", "--ambiguity"}));
        commands.push_back(with_q({"automata", f, "--approx", "3", "--ambiguity"}));
        commands.push_back(with_q({"restrictions", f}));
        commands.push_back(with_q({"order", f}));
        commands.push_back(with_q({"order", f, "--strict"}));
        commands.push_back(with_q({"order", f, "--engine", "oracle"}));
    }
    const std::string loop2 = test::fixture_path("loop2");
    cli_run(with_q({"automata", loop2, "--export", bfile}));
    cli_run(with_q({"automata", loop2, "--approx", "6", "--export", afile}));
    commands.push_back({"contain", bfile, afile});
    commands.push_back({"contain", bfile, afile, "--strict"});

    std::size_t reports = 0, mismatches = 0;
    for (auto cmd : commands)
        for (bool json : {false, true}) {
            std::vector<std::string> base = cmd;
            if (json)
                base.insert(base.begin(), "--json");
            std::vector<std::string> one = base, four = base;
            one.insert(one.begin(), {"--jobs", "1"});
            four.insert(four.begin(), {"--jobs", "4"});
            const CliResult x = cli_run(base), y = cli_run(base), z1 = cli_run(one), z4 = cli_run(four);
            ++reports;
            const bool same = x.out == y.out && x.out == z1.out && x.out == z4.out && x.code == y.code &&
                              x.code == z1.code && x.code == z4.code && x.err == z4.err;
            mismatches += same ? 0 : 1;
        }
    set_default_jobs(1);
    std::remove(bfile.c_str());
    std::remove(afile.c_str());
    report(9, "CLI determinism", mismatches == 0,
           std::to_string(reports) + " reports (rerun, --jobs 1, --jobs 4), " + std::to_string(mismatches) + " differ");
}

} // namespace

int main()
{
    const auto t0 = Clock::now();
    fixture_verdicts();
    ordinal_laws();
    const std::vector<ProofGraph> proofs = corpus(2003);
    faithfulness(proofs);
    approximation(proofs);
    ambiguity_bounds();
    size_difference();
    coherence();
    engines();
    determinism();
    std::printf("total %.1f s, %d failed\n", seconds_since(t0), failures);
    return failures == 0 ? 0 : 1;
}
