#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace cep;
using nlohmann::json;

namespace {
struct Loop2 {
    ProofGraph p = test::fixture("loop2");
    NodeId n0 = p.require_node("n0"), n1 = p.require_node("n1"), n2 = p.require_node("n2");
    ValueId a = *p.find_value("a"), c = *p.find_value("c");
};

Trace rt(std::vector<ValueId> v) { return {Side::right, std::move(v)}; }
Trace lt(std::vector<ValueId> v) { return {Side::left, std::move(v)}; }
} // namespace

TEST_CASE("follows on loop2")
{
    Loop2 f;
    CHECK(follows(f.p, {f.n0, f.n1, f.n2}, rt({f.c, f.c, f.c})));
    CHECK(follows(f.p, {f.n0, f.n1}, lt({f.a})));
    CHECK_THROWS_AS(follows(f.p, {f.n0, f.n1}, rt({f.c, f.a})), query_error);
    CHECK_THROWS(follows(f.p, {f.n0, f.n2}, rt({f.c})));
    CHECK_THROWS(follows(f.p, {f.n0}, rt({f.c, f.c})));
}

TEST_CASE("sizes are reverse sums")
{
    Loop2 f;
    CHECK(prog_points(f.p, {f.n0}, rt({f.c})).is_zero());
    CHECK(prog_points(f.p, {f.n0, f.n1, f.n0, f.n1, f.n2}, rt({f.c, f.c, f.c, f.c, f.c})) == Ordinal(2));

    // weights w then 1 along the path
    json doc = test::fixture_json("loop2");
    doc["delta"][0]["pairs"][0][2] = "w";
    doc["nodes"][0]["children"] = {"n1"};
    doc["delta"][1]["pairs"][0][2] = 1;
    const ProofGraph q = parse_proof_graph(doc);
    const NodeId m0 = q.require_node("n0"), m1 = q.require_node("n1");
    const ValueId a = *q.find_value("a");
    CHECK(prog_points(q, {m0, m1, m0}, lt({a, a, a})) == Ordinal::omega());
}

TEST_CASE("right trace classification")
{
    Loop2 f;
    RightTraceClass k = classify_right_trace(f.p, {f.n0, f.n1, f.n2}, rt({f.c, f.c, f.c}));
    CHECK(k.maximal);
    CHECK(k.positive);
    CHECK(k.partially_maximal);
    CHECK_FALSE(k.fully_maximal);
    CHECK(k.grounded);

    k = classify_right_trace(f.p, {f.n0, f.n1}, rt({f.c, f.c}));
    CHECK_FALSE(k.maximal);

    json doc = test::fixture_json("loop2");
    doc["nodes"][2]["excluded"] = {"c"};
    const ProofGraph q = parse_proof_graph(doc);
    k = classify_right_trace(q, {f.n0, f.n1, f.n2}, rt({f.c, f.c, f.c}));
    CHECK(k.maximal);
    CHECK_FALSE(k.positive);
}

TEST_CASE("positive maximal right traces of loop2")
{
    Loop2 f;
    auto r = enumerate_right_maximal(f.p, f.n0, f.c, 3);
    REQUIRE(r.size() == 1);
    CHECK(r[0].path == Path{f.n0, f.n1, f.n2});
    CHECK(r[0].trace.values == std::vector<ValueId>{f.c, f.c, f.c});

    r = enumerate_right_maximal(f.p, f.n0, f.c, 5);
    REQUIRE(r.size() == 2);
    CHECK(r[0].path == Path{f.n0, f.n1, f.n0, f.n1, f.n2});
    CHECK(r[1].path == Path{f.n0, f.n1, f.n2});

    const ProofGraph u = test::fixture("unsound1");
    CHECK_THROWS_AS(enumerate_right_maximal(u, u.root(), *u.find_value("a"), 3), query_error);
}

TEST_CASE("simple cycles of loop2")
{
    Loop2 f;
    const auto left = simple_cycles(f.p, Side::left);
    REQUIRE(left.size() == 2);
    CHECK(left[0].path == Path{f.n0, f.n1, f.n0});
    CHECK(left[0].trace.values == std::vector<ValueId>{f.a, f.a, f.a});
    CHECK(left[1].path == Path{f.n1, f.n0, f.n1});

    const auto bin = simple_binary_cycles(f.p);
    REQUIRE(bin.size() == 2);
    CHECK(bin[0].first == bin[0].second);
    CHECK(bin[0].first == std::vector<ValueId>{f.a, f.a, f.a});

    json doc = test::fixture_json("loop2");
    doc["nodes"][1]["children"] = {"n2"};
    json kept = json::array();
    for (auto& b : doc["delta"])
        if (!(b["from"] == "n1" && b["child_index"] == 1))
            kept.push_back(b);
    doc["delta"] = kept;
    const ProofGraph acyclic = parse_proof_graph(doc);
    CHECK(simple_cycles(acyclic, Side::left).empty());
    CHECK(simple_cycles(acyclic, Side::right).empty());
    CHECK(simple_binary_cycles(acyclic).empty());
}

TEST_CASE("enumerated traces agree with the direct oracle")
{
    std::mt19937_64 rng(31);
    for (int i = 0; i < 60; ++i) {
        const ProofGraph p = test::random_proof(rng);
        for (Side side : {Side::left, Side::right})
            for (ValueId v : p.node(p.root()).values(side)) {
                std::set<std::pair<Path, std::vector<ValueId>>> lib, ref;
                for (const PathTrace& pt : enumerate_traces(p, side, p.root(), v, 5)) {
                    CHECK(pt.path.size() == pt.trace.values.size());
                    CHECK(follows(p, pt.path, pt.trace));
                    CHECK(test::oracle_prog(p, pt.path, pt.trace).same(prog_points(p, pt.path, pt.trace)));
                    lib.insert({pt.path, pt.trace.values});
                }
                for (const Path& path : test::all_paths(p, p.root(), 5))
                    for (auto& t : test::oracle_traces(p, side, path, v, path.size()))
                        ref.insert({path, t});
                CHECK(lib == ref);
            }
    }
}

TEST_CASE("right maximal enumeration returns positive maximal traces")
{
    std::mt19937_64 rng(32);
    for (int i = 0; i < 80; ++i) {
        const ProofGraph p = test::random_proof(rng);
        for (ValueId c : p.node(p.root()).con_values) {
            std::size_t expected = 0;
            for (const PathTrace& pt : enumerate_traces(p, Side::right, p.root(), c, 6)) {
                const RightTraceClass k = classify_right_trace(p, pt.path, pt.trace);
                expected += k.maximal && k.positive;
            }
            const auto got = enumerate_right_maximal(p, p.root(), c, 6);
            CHECK(got.size() == expected);
            for (const PathTrace& pt : got) {
                const RightTraceClass k = classify_right_trace(p, pt.path, pt.trace);
                CHECK(k.maximal);
                CHECK(k.positive);
            }
            CHECK(std::is_sorted(got.begin(), got.end(), [](const PathTrace& x, const PathTrace& y) {
                return std::tie(x.path, x.trace.values) < std::tie(y.path, y.trace.values);
            }));
        }
    }
}

TEST_CASE("size of a concatenation")
{
    std::mt19937_64 rng(33);
    int checked = 0;
    for (int i = 0; i < 80; ++i) {
        const ProofGraph p = test::random_proof(rng);
        for (ValueId v : p.node(p.root()).ant_values)
            for (const PathTrace& pt : enumerate_traces(p, Side::left, p.root(), v, 6)) {
                const std::size_t n = pt.path.size();
                for (std::size_t k = 1; k <= n; ++k) {
                    const Path p1(pt.path.begin(), pt.path.begin() + k), p2(pt.path.begin() + k - 1, pt.path.end());
                    const Trace t1{Side::left, {pt.trace.values.begin(), pt.trace.values.begin() + k}};
                    const Trace t2{Side::left, {pt.trace.values.begin() + k - 1, pt.trace.values.end()}};
                    CHECK(prog_points(p, pt.path, pt.trace) == prog_points(p, p2, t2) + prog_points(p, p1, t1));
                    ++checked;
                }
            }
    }
    CHECK(checked > 100);
}

TEST_CASE("injective traces are determined by their first and last values")
{
    std::mt19937_64 rng(34);
    test::GenOptions o;
    o.injective = true;
    for (int i = 0; i < 80; ++i) {
        const ProofGraph p = test::random_proof(rng, o);
        REQUIRE(validate(p).trace_injective);
        for (Side side : {Side::left, Side::right})
            for (ValueId v : p.node(p.root()).values(side)) {
                std::map<std::pair<Path, ValueId>, std::vector<ValueId>> seen;
                for (const PathTrace& pt : enumerate_traces(p, side, p.root(), v, 6)) {
                    auto [it, fresh] = seen.emplace(std::make_pair(pt.path, pt.trace.values.back()), pt.trace.values);
                    if (!fresh)
                        CHECK(it->second == pt.trace.values);
                }
            }
    }
}

TEST_CASE("shorter traces may follow a longer path")
{
    Loop2 f;
    CHECK(follows(f.p, {f.n0, f.n1, f.n0}, lt({f.a, f.a})));
    CHECK(prog_points(f.p, {f.n0, f.n1, f.n0}, lt({f.a, f.a})) == Ordinal(1));
}

TEST_CASE("reachable pairs")
{
    Loop2 f;
    const auto r = reachable(f.p, Side::left, {f.n0, f.a});
    CHECK(r == std::set<NodeValue>{{f.n0, f.a}, {f.n1, f.a}, {f.n2, f.a}});
}
