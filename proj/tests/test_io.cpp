#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "zerone/io.hpp"

using namespace zerone;
using testgen::Draw;

TEST_CASE("format_double pins 12 significant digits") {
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(0.2780719051126378) == "0.278071905113");
    CHECK(io::format_double(1e-9) == "1e-09");
}

TEST_CASE("fnv1a64 golden values") {
    CHECK(io::fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(io::fnv1a64_hex("a") != io::fnv1a64_hex("b"));
}

TEST_CASE("dist round trip and validation") {
    const info::Dist d =
        io::parse_dist(R"({"alphabet":["0","1"],"probs":[0.25,0.75]})");
    CHECK(d.probs[1] == 0.75);
    const info::Dist back = io::parse_dist(io::dump_dist(d));
    CHECK(back.alphabet == d.alphabet);
    CHECK(back.probs == d.probs);

    CHECK_THROWS_AS(io::parse_dist(R"({"alphabet":["0","0"],"probs":[0.5,0.5]})"),
                    validation_error);
    CHECK_THROWS_AS(io::parse_dist(R"({"alphabet":["0","1"],"probs":[0.5,0.6]})"),
                    validation_error);
    CHECK_THROWS_AS(io::parse_dist("not json"), validation_error);
}

TEST_CASE("joint round trip keeps sparse keys straight") {
    const char* text =
        R"({"coords":[["0","1"],["0","1","2"]],)"
        R"("probs":[{"key":[0,0],"p":0.5},{"key":[1,2],"p":0.5}]})";
    const info::JointDist j = io::parse_joint(text);
    CHECK(j.arity() == 2);
    CHECK(j.probs[0] == 0.5);
    CHECK(j.probs[5] == 0.5);

    const info::JointDist back = io::parse_joint(io::dump_joint(j));
    CHECK(back.probs == j.probs);

    CHECK_THROWS_AS(
        io::parse_joint(
            R"({"coords":[["0","1"]],"probs":[{"key":[0],"p":0.5},{"key":[0],"p":0.5}]})"),
        validation_error);
    CHECK_THROWS_AS(
        io::parse_joint(R"({"coords":[["0","1"]],"probs":[{"key":[0,1],"p":1.0}]})"),
        validation_error);
    CHECK_THROWS_AS(
        io::parse_joint(R"({"coords":[["0","1"]],"probs":[{"key":[7],"p":1.0}]})"),
        validation_error);
}

TEST_CASE("map json round trips") {
    const sym::PositionalMap shift = io::parse_map(R"({"kind":"shift","k":4})");
    CHECK(shift.kind == sym::PositionalMap::Kind::shift);
    CHECK(shift.shift_by == 4);

    const sym::PositionalMap fin =
        io::parse_map(R"({"kind":"finitary","table":{"0":3,"3":0,"-2":5}})");
    CHECK(fin(0) == 3);
    CHECK(fin(-2) == 5);
    CHECK(fin(1) == 1);
    const sym::PositionalMap fin_back = io::parse_map(io::dump_map(fin));
    CHECK(fin_back.table == fin.table);

    const sym::PositionalMap comp = io::parse_map(
        R"({"kind":"composition","maps":[{"kind":"shift","k":2},{"kind":"shift","k":3}]})");
    CHECK(comp.kind == sym::PositionalMap::Kind::shift);  // normalized on load
    CHECK(comp.shift_by == 5);

    CHECK_THROWS_AS(io::parse_map(R"({"kind":"warp"})"), validation_error);
    CHECK_THROWS_AS(io::parse_map(R"({"kind":"finitary","table":{"x":1}})"),
                    validation_error);
}

TEST_CASE("event hex convention") {
    // window {0}, binary alphabet, member iff a_0 = 1: table bits b0=0, b1=1
    const sym::CylinderEvent e = sym::CylinderEvent::from_predicate(
        {0}, testgen::alpha_n(2), [](std::span<const int> v) { return v[0] == 1; });
    const std::string text = io::dump_event(e);
    CHECK(text.find("\"bits\":\"2\"") != std::string::npos);

    const sym::CylinderEvent back = io::parse_event(text);
    CHECK(back.window == e.window);
    CHECK(!back.test(0));
    CHECK(back.test(1));

    // a 9-site event survives the round trip bit for bit
    Draw d{500, 0};
    std::vector<sym::Index> window;
    for (sym::Index i = -4; i <= 4; ++i) window.push_back(i);
    sym::CylinderEvent big;
    big.window = window;
    big.alphabet = testgen::alpha_n(2);
    big.bits.assign(8, 0);
    for (std::uint64_t i = 0; i < 512; ++i)
        if (d.unit() < 0.5) big.set(i, true);
    const sym::CylinderEvent big_back = io::parse_event(io::dump_event(big));
    for (std::uint64_t i = 0; i < 512; ++i) CHECK(big_back.test(i) == big.test(i));

    CHECK_THROWS_AS(
        io::parse_event(R"({"window":[0],"alphabet":["0","1"],"bits":"zz"})"),
        validation_error);
    CHECK_THROWS_AS(io::parse_event(R"({"window":[0],"alphabet":["0","1"],"bits":"123"})"),
                    validation_error);
}

TEST_CASE("rule files parse and reject partial tables") {
    const renorm::LocalRule maj = renorm::majority_rule();
    const renorm::LocalRule back = io::parse_rule(io::dump_rule(maj));
    CHECK(back.ell == 1);
    CHECK(back.range == 0);
    CHECK(back.table == maj.table);

    const char* partial =
        R"({"alphabet":["0","1"],"ell":0,"range":0,"table":{"0":"0"}})";
    CHECK_THROWS_AS(io::parse_rule(partial), validation_error);

    const char* multichar =
        R"({"alphabet":["lo","hi"],"ell":0,"range":0,"table":{"lo":"lo","hi":"hi"}})";
    CHECK_THROWS_AS(io::parse_rule(multichar), validation_error);

    const char* dup =
        R"({"alphabet":["0","1"],"ell":0,"range":0,"table":{"0":"0","1":"1","0":"1"}})";
    // duplicate JSON keys collapse in the parser; the surviving table is
    // total, so this parses. Arity mismatches do not.
    CHECK_NOTHROW(io::parse_rule(dup));
    const char* bad_key =
        R"({"alphabet":["0","1"],"ell":0,"range":0,"table":{"00":"0","1":"1"}})";
    CHECK_THROWS_AS(io::parse_rule(bad_key), validation_error);
}

TEST_CASE("construction spec json") {
    const char* text = R"({
      "g0": {"n": 3, "edges": [[0,1],[1,2],[0,2]]},
      "levels": [
        {"l": {"n": 1}, "attach": [true]},
        {"l": {"n": 2, "edges": [[0,1]]}, "attach": [true, false],
         "cross": [[{"level":0,"local":0},{"level":0,"local":1}]]}
      ],
      "seed": 7
    })";
    const graph::ConstructionSpec spec = io::parse_construction(text);
    CHECK(spec.g0.n == 3);
    REQUIRE(spec.levels.size() == 2);
    CHECK(spec.levels[1].cross_pairs.size() == 1);
    CHECK(spec.seed == 7);
    CHECK_NOTHROW(graph::build(spec, 2));

    CHECK_THROWS_AS(io::parse_construction(R"({"levels":[]})"), validation_error);
}

TEST_CASE("manifest layout") {
    io::RunManifest m;
    m.command_line = "zerone info entropy --dist d.json";
    m.seed = 11;
    m.input_hashes["d.json"] = "0123456789abcdef";
    m.output_hash = io::fnv1a64_hex("payload");
    m.timestamp = "2020-01-01T00:00:00Z";
    const std::string text = io::dump_manifest(m);
    CHECK(text.find("\"command\"") != std::string::npos);
    CHECK(text.find("\"seed\": 11") != std::string::npos);
    CHECK(text.find("d.json") != std::string::npos);
    CHECK(text.find(m.output_hash) != std::string::npos);
    CHECK(text.find("zerone 0.1.0") != std::string::npos);
}
