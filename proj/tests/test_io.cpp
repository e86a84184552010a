#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "support.hpp"
#include "twintour/io.hpp"
#include "twintour/widths.hpp"

using namespace twintour;
using namespace twintour::testsupport;

namespace {

template <typename T, typename Parse, typename Format>
void roundtrip(const T& value, Parse parse, Format format) {
    std::string text = format(value);
    std::istringstream in(text);
    T again = parse(in);
    CHECK(format(again) == text);
}

}  // namespace

TEST_CASE("tournament file round trip") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Tournament t = random_tournament(2 + static_cast<int>(rng() % 9), rng);
        std::string text = format_tournament(t);
        std::istringstream in(text);
        Tournament back = parse_tournament(in);
        CHECK(back == t);
    }
}

TEST_CASE("tournament parse errors carry line numbers") {
    std::istringstream missing("tournament 3\n011\n001\n");
    CHECK_THROWS_AS(parse_tournament(missing), ParseError);

    std::istringstream diagonal("tournament 2\n10\n00\n");
    CHECK_THROWS_AS(parse_tournament(diagonal), ParseError);

    std::istringstream both_dirs("tournament 2\n01\n10\n");
    try {
        parse_tournament(both_dirs);
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() >= 2);
    }
}

TEST_CASE("digraph and struct round trips") {
    std::mt19937 rng(5);
    Digraph g = random_digraph(7, 0.3, rng);
    roundtrip(g, parse_digraph, format_digraph);

    RelStructure a(5);
    a.add_relation("E", {{0, 1}, {1, 2}, {4, 0}});
    a.add_red_edge(2, 3);
    std::string text = format_struct(a);
    std::istringstream in(text);
    RelStructure back = parse_struct(in);
    CHECK(format_struct(back) == text);
    CHECK(back.red(2, 3));
    CHECK(back.red(3, 2));
}

TEST_CASE("structure dispatch by header") {
    std::istringstream in(format_tournament(three_cycle()));
    std::string kind;
    RelStructure a = parse_structure_any(in, &kind);
    CHECK(kind == "tournament");
    CHECK(a.n() == 3);
    CHECK(a.rel(0, 0, 1));
}

TEST_CASE("contraction and order files") {
    ContractionSequence seq;
    seq.n = 4;
    seq.merges = {{0, 1}, {0, 2}, {0, 3}};
    roundtrip(seq, parse_contractions, format_contractions);

    std::vector<int> order{2, 0, 1, 3};
    std::string text = format_order(order);
    std::istringstream in(text);
    CHECK(parse_order(in) == order);
}

TEST_CASE("permutation group files") {
    std::string text = format_perm_group(3, {{1, 2, 0}, {2, 0, 1}}, "3");
    std::istringstream in(text);
    PermGroupFile file = parse_perm_group(in);
    CHECK(file.n == 3);
    CHECK(file.generators.size() == 2);
    CHECK(file.generators[0] == std::vector<int>{1, 2, 0});
    CHECK(file.order == "3");

    std::istringstream bad("perms 3 1\n0 0 2\n");
    CHECK_THROWS_AS(parse_perm_group(bad), ParseError);
}

TEST_CASE("decomposition files") {
    DirectedPathDecomposition dpd;
    dpd.n = 3;
    dpd.bags = {{0, 1}, {1, 2}, {}};
    roundtrip(dpd, parse_dpd, format_dpd);

    DirectedTreeDecomposition dtd;
    dtd.n = 3;
    dtd.root = 1;
    dtd.parent = {1, -1};
    dtd.bags = {{0, 2}, {1}};
    dtd.guards = {{2}, {}};
    roundtrip(dtd, parse_dtd, format_dtd);
}
