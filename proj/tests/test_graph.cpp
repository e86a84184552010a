#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "twintour/graph.hpp"

using namespace twintour;
using namespace twintour::testsupport;

TEST_CASE("digraph basics") {
    Digraph g = Digraph::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(1, 0));
    CHECK(g.edge_count() == 2);
    CHECK_THROWS_AS(g.add_edge(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 1), std::invalid_argument);
}

TEST_CASE("tournament validation") {
    CHECK_NOTHROW(Tournament(Digraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}})));
    CHECK_THROWS_AS(Tournament(Digraph::from_edges(3, {{0, 1}, {1, 2}})), std::invalid_argument);
    CHECK_THROWS_AS(Tournament(Digraph::from_edges(2, {{0, 1}, {1, 0}})), std::invalid_argument);
}

TEST_CASE("mixed neighbors on the 3-cycle and the transitive triangle") {
    Tournament cyc = three_cycle();
    CHECK(mixed_neighbors(cyc, 0, 1) == std::vector<int>{2});
    Tournament tr = transitive_tournament(3);
    CHECK(mixed_neighbors(tr, 0, 1).empty());
    CHECK_THROWS_AS(mixed_neighbors(cyc, 1, 1), std::invalid_argument);
}

TEST_CASE("mixed neighbors are symmetric") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(rng() % 9);
        Tournament t = random_tournament(n, rng);
        int v = static_cast<int>(rng() % n);
        int w = static_cast<int>(rng() % n);
        if (v == w) w = (w + 1) % n;
        CHECK(mixed_neighbors(t, v, w) == mixed_neighbors(t, w, v));
    }
}

TEST_CASE("partition mixed degree") {
    Tournament cyc = three_cycle();
    Partition discrete = Partition::discrete(3);
    CHECK(mixed_degree_partition(cyc, discrete, 0, 1) == 1);

    Partition two(3, {{0, 1}, {2}});
    CHECK_THROWS_AS(mixed_degree_partition(cyc, two, 0, 1), std::invalid_argument);
    CHECK(mixed_degree_partition(cyc, two, 1, 2) == 0);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 3 + static_cast<int>(rng() % 8);
        Tournament t = random_tournament(n, rng);
        Partition d = Partition::discrete(n);
        for (int v = 0; v < n; ++v)
            for (int w : t.out_neighbors(v))
                CHECK(mixed_degree_partition(t, d, v, w) ==
                      static_cast<int>(mixed_neighbors(t, v, w).size()));
    }
}

TEST_CASE("connectivity partitions") {
    Digraph cyc = Digraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(scc(cyc).size() == 1);
    CHECK(wcc(cyc).size() == 1);

    Digraph empty4(4);
    CHECK(scc(empty4).size() == 4);
    CHECK(wcc(empty4).size() == 4);

    Digraph path = Digraph::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(scc(path).size() == 3);
    CHECK(wcc(path).size() == 1);
}

TEST_CASE("quotients and red degrees") {
    RelStructure tr = RelStructure::from_tournament(transitive_tournament(3));
    RelStructure q = quotient(tr, Partition(3, {{0}, {1, 2}}));
    CHECK(q.n() == 2);
    CHECK(red_degree(q) == 0);
    // Part {0} precedes part {1,2} after sorting; the black edge points at it.
    CHECK(q.rel(0, 0, 1));
    CHECK_FALSE(q.rel(0, 1, 0));

    RelStructure cyc = RelStructure::from_tournament(three_cycle());
    RelStructure qc = quotient(cyc, Partition(3, {{0, 1}, {2}}));
    CHECK(red_degree(qc) == 1);
    CHECK(qc.red(0, 1));

    // Discrete partition: red edges survive unchanged.
    RelStructure withred(4);
    withred.add_relation("E", {});
    withred.add_red_edge(0, 3);
    RelStructure qd = quotient(withred, Partition::discrete(4));
    CHECK(qd.red_edges() == std::vector<std::pair<int, int>>{{0, 3}});

    // Trivial partition: single part, no red pairs.
    CHECK(red_degree(quotient(withred, Partition::trivial(4))) == 0);
}

TEST_CASE("red degree basics") {
    RelStructure a(6);
    CHECK(red_degree(a) == 0);
    a.add_red_edge(0, 1);
    CHECK(red_degree(a) == 1);
    RelStructure star(6);
    for (int leaf = 1; leaf <= 5; ++leaf) star.add_red_edge(0, leaf);
    CHECK(red_degree(star) == 5);
}

TEST_CASE("relational structure with order relation") {
    RelStructure a = RelStructure::from_tournament(three_cycle());
    RelStructure with_lt = a.with_order({0, 1, 2});
    CHECK(with_lt.relation_count() == 2);
    CHECK(with_lt.rel(1, 0, 1));
    CHECK_FALSE(with_lt.rel(1, 1, 0));
}

TEST_CASE("canonical tournament counts") {
    CHECK(canonical_tournaments(1).size() == 1);
    CHECK(canonical_tournaments(2).size() == 1);
    CHECK(canonical_tournaments(3).size() == 2);
    CHECK(canonical_tournaments(4).size() == 4);
    CHECK(canonical_tournaments(5).size() == 12);
    CHECK(canonical_tournaments(6).size() == 56);
}

TEST_CASE("mixed-degree facts hold exhaustively up to n = 7 and on random n <= 12") {
    for (int n = 2; n <= 7; ++n) {
        for (const auto& t : canonical_tournaments(n)) {
            Partition d = Partition::discrete(n);
            for (int v = 0; v < n; ++v)
                for (int w = v + 1; w < n; ++w) {
                    CHECK(mixed_neighbors(t, v, w) == mixed_neighbors(t, w, v));
                    int a = t.has_edge(v, w) ? v : w;
                    int b = t.has_edge(v, w) ? w : v;
                    CHECK(mixed_degree_partition(t, d, a, b) ==
                          static_cast<int>(mixed_neighbors(t, a, b).size()));
                }
        }
    }
    std::mt19937 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 8 + static_cast<int>(rng() % 5);
        Tournament t = random_tournament(n, rng);
        int v = static_cast<int>(rng() % n);
        int w = (v + 1 + static_cast<int>(rng() % (n - 1))) % n;
        CHECK(mixed_neighbors(t, v, w) == mixed_neighbors(t, w, v));
    }
}
