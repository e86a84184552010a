#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "twintour/wl.hpp"

using namespace twintour;
using namespace twintour::testsupport;

namespace {

ColoredDigraph cd(const Tournament& t) { return ColoredDigraph::from_tournament(t); }

}  // namespace

TEST_CASE("2-WL on the directed 3-cycle: diagonal, edge, non-edge classes") {
    StableColoring chi = wl_refine(2, cd(three_cycle()));
    CHECK(chi.num_colors == 3);
    CHECK(chi.all_diag_equal());
    CHECK(chi.colors.size() == 9);  // totality over n^2 tuples
    // Edges share one color, reverse pairs another.
    CHECK(chi.pair_color(0, 1) == chi.pair_color(1, 2));
    CHECK(chi.pair_color(1, 0) == chi.pair_color(2, 1));
    CHECK(chi.pair_color(0, 1) != chi.pair_color(1, 0));
}

TEST_CASE("2-WL separates the transitive triangle's vertices") {
    StableColoring chi = wl_refine(2, cd(transitive_tournament(3)));
    CHECK(chi.diag_color(0) != chi.diag_color(1));
    CHECK(chi.diag_color(1) != chi.diag_color(2));
    CHECK(chi.diag_color(0) != chi.diag_color(2));
}

TEST_CASE("fast kernel agrees with the exact reference") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + static_cast<int>(rng() % 10);
        Tournament t = random_tournament(n, rng);
        StableColoring fast = wl_refine(2, cd(t));
        StableColoring exact = wl_refine_reference(2, cd(t));
        CHECK(same_color_partition(fast, exact));
        CHECK(fast.rounds == exact.rounds);
    }
}

TEST_CASE("serial and parallel fast paths are identical") {
    std::mt19937 rng(31);
    Tournament t = random_tournament(40, rng);
    WlOptions serial;
    serial.parallel = false;
    WlOptions parallel;
    parallel.parallel = true;
    StableColoring a = wl_refine(2, cd(t), serial);
    StableColoring b = wl_refine(2, cd(t), parallel);
    CHECK(a.colors == b.colors);
    CHECK(a.rounds == b.rounds);
}

TEST_CASE("distinguishing") {
    Tournament cyc = three_cycle();
    Tournament tr = transitive_tournament(3);
    CHECK_FALSE(wl_distinguishes(2, cd(cyc), cd(cyc)));
    CHECK(wl_distinguishes(2, cd(cyc), cd(tr)));
    CHECK(wl_distinguishes(3, cd(cyc), cd(tr)));
    // Size mismatch distinguishes trivially.
    CHECK(wl_distinguishes(2, cd(cyc), cd(transitive_tournament(4))));
}

TEST_CASE("isomorphism invariance under relabeling") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 3 + static_cast<int>(rng() % 7);
        Tournament t = random_tournament(n, rng);
        Tournament moved = t.relabeled(random_permutation(n, rng));
        CHECK_FALSE(wl_distinguishes(2, cd(t), cd(moved)));
        auto joint = wl_refine_joint(2, cd(t), cd(moved));
        CHECK(joint.first.histogram() == joint.second.histogram());
    }
}

TEST_CASE("homogeneity") {
    CHECK(is_2wl_homogeneous(cd(three_cycle())));
    CHECK_FALSE(is_2wl_homogeneous(cd(transitive_tournament(3))));
    CHECK(is_2wl_homogeneous(cd(Tournament(Digraph(1)))));
    CHECK(is_2wl_homogeneous(cd(circular_tournament(3))));
}

TEST_CASE("argument errors and the tuple cap") {
    CHECK_THROWS_AS(wl_refine(1, cd(three_cycle())), std::invalid_argument);
    WlOptions tight;
    tight.tuple_cap = 10;
    CHECK_THROWS_AS(wl_refine(3, cd(transitive_tournament(5)), tight), std::invalid_argument);
}

TEST_CASE("color subgraph filters by stable edge colors") {
    Tournament cyc = three_cycle();
    StableColoring chi = wl_refine(2, cd(cyc));
    std::set<int> edge_colors = chi.edge_colors(cyc.digraph());
    REQUIRE(edge_colors.size() == 1);

    Digraph same = color_subgraph(cyc.digraph(), chi, edge_colors);
    CHECK(same == cyc.digraph());
    CHECK(color_subgraph(cyc.digraph(), chi, {}).edge_count() == 0);
    CHECK_THROWS_AS(color_subgraph(cyc.digraph(), chi, {chi.diag_color(0)}),
                    std::invalid_argument);
}

TEST_CASE("partition sequence on the 3-cycle") {
    Tournament cyc = three_cycle();
    auto result = partition_sequence(cyc, 1);
    REQUIRE(std::holds_alternative<PartitionSequence>(result));
    const auto& seq = std::get<PartitionSequence>(result);
    CHECK(seq.colors.size() == 1);
    CHECK(seq.levels.front().is_discrete());
    CHECK(seq.levels.back().is_trivial());
    StableColoring chi = wl_refine(2, cd(cyc));
    CHECK(seq.colors[0] == *chi.edge_colors(cyc.digraph()).begin());

    auto zero = partition_sequence(cyc, 0);
    REQUIRE(std::holds_alternative<TwinWidthExceeded>(zero));
    CHECK(std::get<TwinWidthExceeded>(zero).level == 0);

    CHECK_THROWS_AS(partition_sequence(transitive_tournament(3), 1), std::invalid_argument);
}

TEST_CASE("partition sequence invariants on circular tournaments") {
    for (int m = 1; m <= 4; ++m) {
        Tournament t = circular_tournament(m);
        auto result = partition_sequence(t, 1);
        REQUIRE(std::holds_alternative<PartitionSequence>(result));
        const auto& seq = std::get<PartitionSequence>(result);
        StableColoring chi = wl_refine(2, cd(t));
        // Fan bound 2k+1 with k = 1, rechecked directly.
        for (size_t i = 0; i < seq.colors.size(); ++i) {
            const Partition& prev = seq.levels[i];
            for (int v = 0; v < t.n(); ++v) {
                std::set<int> reached;
                for (int w : t.out_neighbors(v))
                    if (chi.pair_color(v, w) == seq.colors[i]) reached.insert(prev.part_of(w));
                CHECK(reached.size() <= 3);
            }
        }
        // Chain condition: level i is the SCC partition of the color-prefix
        // subgraph, and weak equals strong on every prefix.
        std::set<int> prefix;
        for (size_t i = 0; i < seq.colors.size(); ++i) {
            prefix.insert(seq.colors[i]);
            Digraph sub = color_subgraph(t.digraph(), chi, prefix);
            CHECK(seq.levels[i + 1] == scc(sub));
            CHECK(scc(sub) == wcc(sub));
        }
    }
}

TEST_CASE("weak equals strong components on homogeneous color subgraphs") {
    // Random color subsets of homogeneous circulant tournaments.
    std::mt19937 rng(43);
    for (int m = 2; m <= 5; ++m) {
        Tournament t = circular_tournament(m);
        StableColoring chi = wl_refine(2, cd(t));
        std::set<int> color_set = chi.edge_colors(t.digraph());
        std::vector<int> edge_colors(color_set.begin(), color_set.end());
        for (int trial = 0; trial < 12; ++trial) {
            std::set<int> subset;
            for (int c : edge_colors)
                if (rng() & 1) subset.insert(c);
            Digraph sub = color_subgraph(t.digraph(), chi, subset);
            CHECK(scc(sub) == wcc(sub));
        }
    }
}

TEST_CASE("general k engine at k = 3") {
    Tournament circ = circular_tournament(2);
    StableColoring chi = wl_refine(3, cd(circ));
    CHECK(chi.k == 3);
    CHECK(chi.colors.size() == 125);
    CHECK_FALSE(wl_distinguishes(3, cd(circ), cd(circ.relabeled({1, 2, 3, 4, 0}))));
}
