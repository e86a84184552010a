#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "twintour/isokit.hpp"
#include "twintour/widths.hpp"

using namespace twintour;
using namespace twintour::testsupport;

namespace {

bool is_tournament_iso(const Tournament& t1, const Tournament& t2, const Perm& p) {
    for (int u = 0; u < t1.n(); ++u)
        for (int v = 0; v < t1.n(); ++v)
            if (u != v && t1.has_edge(u, v) != t2.has_edge(p(u), p(v))) return false;
    return true;
}

// Samples the representative composed with random group words.
void check_soundness(const Tournament& t1, const Tournament& t2, const IsoSet& iso,
                     std::mt19937& rng, int samples = 50) {
    REQUIRE(iso.has_value());
    CHECK(is_tournament_iso(t1, t2, iso->rep));
    auto gens = iso->group.generators();
    if (gens.empty()) return;
    for (int s = 0; s < samples; ++s) {
        Perm g = Perm::identity(t1.n());
        int len = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < len; ++i) g = compose(g, gens[rng() % gens.size()]);
        CHECK(is_tournament_iso(t1, t2, compose(g, iso->rep)));
    }
}

}  // namespace

TEST_CASE("brute force oracle") {
    Tournament cyc = three_cycle();
    IsoSet self = brute_force_iso(cyc, cyc);
    REQUIRE(self);
    CHECK(self->group.order().as_u64() == 3);

    Tournament tr = transitive_tournament(6);
    IsoSet rigid = brute_force_iso(tr, tr);
    REQUIRE(rigid);
    CHECK(rigid->group.order().as_u64() == 1);

    CHECK_FALSE(brute_force_iso(cyc, transitive_tournament(3)).has_value());
}

TEST_CASE("small iso with vertex colors") {
    ColoredDigraph p1(1), p2(1);
    IsoSet unit = small_iso(p1, p2);
    REQUIRE(unit);
    CHECK(unit->group.order().as_u64() == 1);

    Tournament circ = circular_tournament(2);
    ColoredDigraph c1 = ColoredDigraph::from_tournament(circ);
    IsoSet rot = small_iso(c1, c1);
    REQUIRE(rot);
    CHECK(rot->group.order().as_u64() == 5);

    // Incompatible vertex colors kill the isomorphism.
    ColoredDigraph c2 = c1;
    for (int v = 0; v < 5; ++v) c2.at(v, v) = v;  // discrete colors
    ColoredDigraph c3 = c1;
    for (int v = 0; v < 5; ++v) c3.at(v, v) = 7;
    CHECK_FALSE(small_iso(c2, c3).has_value());
}

TEST_CASE("block isomorphisms over two joined 3-cycles") {
    // Vertices 0-2 and 3-5 are 3-cycles; all cross edges point low to high.
    Digraph g(6);
    for (auto [u, v] : {std::pair{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}}) g.add_edge(u, v);
    for (int u = 0; u < 3; ++u)
        for (int v = 3; v < 6; ++v) g.add_edge(u, v);
    Tournament t(std::move(g));
    ColoredDigraph cd = ColoredDigraph::from_tournament(t);

    std::vector<std::vector<int>> parts{{0, 1, 2}, {3, 4, 5}};
    Tournament cyc = three_cycle();
    IsoSet cyc_iso = brute_force_iso(cyc, cyc);
    REQUIRE(cyc_iso);
    std::vector<std::vector<IsoSet>> entries(2, std::vector<IsoSet>(2, cyc_iso));
    IsoTableFn table = [&entries](int, int pa, int, int pb) -> const IsoSet& {
        return entries[pa][pb];
    };

    BlockArgs args;
    args.graph_a = &cd;
    args.graph_b = &cd;
    args.parts_a = &parts;
    args.parts_b = &parts;
    args.sel_a = {0, 1};
    args.sel_b = {0, 1};
    args.side_a = 0;
    args.side_b = 0;
    args.table = &table;
    IsoSet block = block_isomorphisms(args);
    REQUIRE(block);

    IsoSet oracle = brute_force_iso(t, t);
    REQUIRE(oracle);
    CHECK(block->group.order().str() == oracle->group.order().str());

    // Single-part blocks return the table entry unchanged.
    args.sel_a = {0};
    args.sel_b = {1};
    IsoSet single = block_isomorphisms(args);
    REQUIRE(single);
    CHECK(single->group.order().as_u64() == 3);
}

TEST_CASE("lift on the 3-cycle with the discrete partition") {
    Tournament cyc = three_cycle();
    auto joint = wl_refine_joint(2, ColoredDigraph::from_tournament(cyc),
                                 ColoredDigraph::from_tournament(cyc));
    ColoredDigraph g(3);
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v)
            if (u == v || cyc.has_edge(u, v)) g.at(u, v) = joint.first.pair_color(u, v);

    int diag = joint.first.diag_color(0);
    int edge_color = joint.first.pair_color(0, 1);

    IsoSet unit = Coset{PermGroup(1), Perm::identity(1)};
    LiftArgs args;
    args.d = 1;
    args.g1 = &g;
    args.g2 = &g;
    args.q1 = Partition::discrete(3);
    args.q2 = Partition::discrete(3);
    args.intra_colors = {diag};
    args.cstar = edge_color;
    args.table = [&unit](int, int, int, int) -> const IsoSet& { return unit; };
    IsoSet lifted = lift_isomorphisms(args);
    REQUIRE(lifted);
    CHECK(lifted->group.order().as_u64() == 3);

    // Precondition violations surface as validation errors.
    LiftArgs bad = args;
    bad.intra_colors = {diag, edge_color};
    CHECK_THROWS_AS(lift_isomorphisms(bad), ValidationException);
}

TEST_CASE("homogeneous isomorphism test") {
    Tournament cyc = three_cycle();
    auto r = iso_homogeneous(cyc, cyc, 1);
    REQUIRE_FALSE(exceeded(r));
    REQUIRE(iso_of(r));
    CHECK(iso_of(r)->group.order().as_u64() == 3);

    auto zero = iso_homogeneous(cyc, cyc, 0);
    CHECK(exceeded(zero));

    CHECK_THROWS_AS(iso_homogeneous(transitive_tournament(3), transitive_tournament(3), 1),
                    std::invalid_argument);

    std::mt19937 rng(83);
    Tournament circ = circular_tournament(2);
    Tournament moved = circ.relabeled(random_permutation(5, rng));
    auto iso = iso_homogeneous(circ, moved, 2);
    REQUIRE_FALSE(exceeded(iso));
    REQUIRE(iso_of(iso));
    CHECK(iso_of(iso)->group.order().as_u64() == 5);
    check_soundness(circ, moved, iso_of(iso), rng);
}

TEST_CASE("homogeneous test on circular tournaments of larger size") {
    std::mt19937 rng(89);
    for (int m = 2; m <= 4; ++m) {
        Tournament circ = circular_tournament(m);
        Tournament moved = circ.relabeled(random_permutation(2 * m + 1, rng));
        auto iso = iso_homogeneous(circ, moved, 2);
        REQUIRE_FALSE(exceeded(iso));
        REQUIRE(iso_of(iso));
        CHECK(iso_of(iso)->group.order().as_u64() == static_cast<uint64_t>(2 * m + 1));
        check_soundness(circ, moved, iso_of(iso), rng, 20);
    }
}

TEST_CASE("full test agrees with brute force on all small tournaments") {
    std::mt19937 rng(97);
    for (int n = 3; n <= 5; ++n) {
        const auto& reps = canonical_tournaments(n);
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = i; j < reps.size(); ++j) {
                auto result = tournament_iso(reps[i], reps[j], n);
                REQUIRE_FALSE(exceeded(result));
                IsoSet oracle = brute_force_iso(reps[i], reps[j]);
                CHECK(iso_of(result).has_value() == oracle.has_value());
                if (oracle) {
                    CHECK(iso_of(result)->group.order().str() ==
                          oracle->group.order().str());
                    check_soundness(reps[i], reps[j], iso_of(result), rng, 10);
                }
            }
    }
}

TEST_CASE("full test on relabeled random tournaments") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 6 + static_cast<int>(rng() % 7);
        Tournament t = random_tournament(n, rng);
        auto perm = random_permutation(n, rng);
        Tournament moved = t.relabeled(perm);
        auto result = tournament_iso(t, moved, n);
        REQUIRE_FALSE(exceeded(result));
        REQUIRE(iso_of(result));
        check_soundness(t, moved, iso_of(result), rng, 15);
        IsoSet oracle = brute_force_iso(t, moved);
        CHECK(iso_of(result)->group.order().str() == oracle->group.order().str());
    }
}

TEST_CASE("non-isomorphic pairs come back empty") {
    std::mt19937 rng(103);
    int checked = 0;
    while (checked < 10) {
        int n = 5 + static_cast<int>(rng() % 5);
        Tournament t1 = random_tournament(n, rng);
        Tournament t2 = random_tournament(n, rng);
        if (brute_force_iso(t1, t2)) continue;
        auto result = tournament_iso(t1, t2, n);
        REQUIRE_FALSE(exceeded(result));
        CHECK_FALSE(iso_of(result).has_value());
        ++checked;
    }
}

TEST_CASE("result is stable as the width budget grows") {
    std::mt19937 rng(107);
    for (const auto& t : canonical_tournaments(5)) {
        auto small = tournament_iso(t, t, 5);
        auto large = tournament_iso(t, t, 9);
        REQUIRE_FALSE(exceeded(small));
        REQUIRE_FALSE(exceeded(large));
        CHECK(iso_of(small)->group.order().str() == iso_of(large)->group.order().str());
    }
}

TEST_CASE("anchored sets partition the isomorphism set") {
    Tournament circ = circular_tournament(3);  // 7 vertices, Aut of order 7
    IsoSet iso = brute_force_iso(circ, circ);
    REQUIRE(iso);
    auto elements = iso->group.elements();
    // |Iso| equals the sum over targets of the anchored counts.
    std::vector<int> per_target(7, 0);
    for (const auto& g : elements) per_target[compose(g, iso->rep)(0)]++;
    uint64_t total = 0;
    for (int c : per_target) total += c;
    CHECK(total == iso->group.order().as_u64());
}

TEST_CASE("twin width exceeded propagates through the full test") {
    // Trying p = 1 on a tournament whose homogeneous classes need more width.
    Tournament t = canonical_tournaments(7)[100];
    auto result = tournament_iso(t, t, 7);
    REQUIRE_FALSE(exceeded(result));
    REQUIRE(iso_of(result).has_value());
}
