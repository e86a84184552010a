#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "twintour/graph.hpp"
#include "twintour/widths.hpp"

namespace twintour::testsupport {

// Tournament from the bitmask over pairs (i<j): bit set means i -> j.
Tournament tournament_from_mask(int n, uint64_t mask);

// Canonical form: lexicographically least adjacency bitstring over all vertex
// relabelings. Exact; intended for n <= 7.
uint64_t canonical_mask(const Tournament& t);

// One representative per isomorphism class, built by extending the (n-1)-reps
// with every possible new-vertex orientation pattern and deduplicating by
// canonical form. Counts per size: 1, 1, 2, 4, 12, 56, 456.
const std::vector<Tournament>& canonical_tournaments(int n);

Tournament random_tournament(int n, std::mt19937& rng);
Digraph random_digraph(int n, double edge_prob, std::mt19937& rng);
std::vector<int> random_permutation(int n, std::mt19937& rng);

// Circular tournament on 2m+1 vertices: edges along the shorter arc.
Tournament circular_tournament(int m);

Tournament transitive_tournament(int n);
Tournament three_cycle();

// Incidence digraph: one vertex per graph vertex and per undirected edge, with
// arcs from each edge down to its two endpoints (a zero cut width family).
Digraph incidence_digraph_complete(int m);

// Exhaustive search for a directed tree decomposition of width <= w. Memoized
// over (vertex set, guard) subproblems; exponential, practical only when a
// witness exists or n is tiny.
bool exists_dtd_of_width(const Tournament& t, int w);

// Certified refutation of width <= w: requires n > 2w+2 and that deleting any
// set of at most w+1 vertices leaves the tournament strongly connected. Then
// every subtree of a width-w decomposition lies inside its guard or covers
// everything outside it, and the chain of huge subtrees cannot terminate.
// Returns true when the refutation applies (exhaustive check of the premise).
bool dtd_width_refuted_by_connectivity(const Tournament& t, int w);

struct BuiltDtd {
    Tournament t;
    DirectedTreeDecomposition dtd;
    int width;
};

// Valid decompositions of width <= max_width over small tournaments, mixing
// tree shapes (paths, stars, segment trees, single nodes) with greedily grown
// guard sets; every result passes validate_dtd.
std::vector<BuiltDtd> build_small_width_dtds(int count, int max_width, std::mt19937& rng);

}  // namespace twintour::testsupport
