#pragma once

#include <functional>
#include <set>
#include <variant>
#include <vector>

#include "twintour/graph.hpp"
#include "twintour/perm.hpp"
#include "twintour/wl.hpp"

namespace twintour {

using IsoResult = std::variant<IsoSet, TwinWidthExceeded>;

// Exhaustive backtracking with stable-coloring pruning; the desk-scale oracle.
// Returns the full isomorphism set (generators of Aut(T1) plus one
// representative).
IsoSet brute_force_iso(const Tournament& t1, const Tournament& t2);

// Exact isomorphism set of two small vertex/arc-colored digraphs, via
// color-pruned search over the full symmetric coset.
IsoSet small_iso(const ColoredDigraph& g1, const ColoredDigraph& g2);

// Table access: Iso(T[side a][part pa], T[side b][part pb]) in part-local
// coordinates (positions in the part's sorted vertex list).
using IsoTableFn = std::function<const IsoSet&(int side_a, int pa, int side_b, int pb)>;

// One block pairing of the lifting subroutine: blocks are unions of parts
// selected by index, with the part-pair iso table complete on them. Chooses
// compatible per-part orbits, solves the majority-edge quotient tournaments,
// and finishes with a transporter over the wreath coset.
struct BlockArgs {
    const ColoredDigraph* graph_a = nullptr;
    const ColoredDigraph* graph_b = nullptr;
    const std::vector<std::vector<int>>* parts_a = nullptr;  // all parts, vertex lists
    const std::vector<std::vector<int>>* parts_b = nullptr;
    std::vector<int> sel_a;  // sorted part indices forming block A
    std::vector<int> sel_b;
    int side_a = 0;  // side ids for table lookups
    int side_b = 0;
    const IsoTableFn* table = nullptr;
};

IsoSet block_isomorphisms(const BlockArgs& args);

// Inputs of the level-lifting subroutine; see lift_isomorphisms.
struct LiftArgs {
    int d = 1;
    const ColoredDigraph* g1 = nullptr;  // arc-colored tournaments
    const ColoredDigraph* g2 = nullptr;
    Partition q1;  // partitions lambda-defined by intra_colors
    Partition q2;
    std::set<int> intra_colors;
    int cstar = -1;  // cross-cluster color driving the front growth
    IsoTableFn table;
};

// Computes Iso(g1, g2) given the part partitions, the cross color, and the
// complete part-pair iso table: anchored front-growing runs per target
// vertex, assembled into one coset. Validates the structural preconditions
// (lambda-definedness, cross color, out-fan bound, strongly connected part
// quotient, table completeness) and throws ValidationException on failure.
IsoSet lift_isomorphisms(const LiftArgs& args);

// Isomorphism set of 2-WL-homogeneous tournaments of twin width <= p, or
// TwinWidthExceeded when the partition-sequence construction fails.
IsoResult iso_homogeneous(const Tournament& t1, const Tournament& t2, int p);

// Full isomorphism test: joint 2-WL, per-vertex-color-class recursion, glue
// by direct product, final coset transporter.
IsoResult tournament_iso(const Tournament& t1, const Tournament& t2, int p);

// Convenience accessors over IsoResult.
inline bool exceeded(const IsoResult& r) { return std::holds_alternative<TwinWidthExceeded>(r); }
inline const IsoSet& iso_of(const IsoResult& r) { return std::get<IsoSet>(r); }

}  // namespace twintour
