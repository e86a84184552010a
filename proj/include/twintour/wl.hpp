#pragma once

#include <set>
#include <variant>
#include <vector>

#include "twintour/graph.hpp"
#include "twintour/perm.hpp"

namespace twintour {

// Fixpoint of k-WL refinement. Colors are interned nonnegative ids assigned in
// a canonical order, so equal inputs produce equal ids across runs. For k = 2
// the array is indexed pair-major: colors[v*n + w].
struct StableColoring {
    int k = 2;
    int n = 0;
    std::vector<int> colors;
    int num_colors = 0;
    int rounds = 0;  // iterations to the fixpoint

    int pair_color(int v, int w) const { return colors[static_cast<size_t>(v) * n + w]; }
    int diag_color(int v) const { return pair_color(v, v); }
    bool all_diag_equal() const;
    std::set<int> diag_colors() const;
    std::set<int> edge_colors(const Digraph& g) const;
    // Multiplicity of each color over all tuples.
    std::vector<std::pair<int, long long>> histogram() const;
};

// True iff the two colorings induce the same partition of tuple space
// (ignoring the numeric ids).
bool same_color_partition(const StableColoring& a, const StableColoring& b);

struct WlOptions {
    bool parallel = true;
    // Guard against accidental n^k blowups in the generic engine.
    size_t tuple_cap = 50'000'000;
};

// Stable k-WL coloring. k = 2 runs the specialized pair loop (hashed multiset
// signatures, optional OpenMP over tuples); k >= 3 uses the generic exact
// tuple engine and is intended for test-scale inputs.
StableColoring wl_refine(int k, const ColoredDigraph& g, const WlOptions& opts = {});

// Exact reference implementation (sorted multiset signatures, serial). Used
// by tests and the benchmark to validate the fast kernel.
StableColoring wl_refine_reference(int k, const ColoredDigraph& g, const WlOptions& opts = {});

// Joint refinement of two graphs with a shared color table: per-graph
// multisets, common interning, per-graph histograms at the end.
struct JointColoring {
    StableColoring first;
    StableColoring second;
    bool distinguished = false;
};

JointColoring wl_refine_joint(int k, const ColoredDigraph& g, const ColoredDigraph& h,
                              const WlOptions& opts = {});

// Different vertex counts distinguish trivially.
bool wl_distinguishes(int k, const ColoredDigraph& g, const ColoredDigraph& h,
                      const WlOptions& opts = {});

bool is_2wl_homogeneous(const ColoredDigraph& g, const WlOptions& opts = {});

// Keeps exactly the edges whose stable pair color lies in `colors`. Rejects
// diagonal (vertex) colors in the set.
Digraph color_subgraph(const Digraph& g, const StableColoring& chi, const std::set<int>& colors);

// Chain of partitions Q_0 (discrete) .. Q_l (trivial) with the edge colors
// c_1..c_l that produced them; Q_i is the SCC partition of the subgraph on
// colors {c_1..c_i}.
struct PartitionSequence {
    std::vector<Partition> levels;
    std::vector<int> colors;
};

struct TwinWidthExceeded {
    int level = 0;
};

using PartitionSequenceResult = std::variant<PartitionSequence, TwinWidthExceeded>;

// Iteratively picks a cross-cluster edge of partition mixed degree <= p
// (lexicographically least (color, v, w) among qualifying edges) and coarsens
// to the SCC partition of the accumulated color subgraph. Requires a
// 2-WL-homogeneous tournament; `chi` may supply a precomputed stable coloring
// (e.g. the first half of a joint run).
PartitionSequenceResult partition_sequence(const Tournament& t, int p,
                                           const StableColoring* chi = nullptr,
                                           const WlOptions& opts = {});

}  // namespace twintour
