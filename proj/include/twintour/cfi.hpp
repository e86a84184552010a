#pragma once

#include <array>
#include <vector>

#include "twintour/graph.hpp"
#include "twintour/widths.hpp"

namespace twintour {

// Undirected base graph for the gadget construction.
struct BaseGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // u < v
    std::vector<std::vector<int>> adj;       // sorted neighbor lists

    static BaseGraph from_edges(int n, std::vector<std::pair<int, int>> edges);
    bool is_three_regular() const;
    bool is_connected() const;
    int edge_index_at(int v, int w) const;  // index of w in adj[v]
};

BaseGraph k4_graph();
BaseGraph toroidal_grid_graph(int rows, int cols);
// 3-regular wall: the toroidal grid minus a checkerboard pattern of vertical
// edges; defined for k >= 2 on the (2k+2) x (2k+2) torus.
BaseGraph wall_graph(int k);

// All edges turned red.
RelStructure red_structure(const BaseGraph& g);

// Row-merging contraction of the red toroidal grid; verified width <= 6
// (<= 2 for a single red cycle).
ContractionSequence grid_red_contraction(int rows, int cols);

// Circular tournament on 2m+1 vertices (edges along the shorter arc) and its
// width-1 contraction sequence: the two blocks growing from vertex 0 downward
// from the top and from vertex m upward absorb each other's red partner.
Tournament circular_tournament_graph(int m);
ContractionSequence circular_contraction(int m);

// Z3 gadget over a 3-regular vertex: the 9 local functions whose signed sum
// over incident edges (signs per the orientation) is `a` mod 3, enumerated in
// lexicographic value order.
std::vector<std::array<int, 3>> gadget_functions(const BaseGraph& base, const Digraph& orientation,
                                                 int v, int a);

// Tournament orientation of the gadget: (f, g) is an edge iff at the first
// order-minimal neighbor where they differ, f + 1 = g (mod 3).
std::vector<std::pair<int, int>> gadget_orientation(const BaseGraph& base,
                                                    const std::vector<std::array<int, 3>>& funcs,
                                                    int v, const std::vector<int>& order_pos);

// Mixed gadget graph: vertex (v, f) globally numbered 9v + f-index; undirected
// inter-gadget edges where the shared edge values agree, directed intra-gadget
// edges per the gadget orientation, vertices colored by base vertex.
struct CfiGraph {
    BaseGraph base;
    Digraph orientation;
    std::vector<int> order_pos;  // base vertex -> position in the linear order
    std::vector<int> alpha;
    std::vector<std::vector<std::array<int, 3>>> functions;  // per gadget
    std::vector<std::pair<int, int>> undirected;
    std::vector<std::pair<int, int>> directed;

    int vertex_count() const { return 9 * base.n; }
    int color(int vertex) const { return vertex / 9; }
    int function_index(int v, const std::array<int, 3>& f) const;
};

CfiGraph build_cfi3(const BaseGraph& base, const Digraph& orientation,
                    const std::vector<int>& order_pos, const std::vector<int>& alpha);

// Tournament completion: intra-gadget edges stay; for order-lower v, pairs
// adjacent in the gadget graph point high-to-low and all others low-to-high.
Tournament cfi_tournament(const CfiGraph& g);

// Shift isomorphism along a base path from the twist construction: moves one
// unit of twist from the path's start to its end. The returned vertex map is
// checked to be an isomorphism of the two gadget graphs.
struct TwistResult {
    std::vector<int> beta;
    std::vector<int> vertex_map;  // alpha-instance vertex -> beta-instance vertex
};

TwistResult twist_iso(const BaseGraph& base, const Digraph& orientation,
                      const std::vector<int>& order_pos, const std::vector<int>& alpha,
                      const std::vector<int>& path);

// Gadget collapse followed by the base sequence; width <= max(35, base width).
ContractionSequence cfi_contraction(const CfiGraph& g, const ContractionSequence& base_seq);

struct CfiInstance {
    CfiGraph graph;
    Tournament tournament;
    ContractionSequence contraction;
    LinearOrder order;  // the base order used by the encoding
};

// Full instance: derives an interval order from the base's red contraction
// sequence, builds the tournament with twist placed on vertex 0, and attaches
// the gadget-collapse contraction sequence.
CfiInstance cfi_instance(const BaseGraph& base, const ContractionSequence& base_red_seq,
                         int twist);

// The wall-based non-isomorphic pair with twists 0 and 1.
struct HardPair {
    CfiInstance first;
    CfiInstance second;
};

HardPair hard_pair(int k);

}  // namespace twintour
