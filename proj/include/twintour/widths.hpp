#pragma once

#include <optional>
#include <vector>

#include "twintour/graph.hpp"

namespace twintour {

// Ordered list of part merges; part ids follow the min-id rule: merging parts
// a and b produces a part with id min(a,b). For n vertices a full sequence has
// n-1 merges (n = 1 means an empty list).
struct ContractionSequence {
    int n = 0;
    std::vector<std::pair<int, int>> merges;
};

// Positions of vertices under a linear order: position[v] = rank of v.
struct LinearOrder {
    std::vector<int> position;

    int n() const { return static_cast<int>(position.size()); }
    // Vertices listed from smallest to largest.
    std::vector<int> sequence() const;
    static LinearOrder from_sequence(const std::vector<int>& seq);
};

struct DirectedPathDecomposition {
    int n = 0;                           // vertex count of the underlying graph
    std::vector<std::vector<int>> bags;  // bag t = bags[t], 0-based
    int width() const;
};

struct DirectedTreeDecomposition {
    int n = 0;
    int root = 0;
    std::vector<int> parent;                  // parent[t], -1 for the root
    std::vector<std::vector<int>> bags;       // beta(t); may be empty
    std::vector<std::vector<int>> guards;     // gamma(parent[t], t); unused at root
    int node_count() const { return static_cast<int>(bags.size()); }
    std::vector<std::vector<int>> children() const;
    // Gamma(t) = beta(t) plus guards of all incident tree edges.
    std::vector<int> gamma_closure(int t) const;
    int width() const;
};

// ---- contraction sequences / twin width ----

// Width of the sequence: max over steps of the red degree of A/P_i. Quotients
// are maintained incrementally; only pairs touching the merged part are
// re-examined per step. Throws ValidationException for malformed sequences.
int verify_contraction(const RelStructure& a, const ContractionSequence& seq);

// Partitions P_1..P_n induced by the sequence (P_1 discrete).
std::vector<Partition> contraction_partitions(const ContractionSequence& seq);

struct ExactTwinWidthResult {
    int width;
    ContractionSequence sequence;
};

// Exact twin width by iterative-deepening search over merge orders with
// memoization on canonical partitions. Desk-scale oracle (n <= 12 or so).
ExactTwinWidthResult exact_twin_width(const RelStructure& a);

// Bounded-width search: a contraction sequence of width <= w, if one exists.
std::optional<ContractionSequence> find_contraction_of_width(const RelStructure& a, int w,
                                                             long long node_budget = -1);

// Linear order for which every part of every P_i is an interval, built from
// the merge forest of seq; adding this order as an extra relation does not
// change the verified width.
LinearOrder order_for_tww(const RelStructure& a, const ContractionSequence& seq);

// ---- cut width ----

int cutwidth_of_order(const Digraph& g, const LinearOrder& ord);

struct ExactCutwidthResult {
    int width;
    LinearOrder order;
};

// Memoized branch-and-bound over prefix sets; recommended n <= 20.
ExactCutwidthResult exact_cutwidth(const Digraph& g);

// ---- decompositions ----

struct DecompositionReport {
    bool valid = true;
    ValidationError violation;  // set when invalid
};

DecompositionReport validate_dpd(const Digraph& g, const DirectedPathDecomposition& dpd);
DecompositionReport validate_dtd(const Digraph& g, const DirectedTreeDecomposition& dtd);

// Bags beta(i) = {v : pos(v) <= i <= max pos over {v} and N+(v)}; width is at
// most the cut width of the order.
DirectedPathDecomposition dpd_from_order(const Digraph& g, const LinearOrder& ord);

// Reversed-path tree decomposition with the same width.
DirectedTreeDecomposition dtd_from_dpd(const Digraph& g, const DirectedPathDecomposition& dpd);

// Prefix-merge sequence ordered by last bag; verified width <= dpd width.
ContractionSequence contraction_from_dpd(const Tournament& t,
                                         const DirectedPathDecomposition& dpd);

// Front-walk construction; verified width <= 2^(k+2) - 1 for a dtd of width k.
ContractionSequence contraction_from_dtd(const Tournament& t,
                                         const DirectedTreeDecomposition& dtd);

}  // namespace twintour
