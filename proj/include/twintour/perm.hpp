#pragma once

#include <optional>
#include <vector>

#include "twintour/bigint.hpp"
#include "twintour/graph.hpp"

namespace twintour {

// Permutation of 0..n-1 as an image array. Composition is left-to-right:
// compose(a, b) applies a first, matching the coset convention
// (gamma theta)(x) = theta(gamma(x)).
struct Perm {
    std::vector<int> img;

    Perm() = default;
    explicit Perm(std::vector<int> images) : img(std::move(images)) {}
    static Perm identity(int n) {
        Perm p;
        p.img.resize(n);
        for (int i = 0; i < n; ++i) p.img[i] = i;
        return p;
    }

    int size() const { return static_cast<int>(img.size()); }
    int operator()(int x) const { return img[x]; }
    bool is_identity() const {
        for (int i = 0; i < size(); ++i)
            if (img[i] != i) return false;
        return true;
    }
    bool operator==(const Perm& other) const { return img == other.img; }
    bool operator<(const Perm& other) const { return img < other.img; }
};

Perm compose(const Perm& a, const Perm& b);  // x -> b(a(x))
Perm inverse(const Perm& p);
bool is_bijection(const std::vector<int>& img, int n);

// Permutation group backed by a base and strong generating set built with
// deterministic Schreier-Sims. Base points are picked greedily from the
// largest cycle of the new strong generator, smallest point id on ties.
class PermGroup {
public:
    PermGroup() : degree_(0) {}
    explicit PermGroup(int degree) : degree_(degree) {}
    PermGroup(int degree, const std::vector<Perm>& generators);

    int degree() const { return degree_; }
    const std::vector<Perm>& generators() const { return input_gens_; }
    bool contains(const Perm& p) const;
    BigUint order() const;
    bool is_trivial() const;

    int base_size() const { return static_cast<int>(base_.size()); }
    int base_point(int level) const { return base_[level]; }
    // Orbit of the level's base point together with coset representatives
    // (u maps the base point onto the orbit point).
    const std::vector<int>& orbit(int level) const { return orbit_[level]; }
    const Perm& transversal(int level, int orbit_index) const {
        return transversal_[level][orbit_index];
    }
    // Generators of the level-th stabilizer subgroup in the chain.
    std::vector<Perm> level_generators(int level) const;

    // Orbit partition of the domain under the level-th stabilizer.
    std::vector<int> orbit_ids(int level) const;

    // All elements; throws if the order exceeds cap. Test-scale helper.
    std::vector<Perm> elements(size_t cap = 1 << 20) const;

private:
    int degree_;
    std::vector<Perm> input_gens_;
    std::vector<int> base_;
    std::vector<std::vector<Perm>> sgens_;        // per level
    std::vector<std::vector<int>> orbit_;         // per level
    std::vector<std::vector<int>> orbit_pos_;     // point -> orbit index + 1
    std::vector<std::vector<Perm>> transversal_;  // aligned with orbit_

    void extend(const Perm& g);
    void close_level(int level);
    void recompute_orbit(int level);
    std::pair<Perm, int> sift(Perm g, int from) const;
    void new_base_point(const Perm& witness);
};

std::vector<PermGroup> derived_series(const PermGroup& g);
bool is_solvable(const PermGroup& g);

// Right coset Gamma * theta: all bijections obtained by applying a group
// element first and the representative second.
struct Coset {
    PermGroup group;
    Perm rep;
};

// Isomorphism set: empty, or a coset of the automorphism group of the first
// object.
using IsoSet = std::optional<Coset>;

// Wreath-product generators on the union of blocks: block-local extensions of
// the diagonal automorphism groups plus one lifted permutation per delta
// generator, built from the iso table's representatives. Blocks are vertex
// lists into a domain of size n; table entries are in block-local coordinates.
std::vector<Perm> wreath_generators(int n, const std::vector<std::vector<int>>& blocks,
                                    const std::vector<std::vector<IsoSet>>& table,
                                    const PermGroup& delta);

struct DirectFactor {
    std::vector<int> domain1;  // sorted global points on side 1
    std::vector<int> domain2;  // sorted global points on side 2
    IsoSet iso;                // in local (positional) coordinates
};

// Glued coset of the direct product over pairwise disjoint domains. Points
// outside every domain map to themselves in the representative.
Coset direct_product(int n, const std::vector<DirectFactor>& factors);

// Digraph with total arc coloring: diagonal entries carry vertex colors,
// off-diagonal entries carry edge colors or -1 for non-edges.
struct ColoredDigraph {
    int n = 0;
    std::vector<int> arc;

    ColoredDigraph() = default;
    explicit ColoredDigraph(int size) : n(size), arc(static_cast<size_t>(size) * size, -1) {
        for (int v = 0; v < size; ++v) at(v, v) = 0;
    }
    int& at(int u, int v) { return arc[static_cast<size_t>(u) * n + v]; }
    int at(int u, int v) const { return arc[static_cast<size_t>(u) * n + v]; }

    static ColoredDigraph from_tournament(const Tournament& t);
    ColoredDigraph induced(const std::vector<int>& verts) const;
};

struct Hypergraph {
    int n = 0;
    std::vector<std::vector<int>> edges;  // each edge sorted ascending
};

// Exact coset transporter searches: all color-preserving isomorphisms inside
// Gamma*theta, returned as empty or a coset of the Gamma-automorphism group.
// Backtracking over the stabilizer chain with arc-color consistency pruning;
// this meets the input/output contract of the polynomial-time solvable-group
// algorithms without their asymptotic guarantees. `pinned` adds required
// point images (used for anchored runs).
IsoSet transporter_graph(const ColoredDigraph& g1, const ColoredDigraph& g2,
                         const PermGroup& gamma, const Perm& theta,
                         const std::vector<std::pair<int, int>>& pinned = {});

IsoSet transporter_hypergraph(const Hypergraph& h1, const Hypergraph& h2,
                              const PermGroup& gamma, const Perm& theta,
                              const std::vector<std::pair<int, int>>& pinned = {});

// Inverse iso set: Iso(B, A) from Iso(A, B).
IsoSet invert_iso(const IsoSet& iso);

}  // namespace twintour
