#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace twintour {

// Structured validation failure: which check failed and a human-readable witness.
struct ValidationError {
    std::string check;
    std::string witness;
    std::string message() const { return check + ": " + witness; }
};

class ValidationException : public std::exception {
public:
    explicit ValidationException(ValidationError err)
        : err_(std::move(err)), what_(err_.message()) {}
    const ValidationError& error() const { return err_; }
    const char* what() const noexcept override { return what_.c_str(); }

private:
    ValidationError err_;
    std::string what_;
};

// Simple digraph over dense vertex ids 0..n-1. Adjacency is kept both as a
// flat n*n matrix (O(1) edge tests) and as out-neighbor lists (iteration);
// both access patterns are hot in the refinement loops.
class Digraph {
public:
    Digraph() : n_(0) {}
    explicit Digraph(int n) : n_(n), adj_(static_cast<size_t>(n) * n, 0), out_(n), in_(n) {}

    static Digraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    int edge_count() const { return m_; }
    bool has_edge(int u, int v) const { return adj_[static_cast<size_t>(u) * n_ + v] != 0; }
    void add_edge(int u, int v);
    const std::vector<int>& out_neighbors(int v) const { return out_[v]; }
    const std::vector<int>& in_neighbors(int v) const { return in_[v]; }
    int out_degree(int v) const { return static_cast<int>(out_[v].size()); }
    int in_degree(int v) const { return static_cast<int>(in_[v].size()); }

    std::vector<std::pair<int, int>> edges() const;
    Digraph induced(const std::vector<int>& verts) const;

    bool operator==(const Digraph& other) const {
        return n_ == other.n_ && adj_ == other.adj_;
    }

private:
    int n_;
    int m_ = 0;
    std::vector<uint8_t> adj_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
};

// Orientation of a complete graph: exactly one of (u,v),(v,u) per pair.
class Tournament {
public:
    Tournament() = default;
    explicit Tournament(Digraph g);  // validates completeness

    int n() const { return g_.n(); }
    const Digraph& digraph() const { return g_; }
    bool has_edge(int u, int v) const { return g_.has_edge(u, v); }
    const std::vector<int>& out_neighbors(int v) const { return g_.out_neighbors(v); }
    const std::vector<int>& in_neighbors(int v) const { return g_.in_neighbors(v); }

    Tournament induced(const std::vector<int>& verts) const;
    Tournament relabeled(const std::vector<int>& perm) const;  // vertex v -> perm[v]

    bool operator==(const Tournament& other) const { return g_ == other.g_; }

private:
    Digraph g_;
};

// Partition of 0..n-1 into nonempty parts; parts and members kept sorted so
// equal partitions compare equal.
class Partition {
public:
    Partition() : n_(0) {}
    Partition(int n, std::vector<std::vector<int>> parts);

    static Partition discrete(int n);
    static Partition trivial(int n);
    static Partition from_part_ids(const std::vector<int>& part_of);

    int n() const { return n_; }
    int size() const { return static_cast<int>(parts_.size()); }
    const std::vector<std::vector<int>>& parts() const { return parts_; }
    const std::vector<int>& part(int i) const { return parts_[i]; }
    int part_of(int v) const { return part_of_[v]; }
    bool is_discrete() const { return size() == n_; }
    bool is_trivial() const { return size() == 1; }

    bool refines(const Partition& coarser) const;

    bool operator==(const Partition& other) const { return parts_ == other.parts_; }
    bool operator!=(const Partition& other) const { return parts_ != other.parts_; }

private:
    int n_;
    std::vector<std::vector<int>> parts_;
    std::vector<int> part_of_;
};

// Binary relational structure: named relations plus the distinguished
// symmetric anti-reflexive red relation.
class RelStructure {
public:
    RelStructure() : n_(0) {}
    explicit RelStructure(int n) : n_(n) {}

    static RelStructure from_tournament(const Tournament& t);
    static RelStructure from_digraph(const Digraph& g);

    int n() const { return n_; }
    int relation_count() const { return static_cast<int>(rel_names_.size()); }
    const std::string& relation_name(int i) const { return rel_names_[i]; }

    void add_relation(const std::string& name, const std::vector<std::pair<int, int>>& pairs);
    void add_red_edge(int u, int v);  // stored symmetrically

    bool rel(int i, int u, int v) const {
        return rels_[i][static_cast<size_t>(u) * n_ + v] != 0;
    }
    bool red(int u, int v) const {
        return red_.empty() ? false : red_[static_cast<size_t>(u) * n_ + v] != 0;
    }
    bool has_red() const { return !red_.empty(); }
    std::vector<std::pair<int, int>> red_edges() const;  // u < v once each
    std::vector<std::pair<int, int>> relation_edges(int i) const;

    // Adds a linear-order relation Lt with Lt(u,v) iff pos[u] < pos[v].
    RelStructure with_order(const std::vector<int>& position) const;

    RelStructure induced(const std::vector<int>& verts) const;

private:
    int n_;
    std::vector<std::string> rel_names_;
    std::vector<std::vector<uint8_t>> rels_;
    std::vector<uint8_t> red_;

    void ensure_red();
    friend bool homogeneous_pair(const RelStructure&, const std::vector<int>&,
                                 const std::vector<int>&);
};

// ---- graphcore operations ----

// (in(v) meet out(w)) union (out(v) meet in(w)); symmetric in (v,w).
std::vector<int> mixed_neighbors(const Tournament& t, int v, int w);

// Number of parts of q, other than those of v and w, meeting the mixed
// neighbors of the cross-cluster edge (v,w).
int mixed_degree_partition(const Tournament& t, const Partition& q, int v, int w);

Partition scc(const Digraph& g);
Partition wcc(const Digraph& g);

// True iff (x,y) pairs agree on every relation in both directions and carry
// no red edge, for all x in xs, y in ys.
bool homogeneous_pair(const RelStructure& a, const std::vector<int>& xs,
                      const std::vector<int>& ys);

RelStructure quotient(const RelStructure& a, const Partition& p);

int red_degree(const RelStructure& a);

}  // namespace twintour
