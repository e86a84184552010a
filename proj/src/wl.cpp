#include "twintour/wl.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace twintour {

// Implemented in wl_reference.cpp.
JointColoring wl_refine_joint_reference(int k, const ColoredDigraph& g, const ColoredDigraph& h,
                                        const WlOptions& opts);

bool StableColoring::all_diag_equal() const {
    for (int v = 1; v < n; ++v)
        if (diag_color(v) != diag_color(0)) return false;
    return true;
}

std::set<int> StableColoring::diag_colors() const {
    std::set<int> out;
    for (int v = 0; v < n; ++v) out.insert(diag_color(v));
    return out;
}

std::set<int> StableColoring::edge_colors(const Digraph& g) const {
    std::set<int> out;
    for (auto [u, v] : g.edges()) out.insert(pair_color(u, v));
    return out;
}

std::vector<std::pair<int, long long>> StableColoring::histogram() const {
    std::map<int, long long> acc;
    for (int c : colors) acc[c]++;
    return {acc.begin(), acc.end()};
}

bool same_color_partition(const StableColoring& a, const StableColoring& b) {
    if (a.colors.size() != b.colors.size()) return false;
    std::map<int, int> fwd, bwd;
    for (size_t i = 0; i < a.colors.size(); ++i) {
        auto [it1, new1] = fwd.emplace(a.colors[i], b.colors[i]);
        if (!new1 && it1->second != b.colors[i]) return false;
        auto [it2, new2] = bwd.emplace(b.colors[i], a.colors[i]);
        if (!new2 && it2->second != a.colors[i]) return false;
    }
    return true;
}

namespace {

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

inline uint64_t elem_hash1(int a, int b) {
    return mix64(static_cast<uint64_t>(a) * 0x100000001b3ull + static_cast<uint64_t>(b) +
                 0x9e3779b97f4a7c15ull);
}

inline uint64_t elem_hash2(int a, int b) {
    return mix64((static_cast<uint64_t>(b) << 32) ^ static_cast<uint64_t>(a) ^
                 0xc2b2ae3d27d4eb4full);
}

// 2-WL over one or two graphs sharing a color table. Multiset signatures are
// folded into a pair of order-independent 64-bit sums, which keeps rounds at
// O(n^3) with small constants and makes the serial and OpenMP paths
// bit-identical.
class PairRefiner {
public:
    PairRefiner(std::vector<const ColoredDigraph*> graphs, bool parallel)
        : graphs_(std::move(graphs)), parallel_(parallel) {
        colors_.resize(graphs_.size());
        for (size_t g = 0; g < graphs_.size(); ++g)
            colors_[g].assign(static_cast<size_t>(graphs_[g]->n) * graphs_[g]->n, 0);
    }

    void run() {
        assign_initial();
        rounds_ = 0;
        while (true) {
            int before = num_colors_;
            refine_round();
            if (num_colors_ == before) break;  // same partition: previous round was stable
            ++rounds_;
        }
    }

    StableColoring result(size_t g) const {
        StableColoring sc;
        sc.k = 2;
        sc.n = graphs_[g]->n;
        sc.colors = colors_[g];
        sc.num_colors = num_colors_;
        sc.rounds = rounds_;
        return sc;
    }

    int num_colors() const { return num_colors_; }

private:
    std::vector<const ColoredDigraph*> graphs_;
    bool parallel_;
    std::vector<std::vector<int>> colors_;
    int num_colors_ = 0;
    int rounds_ = 0;

    struct Key {
        int64_t a;
        uint64_t h1, h2;
        bool operator<(const Key& o) const {
            if (a != o.a) return a < o.a;
            if (h1 != o.h1) return h1 < o.h1;
            return h2 < o.h2;
        }
        bool operator==(const Key& o) const { return a == o.a && h1 == o.h1 && h2 == o.h2; }
    };

    void intern(const std::vector<std::vector<Key>>& keys) {
        std::vector<Key> all;
        for (const auto& ks : keys) all.insert(all.end(), ks.begin(), ks.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        num_colors_ = static_cast<int>(all.size());
        for (size_t g = 0; g < graphs_.size(); ++g) {
            auto& col = colors_[g];
            const auto& ks = keys[g];
#ifdef TWINTOUR_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (parallel_)
#endif
            for (long long i = 0; i < static_cast<long long>(ks.size()); ++i) {
                col[i] = static_cast<int>(
                    std::lower_bound(all.begin(), all.end(), ks[i]) - all.begin());
            }
        }
    }

    void assign_initial() {
        std::vector<std::vector<Key>> keys(graphs_.size());
        for (size_t g = 0; g < graphs_.size(); ++g) {
            int n = graphs_[g]->n;
            keys[g].resize(static_cast<size_t>(n) * n);
            for (int v = 0; v < n; ++v)
                for (int w = 0; w < n; ++w) {
                    // Ordered-pair isomorphism type: equality plus both arcs.
                    int64_t eq = (v == w) ? 1 : 0;
                    int64_t a1 = graphs_[g]->at(v, w);
                    int64_t a2 = graphs_[g]->at(w, v);
                    keys[g][static_cast<size_t>(v) * n + w] =
                        Key{(eq << 62) | ((a1 + 1) << 31) | (a2 + 1), 0, 0};
                }
        }
        intern(keys);
    }

    void refine_round() {
        std::vector<std::vector<Key>> keys(graphs_.size());
        for (size_t g = 0; g < graphs_.size(); ++g) {
            int n = graphs_[g]->n;
            const auto& col = colors_[g];
            // Transposed copy so both factors of the multiset element are
            // row-contiguous in the inner loop.
            std::vector<int> colT(static_cast<size_t>(n) * n);
            for (int v = 0; v < n; ++v)
                for (int w = 0; w < n; ++w)
                    colT[static_cast<size_t>(w) * n + v] = col[static_cast<size_t>(v) * n + w];
            keys[g].resize(static_cast<size_t>(n) * n);
            auto& ks = keys[g];
#ifdef TWINTOUR_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (parallel_)
#endif
            for (int v = 0; v < n; ++v) {
                for (int w = 0; w < n; ++w) {
                    const int* to_w = &colT[static_cast<size_t>(w) * n];    // c(u,w)
                    const int* from_v = &col[static_cast<size_t>(v) * n];   // c(v,u)
                    uint64_t h1 = 0, h2 = 0;
                    for (int u = 0; u < n; ++u) {
                        h1 += elem_hash1(to_w[u], from_v[u]);
                        h2 += elem_hash2(to_w[u], from_v[u]);
                    }
                    ks[static_cast<size_t>(v) * n + w] =
                        Key{col[static_cast<size_t>(v) * n + w], h1, h2};
                }
            }
        }
        intern(keys);
    }
};

}  // namespace

StableColoring wl_refine(int k, const ColoredDigraph& g, const WlOptions& opts) {
    if (k < 2) throw std::invalid_argument("wl_refine: k must be at least 2");
    if (g.n < 1) throw std::invalid_argument("wl_refine: empty graph");
    if (k == 2) {
        PairRefiner refiner({&g}, opts.parallel);
        refiner.run();
        return refiner.result(0);
    }
    return wl_refine_reference(k, g, opts);
}

JointColoring wl_refine_joint(int k, const ColoredDigraph& g, const ColoredDigraph& h,
                              const WlOptions& opts) {
    if (k < 2) throw std::invalid_argument("wl_refine_joint: k must be at least 2");
    JointColoring out;
    if (k == 2) {
        PairRefiner refiner({&g, &h}, opts.parallel);
        refiner.run();
        out.first = refiner.result(0);
        out.second = refiner.result(1);
    } else {
        // The generic engine handles the joint run with a shared table.
        out = wl_refine_joint_reference(k, g, h, opts);
    }
    out.distinguished = out.first.histogram() != out.second.histogram();
    return out;
}

bool wl_distinguishes(int k, const ColoredDigraph& g, const ColoredDigraph& h,
                      const WlOptions& opts) {
    if (g.n != h.n) return true;
    return wl_refine_joint(k, g, h, opts).distinguished;
}

bool is_2wl_homogeneous(const ColoredDigraph& g, const WlOptions& opts) {
    return wl_refine(2, g, opts).all_diag_equal();
}

Digraph color_subgraph(const Digraph& g, const StableColoring& chi, const std::set<int>& colors) {
    if (chi.n != g.n()) throw std::invalid_argument("color_subgraph: coloring domain mismatch");
    auto diag = chi.diag_colors();
    for (int c : colors)
        if (diag.count(c))
            throw std::invalid_argument("color_subgraph: color " + std::to_string(c) +
                                        " is a vertex (diagonal) color");
    Digraph out(g.n());
    for (auto [u, v] : g.edges())
        if (colors.count(chi.pair_color(u, v))) out.add_edge(u, v);
    return out;
}

PartitionSequenceResult partition_sequence(const Tournament& t, int p, const StableColoring* chi,
                                           const WlOptions& opts) {
    StableColoring own;
    if (!chi) {
        own = wl_refine(2, ColoredDigraph::from_tournament(t), opts);
        chi = &own;
    }
    if (chi->n != t.n()) throw std::invalid_argument("partition_sequence: coloring mismatch");
    if (!chi->all_diag_equal())
        throw std::invalid_argument("partition_sequence: tournament is not 2-WL-homogeneous");

    PartitionSequence seq;
    seq.levels.push_back(Partition::discrete(t.n()));
    std::set<int> chosen;
    while (!seq.levels.back().is_trivial()) {
        const Partition& q = seq.levels.back();
        int best_color = -1, best_v = -1, best_w = -1;
        for (int v = 0; v < t.n(); ++v)
            for (int w : t.out_neighbors(v)) {
                if (q.part_of(v) == q.part_of(w)) continue;
                int c = chi->pair_color(v, w);
                if (best_color != -1 &&
                    std::tie(c, v, w) >= std::tie(best_color, best_v, best_w))
                    continue;
                if (mixed_degree_partition(t, q, v, w) <= p) {
                    best_color = c;
                    best_v = v;
                    best_w = w;
                }
            }
        if (best_color == -1)
            return TwinWidthExceeded{static_cast<int>(seq.colors.size())};
        chosen.insert(best_color);
        Digraph sub = color_subgraph(t.digraph(), *chi, chosen);
        Partition next = scc(sub);
        if (next != wcc(sub))
            throw std::logic_error(
                "partition_sequence: SCCs differ from WCCs on a homogeneous input; "
                "this indicates an implementation bug");
        if (!q.refines(next) || next.size() >= q.size())
            throw std::logic_error("partition_sequence: chain failed to coarsen strictly");
        seq.colors.push_back(best_color);
        seq.levels.push_back(std::move(next));
    }
    return seq;
}

}  // namespace twintour
