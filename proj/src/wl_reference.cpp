#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "twintour/wl.hpp"

namespace twintour {

namespace {

// Exact k-WL engine: full sorted multiset signatures, interned in sorted
// signature order. Serial; meant as the reference for the hashed kernel and
// as the only engine for k >= 3 (test-scale n).
class TupleRefiner {
public:
    TupleRefiner(int k, std::vector<const ColoredDigraph*> graphs, size_t tuple_cap)
        : k_(k), graphs_(std::move(graphs)) {
        for (const auto* g : graphs_) {
            size_t tuples = 1;
            for (int i = 0; i < k_; ++i) {
                tuples *= static_cast<size_t>(g->n);
                if (tuples > tuple_cap)
                    throw std::invalid_argument("wl_refine: n^k exceeds the tuple cap");
            }
            tuple_counts_.push_back(tuples);
        }
        colors_.resize(graphs_.size());
        for (size_t g = 0; g < graphs_.size(); ++g) colors_[g].assign(tuple_counts_[g], 0);
    }

    void run() {
        assign_initial();
        rounds_ = 0;
        while (true) {
            int before = num_colors_;
            refine_round();
            if (num_colors_ == before) break;
            ++rounds_;
        }
    }

    StableColoring result(size_t g) const {
        StableColoring sc;
        sc.k = k_;
        sc.n = graphs_[g]->n;
        sc.colors = colors_[g];
        sc.num_colors = num_colors_;
        sc.rounds = rounds_;
        return sc;
    }

private:
    int k_;
    std::vector<const ColoredDigraph*> graphs_;
    std::vector<size_t> tuple_counts_;
    std::vector<std::vector<int>> colors_;
    int num_colors_ = 0;
    int rounds_ = 0;

    std::vector<int> decode(size_t rank, int n) const {
        std::vector<int> tuple(k_);
        for (int i = k_ - 1; i >= 0; --i) {
            tuple[i] = static_cast<int>(rank % n);
            rank /= n;
        }
        return tuple;
    }

    void intern(std::vector<std::vector<std::vector<int64_t>>>& sigs) {
        std::vector<std::vector<int64_t>> all;
        for (const auto& per_graph : sigs)
            all.insert(all.end(), per_graph.begin(), per_graph.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        num_colors_ = static_cast<int>(all.size());
        for (size_t g = 0; g < graphs_.size(); ++g)
            for (size_t t = 0; t < tuple_counts_[g]; ++t)
                colors_[g][t] = static_cast<int>(
                    std::lower_bound(all.begin(), all.end(), sigs[g][t]) - all.begin());
    }

    void assign_initial() {
        std::vector<std::vector<std::vector<int64_t>>> sigs(graphs_.size());
        for (size_t g = 0; g < graphs_.size(); ++g) {
            int n = graphs_[g]->n;
            sigs[g].resize(tuple_counts_[g]);
            for (size_t t = 0; t < tuple_counts_[g]; ++t) {
                auto tuple = decode(t, n);
                std::vector<int64_t> sig;
                sig.reserve(static_cast<size_t>(k_) * k_ * 2);
                for (int i = 0; i < k_; ++i)
                    for (int j = 0; j < k_; ++j) {
                        sig.push_back(tuple[i] == tuple[j] ? 1 : 0);
                        sig.push_back(graphs_[g]->at(tuple[i], tuple[j]));
                    }
                sigs[g][t] = std::move(sig);
            }
        }
        intern(sigs);
    }

    void refine_round() {
        std::vector<std::vector<std::vector<int64_t>>> sigs(graphs_.size());
        for (size_t g = 0; g < graphs_.size(); ++g) {
            int n = graphs_[g]->n;
            const auto& col = colors_[g];
            std::vector<size_t> strides(k_);
            {
                size_t s = 1;
                for (int i = k_ - 1; i >= 0; --i) {
                    strides[i] = s;
                    s *= static_cast<size_t>(n);
                }
            }
            sigs[g].resize(tuple_counts_[g]);
            std::vector<std::vector<int>> rows;
            for (size_t t = 0; t < tuple_counts_[g]; ++t) {
                auto tuple = decode(t, n);
                rows.assign(n, std::vector<int>(k_));
                for (int w = 0; w < n; ++w)
                    for (int i = 0; i < k_; ++i) {
                        long long substituted =
                            static_cast<long long>(t) +
                            (static_cast<long long>(w) - tuple[i]) *
                                static_cast<long long>(strides[i]);
                        rows[w][i] = col[substituted];
                    }
                std::sort(rows.begin(), rows.end());
                std::vector<int64_t> sig;
                sig.reserve(1 + static_cast<size_t>(n) * k_);
                sig.push_back(col[t]);
                for (const auto& row : rows)
                    for (int c : row) sig.push_back(c);
                sigs[g][t] = std::move(sig);
            }
        }
        intern(sigs);
    }
};

}  // namespace

StableColoring wl_refine_reference(int k, const ColoredDigraph& g, const WlOptions& opts) {
    if (k < 2) throw std::invalid_argument("wl_refine_reference: k must be at least 2");
    TupleRefiner refiner(k, {&g}, opts.tuple_cap);
    refiner.run();
    return refiner.result(0);
}

JointColoring wl_refine_joint_reference(int k, const ColoredDigraph& g, const ColoredDigraph& h,
                                        const WlOptions& opts) {
    TupleRefiner refiner(k, {&g, &h}, opts.tuple_cap);
    refiner.run();
    JointColoring out;
    out.first = refiner.result(0);
    out.second = refiner.result(1);
    return out;
}

}  // namespace twintour
