#include "twintour/perm.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace twintour {

Perm compose(const Perm& a, const Perm& b) {
    Perm c;
    c.img.resize(a.size());
    for (int x = 0; x < a.size(); ++x) c.img[x] = b.img[a.img[x]];
    return c;
}

Perm inverse(const Perm& p) {
    Perm q;
    q.img.resize(p.size());
    for (int x = 0; x < p.size(); ++x) q.img[p.img[x]] = x;
    return q;
}

bool is_bijection(const std::vector<int>& img, int n) {
    if (static_cast<int>(img.size()) != n) return false;
    std::vector<uint8_t> seen(n, 0);
    for (int y : img) {
        if (y < 0 || y >= n || seen[y]) return false;
        seen[y] = 1;
    }
    return true;
}

PermGroup::PermGroup(int degree, const std::vector<Perm>& generators) : degree_(degree) {
    for (const auto& g : generators) {
        if (!is_bijection(g.img, degree))
            throw std::invalid_argument("generator is not a bijection on the domain");
        if (g.is_identity()) continue;
        if (std::find(input_gens_.begin(), input_gens_.end(), g) != input_gens_.end()) continue;
        input_gens_.push_back(g);
        extend(g);
    }
}

std::vector<Perm> PermGroup::level_generators(int level) const {
    std::vector<Perm> gens;
    for (size_t j = level; j < sgens_.size(); ++j)
        gens.insert(gens.end(), sgens_[j].begin(), sgens_[j].end());
    return gens;
}

void PermGroup::new_base_point(const Perm& witness) {
    // Largest cycle of the witness, smallest point id on ties.
    std::vector<uint8_t> seen(degree_, 0);
    int best_len = 0, best_point = -1;
    for (int v = 0; v < degree_; ++v) {
        if (seen[v] || witness(v) == v) continue;
        int len = 0, x = v;
        while (!seen[x]) {
            seen[x] = 1;
            x = witness(x);
            ++len;
        }
        if (len > best_len) {
            best_len = len;
            best_point = v;
        }
    }
    if (best_point < 0) throw std::logic_error("new_base_point on identity");
    base_.push_back(best_point);
    sgens_.emplace_back();
    orbit_.emplace_back();
    orbit_pos_.emplace_back();
    transversal_.emplace_back();
}

void PermGroup::recompute_orbit(int level) {
    auto gens = level_generators(level);
    int b = base_[level];
    orbit_[level].assign(1, b);
    orbit_pos_[level].assign(degree_, 0);
    orbit_pos_[level][b] = 1;
    transversal_[level].assign(1, Perm::identity(degree_));
    for (size_t head = 0; head < orbit_[level].size(); ++head) {
        int p = orbit_[level][head];
        for (const auto& s : gens) {
            int q = s(p);
            if (orbit_pos_[level][q] == 0) {
                orbit_[level].push_back(q);
                orbit_pos_[level][q] = static_cast<int>(orbit_[level].size());
                transversal_[level].push_back(compose(transversal_[level][head], s));
            }
        }
    }
}

std::pair<Perm, int> PermGroup::sift(Perm g, int from) const {
    for (int i = from; i < static_cast<int>(base_.size()); ++i) {
        int x = g(base_[i]);
        int pos = orbit_pos_[i][x];
        if (pos == 0) return {std::move(g), i};
        g = compose(g, inverse(transversal_[i][pos - 1]));
    }
    return {std::move(g), static_cast<int>(base_.size())};
}

bool PermGroup::contains(const Perm& p) const {
    if (p.size() != degree_) return false;
    auto [res, level] = sift(p, 0);
    (void)level;
    return res.is_identity();
}

void PermGroup::extend(const Perm& g) {
    if (g.is_identity()) return;
    auto [res, level] = sift(g, 0);
    if (res.is_identity()) return;
    if (level == static_cast<int>(base_.size())) new_base_point(res);
    sgens_[level].push_back(res);
    for (int i = level; i >= 0; --i) close_level(i);
}

void PermGroup::close_level(int level) {
    bool dirty = true;
    while (dirty) {
        dirty = false;
        recompute_orbit(level);
        auto gens = level_generators(level);
        for (size_t idx = 0; idx < orbit_[level].size() && !dirty; ++idx) {
            for (const auto& s : gens) {
                int p = orbit_[level][idx];
                int q = s(p);
                const Perm& u_p = transversal_[level][idx];
                const Perm& u_q = transversal_[level][orbit_pos_[level][q] - 1];
                Perm schreier = compose(compose(u_p, s), inverse(u_q));
                auto [res, j] = sift(std::move(schreier), level + 1);
                if (!res.is_identity()) {
                    if (j == static_cast<int>(base_.size())) new_base_point(res);
                    sgens_[j].push_back(res);
                    for (int l = j; l > level; --l) close_level(l);
                    dirty = true;
                    break;
                }
            }
        }
    }
}

BigUint PermGroup::order() const {
    BigUint result(1);
    for (const auto& orb : orbit_) result *= static_cast<uint64_t>(orb.size());
    return result;
}

bool PermGroup::is_trivial() const { return base_.empty(); }

std::vector<int> PermGroup::orbit_ids(int level) const {
    std::vector<int> ids(degree_, -1);
    auto gens = level_generators(level);
    int next = 0;
    std::vector<int> queue;
    for (int s = 0; s < degree_; ++s) {
        if (ids[s] != -1) continue;
        ids[s] = next;
        queue.assign(1, s);
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (const auto& g : gens) {
                int w = g(v);
                if (ids[w] == -1) {
                    ids[w] = next;
                    queue.push_back(w);
                }
            }
        }
        ++next;
    }
    return ids;
}

std::vector<Perm> PermGroup::elements(size_t cap) const {
    std::set<std::vector<int>> seen;
    std::vector<Perm> result{Perm::identity(degree_)};
    seen.insert(result[0].img);
    auto gens = level_generators(0);
    for (size_t head = 0; head < result.size(); ++head) {
        Perm cur = result[head];
        for (const auto& g : gens) {
            Perm next = compose(cur, g);
            if (seen.insert(next.img).second) {
                if (result.size() >= cap) throw std::runtime_error("group too large to enumerate");
                result.push_back(std::move(next));
            }
        }
    }
    return result;
}

std::vector<PermGroup> derived_series(const PermGroup& g) {
    std::vector<PermGroup> series{g};
    while (true) {
        const PermGroup& current = series.back();
        if (current.is_trivial()) break;
        // Commutator subgroup: normal closure of generator commutators.
        std::vector<Perm> gens = current.level_generators(0);
        std::vector<Perm> comm_gens;
        PermGroup closure(current.degree());
        auto add_if_new = [&](const Perm& p) {
            if (!closure.contains(p)) {
                comm_gens.push_back(p);
                closure = PermGroup(current.degree(), comm_gens);
                return true;
            }
            return false;
        };
        for (const auto& a : gens)
            for (const auto& b : gens) {
                Perm c = compose(compose(inverse(a), inverse(b)), compose(a, b));
                add_if_new(c);
            }
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<Perm> snapshot = comm_gens;
            for (const auto& x : snapshot)
                for (const auto& h : gens) {
                    Perm conj = compose(compose(inverse(h), x), h);
                    if (add_if_new(conj)) grew = true;
                }
        }
        if (closure.order() == current.order()) {
            // Perfect group: the series stabilizes here.
            series.push_back(closure);
            break;
        }
        series.push_back(closure);
        if (closure.is_trivial()) break;
    }
    return series;
}

bool is_solvable(const PermGroup& g) {
    auto series = derived_series(g);
    return series.back().is_trivial();
}

std::vector<Perm> wreath_generators(int n, const std::vector<std::vector<int>>& blocks,
                                    const std::vector<std::vector<IsoSet>>& table,
                                    const PermGroup& delta) {
    size_t num_blocks = blocks.size();
    {
        std::vector<uint8_t> seen(n, 0);
        for (const auto& block : blocks)
            for (int v : block) {
                if (v < 0 || v >= n || seen[v])
                    throw std::invalid_argument("wreath blocks must be disjoint and in range");
                seen[v] = 1;
            }
    }
    std::vector<Perm> gens;
    // Block-local extensions of each block's automorphism group.
    for (size_t i = 0; i < num_blocks; ++i) {
        if (!table[i][i])
            throw std::invalid_argument("missing diagonal iso entry for block " + std::to_string(i));
        for (const auto& g : table[i][i]->group.generators()) {
            Perm lifted = Perm::identity(n);
            for (size_t k = 0; k < blocks[i].size(); ++k) lifted.img[blocks[i][k]] = blocks[i][g(static_cast<int>(k))];
            gens.push_back(std::move(lifted));
        }
    }
    // One lifted permutation per delta generator, via table representatives.
    for (const auto& d : delta.generators()) {
        Perm lifted = Perm::identity(n);
        for (size_t i = 0; i < num_blocks; ++i) {
            int j = d(static_cast<int>(i));
            if (!table[i][j])
                throw std::invalid_argument("missing iso entry for blocks (" + std::to_string(i) +
                                            "," + std::to_string(j) + ")");
            const Perm& phi = table[i][j]->rep;
            for (size_t k = 0; k < blocks[i].size(); ++k)
                lifted.img[blocks[i][k]] = blocks[j][phi(static_cast<int>(k))];
        }
        gens.push_back(std::move(lifted));
    }
    return gens;
}

Coset direct_product(int n, const std::vector<DirectFactor>& factors) {
    std::vector<uint8_t> seen1(n, 0), seen2(n, 0);
    Perm rep = Perm::identity(n);
    std::vector<Perm> gens;
    for (const auto& f : factors) {
        if (!f.iso) throw std::invalid_argument("direct_product: factor iso is empty");
        if (f.domain1.size() != f.domain2.size())
            throw std::invalid_argument("direct_product: factor domain size mismatch");
        for (int v : f.domain1) {
            if (v < 0 || v >= n || seen1[v])
                throw std::invalid_argument("direct_product: overlapping side-1 domains");
            seen1[v] = 1;
        }
        for (int v : f.domain2) {
            if (v < 0 || v >= n || seen2[v])
                throw std::invalid_argument("direct_product: overlapping side-2 domains");
            seen2[v] = 1;
        }
        for (size_t k = 0; k < f.domain1.size(); ++k)
            rep.img[f.domain1[k]] = f.domain2[f.iso->rep(static_cast<int>(k))];
        for (const auto& g : f.iso->group.generators()) {
            Perm lifted = Perm::identity(n);
            for (size_t k = 0; k < f.domain1.size(); ++k)
                lifted.img[f.domain1[k]] = f.domain1[g(static_cast<int>(k))];
            gens.push_back(std::move(lifted));
        }
    }
    if (!is_bijection(rep.img, n))
        throw std::invalid_argument("direct_product: glued representative is not a bijection");
    return Coset{PermGroup(n, gens), rep};
}

ColoredDigraph ColoredDigraph::from_tournament(const Tournament& t) {
    ColoredDigraph g(t.n());
    for (auto [u, v] : t.digraph().edges()) g.at(u, v) = 1;
    return g;
}

ColoredDigraph ColoredDigraph::induced(const std::vector<int>& verts) const {
    ColoredDigraph g(static_cast<int>(verts.size()));
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = 0; j < verts.size(); ++j)
            g.at(static_cast<int>(i), static_cast<int>(j)) = at(verts[i], verts[j]);
    return g;
}

namespace {

// Backtracking engine over the stabilizer chain. At level j the images of the
// base prefix are pinned by the accumulated tail; checkers prune on the newly
// pinned point against all earlier ones. The automorphism pass follows the
// classic structure: the identity branch computes the point stabilizer fully,
// every other branch only needs a single witness, and branches already covered
// by the found group are skipped.
template <typename Checker>
class ChainSearch {
public:
    ChainSearch(const PermGroup& gamma, const Checker& check,
                std::vector<std::pair<int, int>> pinned)
        : gamma_(gamma), check_(check), pinned_(std::move(pinned)) {
        int levels = gamma_.base_size();
        orbit_ids_.reserve(levels + 1);
        for (int i = 0; i <= levels; ++i) orbit_ids_.push_back(gamma_.orbit_ids(i));
    }

    // All satisfying elements of Gamma (theta = identity); returns generators
    // of the full subgroup. The identity always satisfies an automorphism
    // checker, so the result is a genuine subgroup.
    std::vector<Perm> automorphisms() {
        std::vector<Perm> gens;
        aut_level(0, gens);
        return gens;
    }

    std::optional<Perm> find_one(const Perm& theta) {
        if (!prefix_feasible(0, theta, inverse(theta))) return std::nullopt;
        return descend(0, theta, inverse(theta));
    }

private:
    const PermGroup& gamma_;
    const Checker& check_;
    std::vector<std::pair<int, int>> pinned_;
    std::vector<std::vector<int>> orbit_ids_;

    bool pinned_feasible(int next_level, const Perm& tau_inv) const {
        const auto& ids = orbit_ids_[next_level];
        for (auto [r, s] : pinned_) {
            int target = tau_inv(s);
            if (ids[r] != ids[target]) return false;
        }
        return true;
    }

    // Checks the newly pinned base point at `level` (images of earlier base
    // points are unchanged by deeper choices).
    bool prefix_ok(int level, const Perm& tau) const {
        int b = gamma_.base_point(level);
        int y = tau(b);
        if (!check_.point_ok(b, y)) return false;
        for (int l = 0; l < level; ++l) {
            int a = gamma_.base_point(l);
            if (!check_.pair_ok(a, b, tau(a), y)) return false;
        }
        return true;
    }

    bool prefix_feasible(int next_level, const Perm& tau, const Perm& tau_inv) const {
        (void)tau;
        return pinned_feasible(next_level, tau_inv);
    }

    bool leaf_ok(const Perm& tau) const {
        for (auto [r, s] : pinned_)
            if (tau(r) != s) return false;
        return check_.leaf_ok(tau);
    }

    std::optional<Perm> descend(int level, const Perm& tau, const Perm& tau_inv) {
        if (level == gamma_.base_size()) {
            if (leaf_ok(tau)) return tau;
            return std::nullopt;
        }
        const auto& orbit = gamma_.orbit(level);
        for (size_t idx = 0; idx < orbit.size(); ++idx) {
            const Perm& u = gamma_.transversal(level, static_cast<int>(idx));
            Perm tau2 = compose(u, tau);
            if (!prefix_ok(level, tau2)) continue;
            Perm tau2_inv = compose(tau_inv, inverse(u));
            if (!prefix_feasible(level + 1, tau2, tau2_inv)) continue;
            if (auto found = descend(level + 1, tau2, tau2_inv)) return found;
        }
        return std::nullopt;
    }

    // Full subgroup search along the identity prefix.
    void aut_level(int level, std::vector<Perm>& gens) {
        if (level == gamma_.base_size()) return;
        // First the stabilizer below (identity branch).
        aut_level(level + 1, gens);
        int b = gamma_.base_point(level);
        const auto& orbit = gamma_.orbit(level);
        // Orbit of b under found generators, for branch skipping.
        std::vector<uint8_t> covered(gamma_.degree(), 0);
        auto recompute_covered = [&]() {
            std::fill(covered.begin(), covered.end(), 0);
            covered[b] = 1;
            std::vector<int> queue{b};
            while (!queue.empty()) {
                int v = queue.back();
                queue.pop_back();
                for (const auto& g : gens) {
                    if (!covered[g(v)]) {
                        covered[g(v)] = 1;
                        queue.push_back(g(v));
                    }
                    int w = inverse(g)(v);
                    if (!covered[w]) {
                        covered[w] = 1;
                        queue.push_back(w);
                    }
                }
            }
        };
        recompute_covered();
        for (size_t idx = 0; idx < orbit.size(); ++idx) {
            if (orbit[idx] == b) continue;
            if (covered[orbit[idx]]) continue;
            const Perm& u = gamma_.transversal(level, static_cast<int>(idx));
            if (!prefix_ok(level, u)) continue;
            Perm u_inv = inverse(u);
            if (!prefix_feasible(level + 1, u, u_inv)) continue;
            if (auto found = descend(level + 1, u, u_inv)) {
                gens.push_back(*found);
                recompute_covered();
            }
        }
    }

};

struct GraphChecker {
    const ColoredDigraph& g1;
    const ColoredDigraph& g2;

    bool point_ok(int x, int y) const { return g1.at(x, x) == g2.at(y, y); }
    bool pair_ok(int x1, int x2, int y1, int y2) const {
        return g1.at(x1, x2) == g2.at(y1, y2) && g1.at(x2, x1) == g2.at(y2, y1);
    }
    bool leaf_ok(const Perm& p) const {
        int n = g1.n;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (g1.at(u, v) != g2.at(p(u), p(v))) return false;
        return true;
    }
};

struct HypergraphChecker {
    const Hypergraph& h1;
    const Hypergraph& h2;
    std::vector<std::vector<std::pair<int, int>>> profile1, profile2;  // per-vertex (size,count)
    std::set<std::vector<int>> edge_set2;

    HypergraphChecker(const Hypergraph& a, const Hypergraph& b) : h1(a), h2(b) {
        profile1 = profiles(a);
        profile2 = profiles(b);
        for (const auto& e : b.edges) edge_set2.insert(e);
    }

    static std::vector<std::vector<std::pair<int, int>>> profiles(const Hypergraph& h) {
        std::vector<std::map<int, int>> acc(h.n);
        for (const auto& e : h.edges)
            for (int v : e) acc[v][static_cast<int>(e.size())]++;
        std::vector<std::vector<std::pair<int, int>>> out(h.n);
        for (int v = 0; v < h.n; ++v) out[v].assign(acc[v].begin(), acc[v].end());
        return out;
    }

    bool point_ok(int x, int y) const { return profile1[x] == profile2[y]; }
    bool pair_ok(int, int, int, int) const { return true; }
    bool leaf_ok(const Perm& p) const {
        if (h1.edges.size() != h2.edges.size()) return false;
        std::vector<int> image;
        for (const auto& e : h1.edges) {
            image.clear();
            for (int v : e) image.push_back(p(v));
            std::sort(image.begin(), image.end());
            if (!edge_set2.count(image)) return false;
        }
        return true;
    }
};

template <typename Checker>
IsoSet transporter_impl(int n1, int n2, const Checker& aut_check, const Checker& iso_check,
                        const PermGroup& gamma, const Perm& theta,
                        const std::vector<std::pair<int, int>>& pinned) {
    if (n1 != n2) return std::nullopt;
    if (gamma.degree() != n1 || theta.size() != n1)
        throw std::invalid_argument("transporter: domain size mismatch");
    std::vector<std::pair<int, int>> aut_pinned;
    aut_pinned.reserve(pinned.size());
    for (auto [r, s] : pinned) {
        (void)s;
        aut_pinned.emplace_back(r, r);
    }
    ChainSearch aut_search(gamma, aut_check, aut_pinned);
    std::vector<Perm> aut_gens = aut_search.automorphisms();
    ChainSearch iso_search(gamma, iso_check, pinned);
    auto rep = iso_search.find_one(theta);
    if (!rep) return std::nullopt;
    return Coset{PermGroup(n1, aut_gens), *rep};
}

}  // namespace

IsoSet transporter_graph(const ColoredDigraph& g1, const ColoredDigraph& g2,
                         const PermGroup& gamma, const Perm& theta,
                         const std::vector<std::pair<int, int>>& pinned) {
    GraphChecker aut_check{g1, g1};
    GraphChecker iso_check{g1, g2};
    return transporter_impl(g1.n, g2.n, aut_check, iso_check, gamma, theta, pinned);
}

IsoSet transporter_hypergraph(const Hypergraph& h1, const Hypergraph& h2,
                              const PermGroup& gamma, const Perm& theta,
                              const std::vector<std::pair<int, int>>& pinned) {
    if (h1.n != h2.n) return std::nullopt;
    // Cheap necessary condition: matching edge-size multisets.
    std::multiset<size_t> s1, s2;
    for (const auto& e : h1.edges) s1.insert(e.size());
    for (const auto& e : h2.edges) s2.insert(e.size());
    if (s1 != s2) return std::nullopt;
    HypergraphChecker aut_check(h1, h1);
    HypergraphChecker iso_check(h1, h2);
    return transporter_impl(h1.n, h2.n, aut_check, iso_check, gamma, theta, pinned);
}

IsoSet invert_iso(const IsoSet& iso) {
    if (!iso) return std::nullopt;
    Perm rep_inv = inverse(iso->rep);
    std::vector<Perm> gens;
    for (const auto& g : iso->group.generators())
        gens.push_back(compose(compose(rep_inv, g), iso->rep));
    return Coset{PermGroup(iso->group.degree(), gens), rep_inv};
}

}  // namespace twintour
