#include "support.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace twintour::testsupport {

namespace {

int pair_index(int i, int j) {  // i < j
    return j * (j - 1) / 2 + i;
}

}  // namespace

Tournament tournament_from_mask(int n, uint64_t mask) {
    Digraph g(n);
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            if (mask & (1ull << pair_index(i, j)))
                g.add_edge(i, j);
            else
                g.add_edge(j, i);
        }
    return Tournament(std::move(g));
}

uint64_t canonical_mask(const Tournament& t) {
    int n = t.n();
    if (n > 7) throw std::invalid_argument("canonical_mask: n too large");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    uint64_t best = ~0ull;
    std::vector<int> inv(n);
    do {
        for (int i = 0; i < n; ++i) inv[perm[i]] = i;
        uint64_t mask = 0;
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < j; ++i)
                if (t.has_edge(inv[i], inv[j])) mask |= 1ull << pair_index(i, j);
        best = std::min(best, mask);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

const std::vector<Tournament>& canonical_tournaments(int n) {
    static std::map<int, std::vector<Tournament>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1 || n > 7) throw std::invalid_argument("canonical_tournaments: supported n is 1..7");
    std::vector<Tournament> result;
    if (n == 1) {
        result.push_back(Tournament(Digraph(1)));
    } else {
        const auto& smaller = canonical_tournaments(n - 1);
        std::set<uint64_t> seen;
        for (const auto& base : smaller) {
            // New vertex n-1 with every orientation pattern against the rest.
            for (uint64_t pattern = 0; pattern < (1ull << (n - 1)); ++pattern) {
                Digraph g(n);
                for (auto [u, v] : base.digraph().edges()) g.add_edge(u, v);
                for (int i = 0; i < n - 1; ++i) {
                    if (pattern & (1ull << i))
                        g.add_edge(i, n - 1);
                    else
                        g.add_edge(n - 1, i);
                }
                Tournament t(std::move(g));
                uint64_t canon = canonical_mask(t);
                if (seen.insert(canon).second)
                    result.push_back(tournament_from_mask(n, canon));
            }
        }
    }
    return cache.emplace(n, std::move(result)).first->second;
}

Tournament random_tournament(int n, std::mt19937& rng) {
    Digraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (rng() & 1)
                g.add_edge(i, j);
            else
                g.add_edge(j, i);
        }
    return Tournament(std::move(g));
}

Digraph random_digraph(int n, double edge_prob, std::mt19937& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Digraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && coin(rng) < edge_prob) g.add_edge(u, v);
    return g;
}

std::vector<int> random_permutation(int n, std::mt19937& rng) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

Tournament circular_tournament(int m) {
    int n = 2 * m + 1;
    Digraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 1; j <= m; ++j) g.add_edge(i, (i + j) % n);
    return Tournament(std::move(g));
}

Tournament transitive_tournament(int n) {
    Digraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return Tournament(std::move(g));
}

Tournament three_cycle() {
    Digraph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    return Tournament(std::move(g));
}

Digraph incidence_digraph_complete(int m) {
    int edge_count = m * (m - 1) / 2;
    Digraph g(m + edge_count);
    int e = m;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            g.add_edge(e, i);
            g.add_edge(e, j);
            ++e;
        }
    return g;
}

namespace {

// Exhaustive width-bounded dtd search over (vertex set, incoming guard)
// subproblems. A witness derivation never repeats a state along a path, so
// path-blocking is sound; false results are only cached when untainted by a
// block.
struct DtdSearch {
    const Tournament& t;
    int n, w;
    std::vector<uint32_t> small_sets;  // all masks of popcount <= w+1
    std::map<std::pair<uint32_t, uint32_t>, bool> memo;
    std::set<std::pair<uint32_t, uint32_t>> on_path;
    std::map<std::pair<uint32_t, uint32_t>, bool> d2_cache;

    DtdSearch(const Tournament& tour, int width) : t(tour), n(tour.n()), w(width) {
        for (uint32_t s = 0; s < (1u << n); ++s)
            if (__builtin_popcount(s) <= w + 1) small_sets.push_back(s);
    }

    bool d2_ok(uint32_t W, uint32_t guard) {
        auto key = std::make_pair(W, guard);
        auto it = d2_cache.find(key);
        if (it != d2_cache.end()) return it->second;
        // No walk may start and end in W \ guard while visiting a vertex
        // outside W, once the guard is deleted.
        uint32_t avail = ~guard & ((1u << n) - 1);
        uint32_t a = W & avail;
        std::vector<uint8_t> fwd(n, 0), bwd(n, 0);
        std::vector<int> queue;
        for (int v = 0; v < n; ++v)
            if (a & (1u << v)) {
                fwd[v] = 1;
                queue.push_back(v);
            }
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int x : t.out_neighbors(v))
                if ((avail & (1u << x)) && !fwd[x]) {
                    fwd[x] = 1;
                    queue.push_back(x);
                }
        }
        for (int v = 0; v < n; ++v)
            if (a & (1u << v)) {
                bwd[v] = 1;
                queue.push_back(v);
            }
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int x : t.in_neighbors(v))
                if ((avail & (1u << x)) && !bwd[x]) {
                    bwd[x] = 1;
                    queue.push_back(x);
                }
        }
        bool ok = true;
        for (int v = 0; v < n && ok; ++v)
            if ((avail & (1u << v)) && !(W & (1u << v)) && fwd[v] && bwd[v]) ok = false;
        d2_cache[key] = ok;
        return ok;
    }

    bool can_cover(uint32_t rest, uint32_t gamma_set, bool& tainted) {
        if (rest == 0) return true;
        int x = __builtin_ctz(rest);
        uint32_t others = rest & ~(1u << x);
        // Child containing x: iterate over subsets of `others` joined with x.
        uint32_t sub = others;
        while (true) {
            uint32_t child = sub | (1u << x);
            for (uint32_t guard = gamma_set;; guard = (guard - 1) & gamma_set) {
                if (d2_ok(child, guard) && can_tree(child, guard, tainted) &&
                    can_cover(rest & ~child, gamma_set, tainted))
                    return true;
                if (guard == 0) break;
            }
            if (sub == 0) break;
            sub = (sub - 1) & others;
        }
        return false;
    }

    bool can_tree(uint32_t W, uint32_t incoming_guard, bool& tainted) {
        auto key = std::make_pair(W, incoming_guard);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        if (on_path.count(key)) {
            tainted = true;
            return false;
        }
        on_path.insert(key);
        bool sub_tainted = false;
        bool found = false;
        for (uint32_t gamma_set : small_sets) {
            if ((gamma_set & incoming_guard) != incoming_guard) continue;
            // Root bag: any subset of Gamma inside W.
            uint32_t avail = gamma_set & W;
            for (uint32_t bag = avail;; bag = (bag - 1) & avail) {
                if (can_cover(W & ~bag, gamma_set, sub_tainted)) {
                    found = true;
                    break;
                }
                if (bag == 0) break;
            }
            if (found) break;
        }
        on_path.erase(key);
        if (found)
            memo[key] = true;
        else if (!sub_tainted)
            memo[key] = false;
        else
            tainted = true;
        return found;
    }
};

}  // namespace

bool exists_dtd_of_width(const Tournament& t, int w) {
    if (t.n() > 12) throw std::invalid_argument("exists_dtd_of_width: n too large");
    if (w < 0) return false;
    DtdSearch search(t, w);
    bool tainted = false;
    return search.can_tree((1u << t.n()) - 1, 0, tainted);
}

bool dtd_width_refuted_by_connectivity(const Tournament& t, int w) {
    int n = t.n();
    if (n <= 2 * w + 2) return false;
    // Premise: T minus any <= w+1 vertices stays strongly connected.
    std::vector<int> keep;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) > w + 1) continue;
        keep.clear();
        for (int v = 0; v < n; ++v)
            if (!(mask & (1u << v))) keep.push_back(v);
        if (keep.empty()) continue;
        if (scc(t.digraph().induced(keep)).size() != 1) return false;
    }
    return true;
}

namespace {

// Smallest guard sets grown greedily from returning-walk witnesses.
void grow_guards(const Tournament& t, DirectedTreeDecomposition& dtd) {
    int n = t.n();
    auto ch = dtd.children();
    int count = dtd.node_count();
    std::vector<std::vector<uint8_t>> subtree(count, std::vector<uint8_t>(n, 0));
    std::vector<int> order, stack{dtd.root};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        order.push_back(x);
        for (int c : ch[x]) stack.push_back(c);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        for (int v : dtd.bags[*it]) subtree[*it][v] = 1;
        for (int c : ch[*it])
            for (int v = 0; v < n; ++v) subtree[*it][v] |= subtree[c][v];
    }
    auto witness = [&](const std::vector<uint8_t>& in_w, const std::vector<uint8_t>& in_g) {
        std::vector<uint8_t> fwd(n, 0), bwd(n, 0);
        std::vector<int> queue;
        for (int v = 0; v < n; ++v)
            if (in_w[v] && !in_g[v]) fwd[v] = 1, queue.push_back(v);
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int x : t.out_neighbors(v))
                if (!in_g[x] && !fwd[x]) fwd[x] = 1, queue.push_back(x);
        }
        for (int v = 0; v < n; ++v)
            if (in_w[v] && !in_g[v]) bwd[v] = 1, queue.push_back(v);
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int x : t.in_neighbors(v))
                if (!in_g[x] && !bwd[x]) bwd[x] = 1, queue.push_back(x);
        }
        for (int v = 0; v < n; ++v)
            if (!in_w[v] && !in_g[v] && fwd[v] && bwd[v]) return v;
        return -1;
    };
    for (int node = 0; node < count; ++node) {
        if (node == dtd.root) continue;
        std::vector<uint8_t> in_g(n, 0);
        std::vector<int> guard;
        int bad;
        while ((bad = witness(subtree[node], in_g)) != -1) {
            in_g[bad] = 1;
            guard.push_back(bad);
        }
        std::sort(guard.begin(), guard.end());
        dtd.guards[node] = guard;
    }
}

Tournament flipped_transitive(int n, int flips, std::mt19937& rng) {
    std::vector<std::vector<uint8_t>> edge(n, std::vector<uint8_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edge[i][j] = 1;
    for (int f = 0; f < flips; ++f) {
        int i = static_cast<int>(rng() % n);
        int j = static_cast<int>(rng() % n);
        if (i == j) continue;
        std::swap(edge[i][j], edge[j][i]);
    }
    Digraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (edge[i][j]) g.add_edge(i, j);
    return Tournament(std::move(g));
}

}  // namespace

std::vector<BuiltDtd> build_small_width_dtds(int count, int max_width, std::mt19937& rng) {
    std::vector<BuiltDtd> out;
    int shape = 0;
    while (static_cast<int>(out.size()) < count) {
        int n = 4 + static_cast<int>(rng() % 6);
        DirectedTreeDecomposition dtd;
        Tournament t = transitive_tournament(n);
        shape = (shape + 1) % 4;
        switch (shape) {
            case 0: {  // reverse path over a near-transitive tournament
                t = flipped_transitive(n, static_cast<int>(rng() % 4), rng);
                dtd.n = n;
                dtd.root = n - 1;
                dtd.parent.assign(n, -1);
                dtd.bags.assign(n, {});
                dtd.guards.assign(n, {});
                for (int i = 0; i + 1 < n; ++i) dtd.parent[i] = i + 1;
                for (int i = 0; i < n; ++i) dtd.bags[i] = {n - 1 - i};
                break;
            }
            case 1: {  // star over the transitive tournament
                dtd.n = n;
                dtd.root = 0;
                dtd.parent.assign(n, 0);
                dtd.parent[0] = -1;
                dtd.bags.assign(n, {});
                dtd.guards.assign(n, {});
                dtd.bags[0] = {n - 1};
                for (int i = 1; i < n; ++i) dtd.bags[i] = {i - 1};
                break;
            }
            case 2: {  // segment tree over the transitive tournament
                struct Range {
                    int lo, hi, parent;
                };
                std::vector<Range> ranges{{0, n - 1, -1}};
                std::vector<std::vector<int>> bags;
                std::vector<int> parent;
                for (size_t i = 0; i < ranges.size(); ++i) {
                    auto [lo, hi, par] = ranges[i];
                    parent.push_back(par);
                    if (lo == hi) {
                        bags.push_back({lo});
                    } else {
                        bags.push_back({});
                        int mid = (lo + hi) / 2;
                        ranges.push_back({lo, mid, static_cast<int>(i)});
                        ranges.push_back({mid + 1, hi, static_cast<int>(i)});
                    }
                }
                dtd.n = n;
                dtd.root = 0;
                dtd.parent = parent;
                dtd.bags = bags;
                dtd.guards.assign(bags.size(), {});
                break;
            }
            case 3: {  // one-node decomposition (kept only at tiny n)
                t = flipped_transitive(n, 2, rng);
                dtd.n = n;
                dtd.root = 0;
                dtd.parent = {-1};
                std::vector<int> all(n);
                for (int i = 0; i < n; ++i) all[i] = i;
                dtd.bags = {all};
                dtd.guards = {{}};
                break;
            }
        }
        grow_guards(t, dtd);
        if (!validate_dtd(t.digraph(), dtd).valid) continue;
        int width = dtd.width();
        if (width > max_width) continue;
        out.push_back({t, dtd, width});
    }
    return out;
}

}  // namespace twintour::testsupport
