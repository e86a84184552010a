#include "twintour/widths.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace twintour {

std::vector<int> LinearOrder::sequence() const {
    std::vector<int> seq(position.size());
    for (size_t v = 0; v < position.size(); ++v) seq[position[v]] = static_cast<int>(v);
    return seq;
}

LinearOrder LinearOrder::from_sequence(const std::vector<int>& seq) {
    LinearOrder ord;
    ord.position.assign(seq.size(), -1);
    for (size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] < 0 || seq[i] >= static_cast<int>(seq.size()) || ord.position[seq[i]] != -1)
            throw std::invalid_argument("order sequence is not a permutation");
        ord.position[seq[i]] = static_cast<int>(i);
    }
    return ord;
}

int DirectedPathDecomposition::width() const {
    int w = 0;
    for (const auto& bag : bags) w = std::max(w, static_cast<int>(bag.size()));
    return w - 1;
}

std::vector<std::vector<int>> DirectedTreeDecomposition::children() const {
    std::vector<std::vector<int>> ch(node_count());
    for (int t = 0; t < node_count(); ++t)
        if (t != root) ch[parent[t]].push_back(t);
    return ch;
}

std::vector<int> DirectedTreeDecomposition::gamma_closure(int t) const {
    std::set<int> acc(bags[t].begin(), bags[t].end());
    if (t != root) acc.insert(guards[t].begin(), guards[t].end());
    for (int c = 0; c < node_count(); ++c)
        if (c != root && parent[c] == t) acc.insert(guards[c].begin(), guards[c].end());
    return {acc.begin(), acc.end()};
}

int DirectedTreeDecomposition::width() const {
    int w = 0;
    for (int t = 0; t < node_count(); ++t)
        w = std::max(w, static_cast<int>(gamma_closure(t).size()));
    return w - 1;
}

// ---- contraction verification ----

namespace {

struct MergeState {
    int n;
    std::vector<std::vector<int>> members;  // by part id; empty when dead
    std::vector<uint8_t> alive;
    std::vector<uint8_t> red;  // n*n between alive part ids
    std::vector<int> degree;

    bool red_at(int x, int y) const { return red[static_cast<size_t>(x) * n + y] != 0; }
    void set_red(int x, int y, bool value) {
        uint8_t v = value ? 1 : 0;
        red[static_cast<size_t>(x) * n + y] = v;
        red[static_cast<size_t>(y) * n + x] = v;
    }

    explicit MergeState(const RelStructure& a) : n(a.n()) {
        members.resize(n);
        alive.assign(n, 1);
        red.assign(static_cast<size_t>(n) * n, 0);
        degree.assign(n, 0);
        for (int v = 0; v < n; ++v) members[v] = {v};
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (a.red(u, v)) {
                    set_red(u, v, true);
                    ++degree[u];
                    ++degree[v];
                }
    }

    int max_degree() const {
        int best = 0;
        for (int v = 0; v < n; ++v)
            if (alive[v]) best = std::max(best, degree[v]);
        return best;
    }

    // Merges parts p and q (keeping min id); re-derives red edges of the new
    // part from pairwise homogeneity. Other pairs are unaffected.
    void merge(const RelStructure& a, int p, int q) {
        int keep = std::min(p, q), drop = std::max(p, q);
        members[keep].insert(members[keep].end(), members[drop].begin(), members[drop].end());
        std::sort(members[keep].begin(), members[keep].end());
        members[drop].clear();
        alive[drop] = 0;
        for (int x = 0; x < n; ++x) {
            if (!alive[x] || x == keep) continue;
            if (red_at(x, keep)) {
                set_red(x, keep, false);
                --degree[x];
            }
            if (red_at(x, drop)) {
                set_red(x, drop, false);
                --degree[x];
            }
        }
        degree[keep] = 0;
        degree[drop] = 0;
        for (int x = 0; x < n; ++x) {
            if (!alive[x] || x == keep) continue;
            if (!homogeneous_pair(a, members[keep], members[x])) {
                set_red(keep, x, true);
                ++degree[keep];
                ++degree[x];
            }
        }
    }
};

void check_merge_ids(const MergeState& st, int step, int p, int q) {
    auto fail = [&](const std::string& why) {
        throw ValidationException(
            {"contraction step " + std::to_string(step), why + " (merge " + std::to_string(p) +
                                                             " " + std::to_string(q) + ")"});
    };
    if (p < 0 || p >= st.n || q < 0 || q >= st.n) fail("part id out of range");
    if (p == q) fail("merging a part with itself");
    if (!st.alive[p] || !st.alive[q]) fail("part id is not alive");
}

}  // namespace

std::vector<Partition> contraction_partitions(const ContractionSequence& seq) {
    int n = seq.n;
    std::vector<int> part_of(n);
    for (int v = 0; v < n; ++v) part_of[v] = v;
    std::vector<Partition> result{Partition::from_part_ids(part_of)};
    for (auto [p, q] : seq.merges) {
        int keep = std::min(p, q), drop = std::max(p, q);
        for (int v = 0; v < n; ++v)
            if (part_of[v] == drop) part_of[v] = keep;
        result.push_back(Partition::from_part_ids(part_of));
    }
    return result;
}

int verify_contraction(const RelStructure& a, const ContractionSequence& seq) {
    if (seq.n != a.n())
        throw ValidationException({"contraction sequence", "domain size mismatch"});
    if (static_cast<int>(seq.merges.size()) != std::max(0, seq.n - 1))
        throw ValidationException({"contraction sequence",
                                   "expected " + std::to_string(seq.n - 1) + " merges, got " +
                                       std::to_string(seq.merges.size())});
    MergeState st(a);
    int width = st.max_degree();
    for (size_t i = 0; i < seq.merges.size(); ++i) {
        auto [p, q] = seq.merges[i];
        check_merge_ids(st, static_cast<int>(i), p, q);
        st.merge(a, p, q);
        width = std::max(width, st.max_degree());
    }
    return width;
}

// ---- exact twin width ----

namespace {

std::string partition_key(const std::vector<std::vector<int>>& parts) {
    std::string key;
    for (const auto& part : parts) {
        for (int v : part) {
            key += static_cast<char>(v & 0xff);
            key += static_cast<char>((v >> 8) & 0xff);
        }
        key += '\x7f';
        key += '\x7f';
    }
    return key;
}

struct BoundedSearch {
    const RelStructure& a;
    int w;
    long long budget;  // -1 = unlimited
    long long nodes = 0;
    bool exhausted = false;
    std::unordered_set<std::string> failed;
    std::vector<std::pair<int, int>> merges;

    BoundedSearch(const RelStructure& structure, int width, long long node_budget)
        : a(structure), w(width), budget(node_budget) {}

    bool run() {
        MergeState st(a);
        if (st.max_degree() > w) return false;
        return dfs(st);
    }

    bool dfs(MergeState& st) {
        int alive_count = 0;
        for (int v = 0; v < st.n; ++v) alive_count += st.alive[v];
        if (alive_count == 1) return true;
        if (budget >= 0 && ++nodes > budget) {
            exhausted = true;
            return false;
        }
        std::vector<std::vector<int>> parts;
        std::vector<int> ids;
        for (int v = 0; v < st.n; ++v)
            if (st.alive[v]) {
                parts.push_back(st.members[v]);
                ids.push_back(v);
            }
        std::string key = partition_key(parts);
        if (failed.count(key)) return false;

        // Candidates ordered by resulting red degree, then by part ids.
        struct Cand {
            int deg, p, q;
            bool operator<(const Cand& o) const {
                return std::tie(deg, p, q) < std::tie(o.deg, o.p, o.q);
            }
        };
        std::vector<Cand> cands;
        for (size_t i = 0; i < ids.size(); ++i)
            for (size_t j = i + 1; j < ids.size(); ++j) {
                MergeState child = st;
                child.merge(a, ids[i], ids[j]);
                int deg = child.max_degree();
                if (deg <= w) cands.push_back({deg, ids[i], ids[j]});
            }
        std::sort(cands.begin(), cands.end());
        for (const auto& c : cands) {
            MergeState child = st;
            child.merge(a, c.p, c.q);
            merges.emplace_back(c.p, c.q);
            if (dfs(child)) return true;
            merges.pop_back();
            if (exhausted) return false;
        }
        failed.insert(std::move(key));
        return false;
    }
};

}  // namespace

std::optional<ContractionSequence> find_contraction_of_width(const RelStructure& a, int w,
                                                             long long node_budget) {
    BoundedSearch search(a, w, node_budget);
    if (search.run()) {
        ContractionSequence seq;
        seq.n = a.n();
        seq.merges = search.merges;
        return seq;
    }
    if (search.exhausted)
        throw std::runtime_error("find_contraction_of_width: node budget exhausted");
    return std::nullopt;
}

ExactTwinWidthResult exact_twin_width(const RelStructure& a) {
    if (a.n() == 1) return {0, ContractionSequence{1, {}}};
    for (int w = red_degree(a);; ++w) {
        if (w > a.n()) throw std::logic_error("exact_twin_width: width bound exceeded n");
        if (a.n() > 10) std::fprintf(stderr, "exact_twin_width: trying width %d\n", w);
        auto seq = find_contraction_of_width(a, w);
        if (seq) return {w, *seq};
    }
}

// ---- interval order from a contraction sequence ----

LinearOrder order_for_tww(const RelStructure& a, const ContractionSequence& seq) {
    if (seq.n != a.n())
        throw ValidationException({"order_for_tww", "domain size mismatch"});
    // Merge forest: each merge hangs the two current roots under a new node;
    // DFS leaf order makes every part of every P_i an interval.
    int n = seq.n;
    struct Node {
        int left = -1, right = -1, vertex = -1;
    };
    std::vector<Node> nodes(n);
    std::vector<int> root_of(n);
    std::vector<uint8_t> alive(n, 1);
    for (int v = 0; v < n; ++v) {
        nodes[v].vertex = v;
        root_of[v] = v;
    }
    for (size_t i = 0; i < seq.merges.size(); ++i) {
        auto [p, q] = seq.merges[i];
        auto fail = [&](const std::string& why) {
            throw ValidationException({"order_for_tww step " + std::to_string(i), why});
        };
        if (p < 0 || p >= n || q < 0 || q >= n || p == q || !alive[p] || !alive[q])
            fail("bad merge ids");
        int keep = std::min(p, q), drop = std::max(p, q);
        Node parent;
        parent.left = root_of[keep];
        parent.right = root_of[drop];
        nodes.push_back(parent);
        root_of[keep] = static_cast<int>(nodes.size()) - 1;
        alive[drop] = 0;
    }
    std::vector<int> leaf_order;
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (alive[v]) stack.push_back(root_of[v]);
    std::reverse(stack.begin(), stack.end());
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (nodes[x].vertex >= 0) {
            leaf_order.push_back(nodes[x].vertex);
        } else {
            stack.push_back(nodes[x].right);
            stack.push_back(nodes[x].left);
        }
    }
    return LinearOrder::from_sequence(leaf_order);
}

// ---- cut width ----

int cutwidth_of_order(const Digraph& g, const LinearOrder& ord) {
    if (static_cast<int>(ord.position.size()) != g.n())
        throw std::invalid_argument("cutwidth_of_order: order size mismatch");
    int n = g.n();
    std::vector<int> cut(n, 0);  // cut after each prefix length 1..n
    for (auto [u, v] : g.edges()) {
        int pu = ord.position[u], pv = ord.position[v];
        if (pu < pv) {
            // Edge crosses every prefix boundary from pu+1 .. pv.
            cut[pu] += 1;
            if (pv < n) cut[pv] -= 1;
        }
    }
    int best = 0, running = 0;
    for (int i = 0; i < n; ++i) {
        running += cut[i];
        best = std::max(best, running);
    }
    return best;
}

ExactCutwidthResult exact_cutwidth(const Digraph& g) {
    int n = g.n();
    if (n > 24) throw std::invalid_argument("exact_cutwidth: n too large for subset search");
    std::vector<uint32_t> out_mask(n, 0);
    for (auto [u, v] : g.edges()) out_mask[u] |= 1u << v;
    uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
    std::vector<int> f(full + 1, 0), choice(full + 1, -1);
    for (uint32_t s = 1; s <= full; ++s) {
        int cut = 0;
        for (int u = 0; u < n; ++u)
            if (s & (1u << u)) cut += __builtin_popcount(out_mask[u] & ~s & full);
        int best = INT32_MAX;
        int best_v = -1;
        for (int v = 0; v < n; ++v) {
            if (!(s & (1u << v))) continue;
            int sub = f[s & ~(1u << v)];
            if (sub < best || (sub == best && v < best_v)) {
                best = sub;
                best_v = v;
            }
        }
        f[s] = std::max(cut, best);
        choice[s] = best_v;
    }
    std::vector<int> seq;
    uint32_t s = full;
    while (s) {
        int v = choice[s];
        seq.push_back(v);
        s &= ~(1u << v);
    }
    std::reverse(seq.begin(), seq.end());
    return {f[full], LinearOrder::from_sequence(seq)};
}

// ---- decompositions ----

DecompositionReport validate_dpd(const Digraph& g, const DirectedPathDecomposition& dpd) {
    DecompositionReport report;
    auto fail = [&](const std::string& check, const std::string& witness) {
        report.valid = false;
        report.violation = {check, witness};
        return report;
    };
    int n = g.n();
    int p = static_cast<int>(dpd.bags.size());
    std::vector<int> first(n, -1), last(n, -1);
    std::vector<std::vector<uint8_t>> in_bag(p, std::vector<uint8_t>(n, 0));
    for (int t = 0; t < p; ++t)
        for (int v : dpd.bags[t]) {
            if (v < 0 || v >= n) return fail("dpd bag", "vertex id out of range");
            if (in_bag[t][v]) return fail("dpd bag", "duplicate vertex in bag");
            in_bag[t][v] = 1;
            if (first[v] == -1) first[v] = t;
            last[v] = t;
        }
    for (int v = 0; v < n; ++v) {
        if (first[v] == -1) return fail("dpd cover", "vertex " + std::to_string(v) + " in no bag");
        for (int t = first[v]; t <= last[v]; ++t)
            if (!in_bag[t][v])
                return fail("dpd contiguity", "vertex " + std::to_string(v) +
                                                  " missing from bag " + std::to_string(t));
    }
    for (auto [v, w] : g.edges()) {
        // Need l <= r with v in bag r and w in bag l: first(w) <= last(v).
        if (first[w] > last[v])
            return fail("dpd edge", "edge (" + std::to_string(v) + "," + std::to_string(w) +
                                        ") has no bag pair");
    }
    return report;
}

namespace {

// D.2 check: with the guard removed, no directed walk leaves W and returns.
// Returns a violating outside vertex, or -1.
int returning_walk_witness(const Digraph& g, const std::vector<uint8_t>& in_w,
                           const std::vector<uint8_t>& in_guard) {
    int n = g.n();
    std::vector<uint8_t> fwd(n, 0), bwd(n, 0);
    std::vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (in_w[v] && !in_guard[v]) {
            fwd[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int w : g.out_neighbors(v))
            if (!in_guard[w] && !fwd[w]) {
                fwd[w] = 1;
                queue.push_back(w);
            }
    }
    for (int v = 0; v < n; ++v)
        if (in_w[v] && !in_guard[v]) {
            bwd[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int w : g.in_neighbors(v))
            if (!in_guard[w] && !bwd[w]) {
                bwd[w] = 1;
                queue.push_back(w);
            }
    }
    for (int v = 0; v < n; ++v)
        if (!in_w[v] && !in_guard[v] && fwd[v] && bwd[v]) return v;
    return -1;
}

}  // namespace

DecompositionReport validate_dtd(const Digraph& g, const DirectedTreeDecomposition& dtd) {
    DecompositionReport report;
    auto fail = [&](const std::string& check, const std::string& witness) {
        report.valid = false;
        report.violation = {check, witness};
        return report;
    };
    int n = g.n();
    int t_count = dtd.node_count();
    if (dtd.root < 0 || dtd.root >= t_count) return fail("dtd tree", "root out of range");
    // Tree wellformedness: every non-root has a parent and reaches the root.
    for (int t = 0; t < t_count; ++t) {
        if (t == dtd.root) {
            if (dtd.parent[t] != -1) return fail("dtd tree", "root has a parent");
            continue;
        }
        if (dtd.parent[t] < 0 || dtd.parent[t] >= t_count)
            return fail("dtd tree", "node " + std::to_string(t) + " has no parent");
        int hops = 0, cur = t;
        while (cur != dtd.root) {
            cur = dtd.parent[cur];
            if (cur < 0 || ++hops > t_count)
                return fail("dtd tree", "cycle at node " + std::to_string(t));
        }
    }
    // (D.1) bags partition V.
    std::vector<int> owner(n, -1);
    for (int t = 0; t < t_count; ++t)
        for (int v : dtd.bags[t]) {
            if (v < 0 || v >= n) return fail("dtd bag", "vertex id out of range");
            if (owner[v] != -1)
                return fail("dtd partition", "vertex " + std::to_string(v) + " in two bags");
            owner[v] = t;
        }
    for (int v = 0; v < n; ++v)
        if (owner[v] == -1)
            return fail("dtd partition", "vertex " + std::to_string(v) + " in no bag");
    // (D.2) guards hit all returning walks.
    auto ch = dtd.children();
    std::vector<std::vector<uint8_t>> subtree(t_count, std::vector<uint8_t>(n, 0));
    // Post-order accumulation of subtree bag unions.
    std::vector<int> order, stack{dtd.root};
    while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        order.push_back(t);
        for (int c : ch[t]) stack.push_back(c);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int t = *it;
        for (int v : dtd.bags[t]) subtree[t][v] = 1;
        for (int c : ch[t])
            for (int v = 0; v < n; ++v) subtree[t][v] |= subtree[c][v];
    }
    for (int t = 0; t < t_count; ++t) {
        if (t == dtd.root) continue;
        std::vector<uint8_t> in_guard(n, 0);
        for (int v : dtd.guards[t]) {
            if (v < 0 || v >= n) return fail("dtd guard", "vertex id out of range");
            in_guard[v] = 1;
        }
        int witness = returning_walk_witness(g, subtree[t], in_guard);
        if (witness != -1)
            return fail("dtd guard",
                        "edge (" + std::to_string(dtd.parent[t]) + "," + std::to_string(t) +
                            "): walk through vertex " + std::to_string(witness) + " unguarded");
    }
    return report;
}

DirectedPathDecomposition dpd_from_order(const Digraph& g, const LinearOrder& ord) {
    int n = g.n();
    if (static_cast<int>(ord.position.size()) != n)
        throw std::invalid_argument("dpd_from_order: order size mismatch");
    std::vector<int> last(n);
    for (int v = 0; v < n; ++v) {
        last[v] = ord.position[v];
        for (int w : g.out_neighbors(v)) last[v] = std::max(last[v], ord.position[w]);
    }
    DirectedPathDecomposition dpd;
    dpd.n = n;
    dpd.bags.assign(n, {});
    for (int v = 0; v < n; ++v)
        for (int t = ord.position[v]; t <= last[v]; ++t) dpd.bags[t].push_back(v);
    for (auto& bag : dpd.bags) std::sort(bag.begin(), bag.end());
    return dpd;
}

DirectedTreeDecomposition dtd_from_dpd(const Digraph& g, const DirectedPathDecomposition& dpd) {
    auto report = validate_dpd(g, dpd);
    if (!report.valid) throw ValidationException(report.violation);
    int p = static_cast<int>(dpd.bags.size());
    DirectedTreeDecomposition dtd;
    dtd.n = g.n();
    dtd.root = p - 1;
    dtd.parent.assign(p, -1);
    dtd.bags.assign(p, {});
    dtd.guards.assign(p, {});
    std::vector<std::set<int>> bag_sets;
    for (const auto& bag : dpd.bags) bag_sets.emplace_back(bag.begin(), bag.end());
    dtd.bags[0] = dpd.bags[0];
    for (int i = 1; i < p; ++i) {
        dtd.parent[i - 1] = i;
        for (int v : dpd.bags[i])
            if (!bag_sets[i - 1].count(v)) dtd.bags[i].push_back(v);
        for (int v : dpd.bags[i])
            if (bag_sets[i - 1].count(v)) dtd.guards[i - 1].push_back(v);
    }
    return dtd;
}

ContractionSequence contraction_from_dpd(const Tournament& t,
                                         const DirectedPathDecomposition& dpd) {
    auto report = validate_dpd(t.digraph(), dpd);
    if (!report.valid) throw ValidationException(report.violation);
    int n = t.n();
    std::vector<int> last(n, -1);
    for (int b = 0; b < static_cast<int>(dpd.bags.size()); ++b)
        for (int v : dpd.bags[b]) last[v] = b;
    std::vector<int> verts(n);
    for (int v = 0; v < n; ++v) verts[v] = v;
    std::stable_sort(verts.begin(), verts.end(), [&](int x, int y) { return last[x] < last[y]; });
    ContractionSequence seq;
    seq.n = n;
    int prefix_id = verts.empty() ? 0 : verts[0];
    for (int i = 1; i < n; ++i) {
        seq.merges.emplace_back(prefix_id, verts[i]);
        prefix_id = std::min(prefix_id, verts[i]);
    }
    return seq;
}

// ---- directed tree width to twin width ----

namespace {

struct DtdWalk {
    const Tournament& t;
    const DirectedTreeDecomposition& dtd;
    int n;
    std::vector<std::vector<int>> ch;
    std::vector<std::vector<uint8_t>> subtree;  // bag union per node
    std::vector<std::vector<int>> gamma;        // Gamma(t) closure

    DtdWalk(const Tournament& tour, const DirectedTreeDecomposition& d)
        : t(tour), dtd(d), n(tour.n()), ch(d.children()) {
        int t_count = dtd.node_count();
        subtree.assign(t_count, std::vector<uint8_t>(n, 0));
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
        gamma.resize(t_count);
        for (int x = 0; x < t_count; ++x) gamma[x] = dtd.gamma_closure(x);
    }

    // Children ordered so earlier subtrees point at later ones outside Gamma(t):
    // induced by the SCC condensation of T restricted to the subtree minus the
    // guards.
    std::vector<int> ordered_children(int node) const {
        std::vector<uint8_t> in_gamma(n, 0);
        for (int v : gamma[node]) in_gamma[v] = 1;
        std::vector<int> x_verts;
        for (int v = 0; v < n; ++v)
            if (subtree[node][v] && !in_gamma[v]) x_verts.push_back(v);
        std::vector<int> comp_rank(n, -1);
        if (!x_verts.empty()) {
            Digraph sub = t.digraph().induced(x_verts);
            Partition comps = scc(sub);
            // Condensation of a tournament is a transitive tournament; rank a
            // component by how many other components beat it.
            int c = comps.size();
            std::vector<int> wins(c, 0);
            for (int i = 0; i < c; ++i)
                for (int j = 0; j < c; ++j) {
                    if (i == j) continue;
                    if (sub.has_edge(comps.part(i)[0], comps.part(j)[0])) ++wins[i];
                }
            std::vector<int> rank(c);
            std::vector<int> by_wins(c);
            for (int i = 0; i < c; ++i) by_wins[i] = i;
            std::sort(by_wins.begin(), by_wins.end(),
                      [&](int x, int y) { return wins[x] > wins[y]; });
            for (int r = 0; r < c; ++r) rank[by_wins[r]] = r;
            for (size_t i = 0; i < x_verts.size(); ++i)
                comp_rank[x_verts[i]] = rank[comps.part_of(static_cast<int>(i))];
        }
        std::vector<int> kids = ch[node];
        std::vector<std::pair<int, int>> keyed;
        for (int c : kids) {
            int key = INT32_MAX;  // empty-after-guard subtrees go last
            for (int v = 0; v < n; ++v)
                if (subtree[c][v] && comp_rank[v] >= 0) key = std::min(key, comp_rank[v]);
            keyed.emplace_back(key, c);
        }
        std::sort(keyed.begin(), keyed.end());
        std::vector<int> out;
        for (auto [key, c] : keyed) out.push_back(c);
        return out;
    }

    // Classes of ~ at stage k: members of the first k ordered child subtrees,
    // grouped by their in-neighborhood from outside the union.
    std::vector<std::vector<int>> classes(int k, const std::vector<int>& ordered_kids) const {
        std::vector<uint8_t> in_z(n, 0);
        for (int i = 0; i < k; ++i)
            for (int v = 0; v < n; ++v)
                if (subtree[ordered_kids[i]][v]) in_z[v] = 1;
        std::vector<int> outside;
        for (int v = 0; v < n; ++v)
            if (!in_z[v]) outside.push_back(v);
        std::map<std::vector<uint8_t>, std::vector<int>> groups;
        for (int v = 0; v < n; ++v) {
            if (!in_z[v]) continue;
            std::vector<uint8_t> sig;
            sig.reserve(outside.size());
            for (int x : outside) sig.push_back(t.has_edge(x, v) ? 1 : 0);
            groups[sig].push_back(v);
        }
        std::vector<std::vector<int>> out;
        for (auto& [sig, members] : groups) out.push_back(members);
        return out;
    }
};

// Coarsens the current partition so that each listed group becomes one part;
// parts outside the groups are untouched. Every current part meeting a group
// must lie inside it (the class chain guarantees this).
void merge_groups(std::vector<int>& part_id, std::vector<std::vector<int>> groups,
                  ContractionSequence& seq) {
    int n = static_cast<int>(part_id.size());
    std::sort(groups.begin(), groups.end());
    for (const auto& group : groups) {
        std::set<int> ids;
        for (int v : group) ids.insert(part_id[v]);
        std::set<int> in_group(group.begin(), group.end());
        for (int v = 0; v < n; ++v)
            if (ids.count(part_id[v]) && !in_group.count(v))
                throw std::logic_error("contraction_from_dtd: class does not coarsen the chain");
        auto it = ids.begin();
        int keep = *it;
        ++it;
        for (; it != ids.end(); ++it) {
            seq.merges.emplace_back(keep, *it);
            for (int v = 0; v < n; ++v)
                if (part_id[v] == *it) part_id[v] = keep;
        }
    }
}

}  // namespace

ContractionSequence contraction_from_dtd(const Tournament& t,
                                         const DirectedTreeDecomposition& dtd) {
    auto report = validate_dtd(t.digraph(), dtd);
    if (!report.valid) throw ValidationException(report.violation);
    int n = t.n();
    DtdWalk walk(t, dtd);
    ContractionSequence seq;
    seq.n = n;
    std::vector<int> part_id(n);
    for (int v = 0; v < n; ++v) part_id[v] = v;

    int t_count = dtd.node_count();
    std::vector<uint8_t> in_front(t_count, 0);
    std::vector<int> pending_children(t_count, 0);
    for (int x = 0; x < t_count; ++x) pending_children[x] = static_cast<int>(walk.ch[x].size());
    for (int x = 0; x < t_count; ++x)
        if (walk.ch[x].empty()) in_front[x] = 1;  // leaves: empty Z, discrete

    // Collapse front nodes bottom-up; per node, interpolate through the
    // ~_{node,k} class partitions k = 1..d.
    while (!in_front[dtd.root]) {
        int node = -1;
        for (int x = 0; x < t_count; ++x) {
            if (in_front[x]) continue;
            bool ready = !walk.ch[x].empty();
            for (int c : walk.ch[x])
                if (!in_front[c]) ready = false;
            if (ready) {
                node = x;
                break;
            }
        }
        if (node == -1) throw std::logic_error("contraction_from_dtd: no expandable front node");
        auto kids = walk.ordered_children(node);
        for (int k = 1; k <= static_cast<int>(kids.size()); ++k)
            merge_groups(part_id, walk.classes(k, kids), seq);
        for (int c : walk.ch[node]) in_front[c] = 0;
        in_front[node] = 1;
    }
    // Finish by merging whatever remains in ascending id order.
    std::set<int> remaining(part_id.begin(), part_id.end());
    auto it = remaining.begin();
    int keep = *it;
    ++it;
    for (; it != remaining.end(); ++it) {
        seq.merges.emplace_back(keep, *it);
        keep = std::min(keep, *it);
    }
    return seq;
}

}  // namespace twintour
