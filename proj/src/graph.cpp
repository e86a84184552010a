#include "twintour/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace twintour {

void Digraph::add_edge(int u, int v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop not allowed");
    auto& cell = adj_[static_cast<size_t>(u) * n_ + v];
    if (cell) throw std::invalid_argument("duplicate edge");
    cell = 1;
    out_[u].push_back(v);
    in_[v].push_back(u);
    ++m_;
}

Digraph Digraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Digraph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

std::vector<std::pair<int, int>> Digraph::edges() const {
    std::vector<std::pair<int, int>> result;
    result.reserve(m_);
    for (int u = 0; u < n_; ++u)
        for (int v : out_[u]) result.emplace_back(u, v);
    std::sort(result.begin(), result.end());
    return result;
}

Digraph Digraph::induced(const std::vector<int>& verts) const {
    std::vector<int> local(n_, -1);
    for (size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
    Digraph g(static_cast<int>(verts.size()));
    for (size_t i = 0; i < verts.size(); ++i)
        for (int w : out_[verts[i]])
            if (local[w] >= 0) g.add_edge(static_cast<int>(i), local[w]);
    return g;
}

Tournament::Tournament(Digraph g) : g_(std::move(g)) {
    for (int u = 0; u < g_.n(); ++u)
        for (int v = u + 1; v < g_.n(); ++v) {
            int count = (g_.has_edge(u, v) ? 1 : 0) + (g_.has_edge(v, u) ? 1 : 0);
            if (count != 1)
                throw std::invalid_argument("not a tournament: pair (" + std::to_string(u) +
                                            "," + std::to_string(v) + ") has " +
                                            std::to_string(count) + " edges");
        }
}

Tournament Tournament::induced(const std::vector<int>& verts) const {
    return Tournament(g_.induced(verts));
}

Tournament Tournament::relabeled(const std::vector<int>& perm) const {
    Digraph g(n());
    for (auto [u, v] : g_.edges()) g.add_edge(perm[u], perm[v]);
    return Tournament(g);
}

Partition::Partition(int n, std::vector<std::vector<int>> parts)
    : n_(n), parts_(std::move(parts)), part_of_(n, -1) {
    for (auto& part : parts_) {
        if (part.empty()) throw std::invalid_argument("empty part");
        std::sort(part.begin(), part.end());
    }
    std::sort(parts_.begin(), parts_.end());
    int idx = 0;
    for (const auto& part : parts_) {
        for (int v : part) {
            if (v < 0 || v >= n) throw std::invalid_argument("part member out of range");
            if (part_of_[v] != -1) throw std::invalid_argument("parts not disjoint");
            part_of_[v] = idx;
        }
        ++idx;
    }
    for (int v = 0; v < n; ++v)
        if (part_of_[v] == -1) throw std::invalid_argument("parts do not cover domain");
}

Partition Partition::discrete(int n) {
    std::vector<std::vector<int>> parts(n);
    for (int v = 0; v < n; ++v) parts[v] = {v};
    return Partition(n, std::move(parts));
}

Partition Partition::trivial(int n) {
    std::vector<int> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    return Partition(n, {all});
}

Partition Partition::from_part_ids(const std::vector<int>& part_of) {
    int n = static_cast<int>(part_of.size());
    std::vector<std::vector<int>> groups;
    std::vector<int> index;
    for (int v = 0; v < n; ++v) {
        int id = part_of[v];
        while (static_cast<int>(index.size()) <= id) index.push_back(-1);
        if (index[id] == -1) {
            index[id] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[index[id]].push_back(v);
    }
    return Partition(n, std::move(groups));
}

bool Partition::refines(const Partition& coarser) const {
    if (n_ != coarser.n_) return false;
    for (const auto& part : parts_) {
        int target = coarser.part_of(part[0]);
        for (int v : part)
            if (coarser.part_of(v) != target) return false;
    }
    return true;
}

RelStructure RelStructure::from_tournament(const Tournament& t) {
    RelStructure a(t.n());
    a.add_relation("E", t.digraph().edges());
    return a;
}

RelStructure RelStructure::from_digraph(const Digraph& g) {
    RelStructure a(g.n());
    a.add_relation("E", g.edges());
    return a;
}

void RelStructure::add_relation(const std::string& name,
                                const std::vector<std::pair<int, int>>& pairs) {
    rel_names_.push_back(name);
    rels_.emplace_back(static_cast<size_t>(n_) * n_, 0);
    auto& mat = rels_.back();
    for (auto [u, v] : pairs) {
        if (u < 0 || u >= n_ || v < 0 || v >= n_)
            throw std::invalid_argument("relation pair out of range");
        mat[static_cast<size_t>(u) * n_ + v] = 1;
    }
}

void RelStructure::ensure_red() {
    if (red_.empty()) red_.assign(static_cast<size_t>(n_) * n_, 0);
}

void RelStructure::add_red_edge(int u, int v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw std::invalid_argument("red edge out of range");
    if (u == v) throw std::invalid_argument("red loop not allowed");
    ensure_red();
    red_[static_cast<size_t>(u) * n_ + v] = 1;
    red_[static_cast<size_t>(v) * n_ + u] = 1;
}

std::vector<std::pair<int, int>> RelStructure::red_edges() const {
    std::vector<std::pair<int, int>> result;
    if (red_.empty()) return result;
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (red(u, v)) result.emplace_back(u, v);
    return result;
}

std::vector<std::pair<int, int>> RelStructure::relation_edges(int i) const {
    std::vector<std::pair<int, int>> result;
    for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v)
            if (rel(i, u, v)) result.emplace_back(u, v);
    return result;
}

RelStructure RelStructure::with_order(const std::vector<int>& position) const {
    if (static_cast<int>(position.size()) != n_)
        throw std::invalid_argument("order size mismatch");
    RelStructure a = *this;
    std::vector<std::pair<int, int>> lt;
    for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v)
            if (u != v && position[u] < position[v]) lt.emplace_back(u, v);
    a.add_relation("Lt", lt);
    return a;
}

RelStructure RelStructure::induced(const std::vector<int>& verts) const {
    RelStructure a(static_cast<int>(verts.size()));
    int m = a.n();
    for (size_t r = 0; r < rels_.size(); ++r) {
        a.rel_names_.push_back(rel_names_[r]);
        a.rels_.emplace_back(static_cast<size_t>(m) * m, 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (rel(static_cast<int>(r), verts[i], verts[j]))
                    a.rels_.back()[static_cast<size_t>(i) * m + j] = 1;
    }
    if (!red_.empty()) {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (red(verts[i], verts[j])) a.add_red_edge(i, j);
    }
    return a;
}

std::vector<int> mixed_neighbors(const Tournament& t, int v, int w) {
    if (v == w || v < 0 || w < 0 || v >= t.n() || w >= t.n())
        throw std::invalid_argument("mixed_neighbors: need two distinct vertices in range");
    std::vector<int> result;
    for (int u = 0; u < t.n(); ++u) {
        if (u == v || u == w) continue;
        bool uv = t.has_edge(u, v);  // u in N-(v)
        bool wu = t.has_edge(w, u);  // u in N+(w)
        bool vu = t.has_edge(v, u);
        bool uw = t.has_edge(u, w);
        if ((uv && wu) || (vu && uw)) result.push_back(u);
    }
    return result;
}

int mixed_degree_partition(const Tournament& t, const Partition& q, int v, int w) {
    if (!t.has_edge(v, w))
        throw std::invalid_argument("mixed_degree_partition: (v,w) must be an edge");
    int pv = q.part_of(v), pw = q.part_of(w);
    if (pv == pw)
        throw std::invalid_argument("mixed_degree_partition: edge is not cross-cluster");
    std::set<int> touched;
    for (int u : mixed_neighbors(t, v, w)) {
        int pu = q.part_of(u);
        if (pu != pv && pu != pw) touched.insert(pu);
    }
    return static_cast<int>(touched.size());
}

namespace {

// Iterative Tarjan SCC.
struct TarjanState {
    const Digraph& g;
    std::vector<int> index, low, comp;
    std::vector<int> stack;
    std::vector<uint8_t> on_stack;
    int counter = 0, comp_count = 0;

    explicit TarjanState(const Digraph& graph)
        : g(graph),
          index(graph.n(), -1),
          low(graph.n(), 0),
          comp(graph.n(), -1),
          on_stack(graph.n(), 0) {}

    void run(int root) {
        struct Frame {
            int v;
            size_t next_edge;
        };
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            auto& fr = frames.back();
            const auto& out = g.out_neighbors(fr.v);
            if (fr.next_edge < out.size()) {
                int w = out[fr.next_edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[fr.v] = std::min(low[fr.v], index[w]);
                }
            } else {
                int v = fr.v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = comp_count;
                        if (w == v) break;
                    }
                    ++comp_count;
                }
            }
        }
    }
};

}  // namespace

Partition scc(const Digraph& g) {
    TarjanState state(g);
    for (int v = 0; v < g.n(); ++v)
        if (state.index[v] == -1) state.run(v);
    return Partition::from_part_ids(state.comp);
}

Partition wcc(const Digraph& g) {
    std::vector<int> comp(g.n(), -1);
    int count = 0;
    std::vector<int> queue;
    for (int s = 0; s < g.n(); ++s) {
        if (comp[s] != -1) continue;
        comp[s] = count;
        queue.assign(1, s);
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int w : g.out_neighbors(v))
                if (comp[w] == -1) comp[w] = count, queue.push_back(w);
            for (int w : g.in_neighbors(v))
                if (comp[w] == -1) comp[w] = count, queue.push_back(w);
        }
        ++count;
    }
    return Partition::from_part_ids(comp);
}

bool homogeneous_pair(const RelStructure& a, const std::vector<int>& xs,
                      const std::vector<int>& ys) {
    int n = a.n();
    for (size_t r = 0; r < a.rels_.size(); ++r) {
        const auto& mat = a.rels_[r];
        bool fwd = mat[static_cast<size_t>(xs[0]) * n + ys[0]] != 0;
        bool bwd = mat[static_cast<size_t>(ys[0]) * n + xs[0]] != 0;
        for (int x : xs)
            for (int y : ys) {
                if ((mat[static_cast<size_t>(x) * n + y] != 0) != fwd) return false;
                if ((mat[static_cast<size_t>(y) * n + x] != 0) != bwd) return false;
            }
    }
    if (a.has_red()) {
        for (int x : xs)
            for (int y : ys)
                if (a.red(x, y)) return false;
    }
    return true;
}

RelStructure quotient(const RelStructure& a, const Partition& p) {
    if (p.n() != a.n()) throw std::invalid_argument("quotient: partition domain mismatch");
    int m = p.size();
    RelStructure q(m);
    for (int r = 0; r < a.relation_count(); ++r) {
        std::vector<std::pair<int, int>> pairs;
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y) {
                if (x == y) {
                    // Diagonal: relation holds iff it holds on all internal pairs
                    // (only meaningful for reflexive-style relations; parts are
                    // never related to themselves here because relations are
                    // anti-reflexive in this codebase).
                    continue;
                }
                if (!homogeneous_pair(a, p.part(x), p.part(y))) continue;
                bool all = true;
                for (int u : p.part(x)) {
                    for (int v : p.part(y))
                        if (!a.rel(r, u, v)) {
                            all = false;
                            break;
                        }
                    if (!all) break;
                }
                if (all) pairs.emplace_back(x, y);
            }
        q.add_relation(a.relation_name(r), pairs);
    }
    for (int x = 0; x < m; ++x)
        for (int y = x + 1; y < m; ++y)
            if (!homogeneous_pair(a, p.part(x), p.part(y))) q.add_red_edge(x, y);
    return q;
}

int red_degree(const RelStructure& a) {
    if (!a.has_red()) return 0;
    int best = 0;
    for (int u = 0; u < a.n(); ++u) {
        int deg = 0;
        for (int v = 0; v < a.n(); ++v)
            if (v != u && a.red(u, v)) ++deg;
        best = std::max(best, deg);
    }
    return best;
}

}  // namespace twintour
