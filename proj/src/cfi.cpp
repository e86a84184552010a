#include "twintour/cfi.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace twintour {

BaseGraph BaseGraph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
    BaseGraph g;
    g.n = n;
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw std::invalid_argument("base edge out of range");
        seen.emplace(u, v);
    }
    g.edges.assign(seen.begin(), seen.end());
    g.adj.assign(n, {});
    for (auto [u, v] : g.edges) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& list : g.adj) std::sort(list.begin(), list.end());
    return g;
}

bool BaseGraph::is_three_regular() const {
    for (const auto& list : adj)
        if (list.size() != 3) return false;
    return true;
}

bool BaseGraph::is_connected() const {
    if (n == 0) return false;
    std::vector<uint8_t> seen(n, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
    }
    for (uint8_t s : seen)
        if (!s) return false;
    return true;
}

int BaseGraph::edge_index_at(int v, int w) const {
    auto it = std::lower_bound(adj[v].begin(), adj[v].end(), w);
    if (it == adj[v].end() || *it != w)
        throw std::invalid_argument("edge_index_at: not a neighbor");
    return static_cast<int>(it - adj[v].begin());
}

BaseGraph k4_graph() {
    return BaseGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

BaseGraph toroidal_grid_graph(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("toroidal grid needs rows, cols >= 1");
    std::vector<std::pair<int, int>> edges;
    auto id = [cols](int i, int j) { return i * cols + j; };
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            edges.emplace_back(id(i, j), id(i, (j + 1) % cols));
            edges.emplace_back(id(i, j), id((i + 1) % rows, j));
        }
    return BaseGraph::from_edges(rows * cols, std::move(edges));
}

BaseGraph wall_graph(int k) {
    if (k < 2) throw std::invalid_argument("wall_graph: k must be at least 2");
    int side = 2 * k + 2;
    BaseGraph torus = toroidal_grid_graph(side, side);
    std::set<std::pair<int, int>> removed;
    auto id = [side](int i, int j) { return i * side + j; };
    auto norm = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    for (int j = 0; j <= k; ++j) {
        for (int i = 0; i < side; i += 2)  // even i
            removed.insert(norm(id(i, 2 * j), id((i + 1) % side, 2 * j)));
        for (int i = 1; i < side; i += 2)  // odd i
            removed.insert(norm(id(i, 2 * j + 1), id((i + 1) % side, 2 * j + 1)));
    }
    std::vector<std::pair<int, int>> kept;
    for (auto e : torus.edges)
        if (!removed.count(e)) kept.push_back(e);
    return BaseGraph::from_edges(torus.n, std::move(kept));
}

RelStructure red_structure(const BaseGraph& g) {
    RelStructure a(g.n);
    for (auto [u, v] : g.edges) a.add_red_edge(u, v);
    return a;
}

ContractionSequence grid_red_contraction(int rows, int cols) {
    ContractionSequence seq;
    seq.n = rows * cols;
    // Current virtual grid: part id of cell (i, j).
    std::vector<std::vector<int>> cell(rows, std::vector<int>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) cell[i][j] = i * cols + j;
    int cur_rows = rows;
    while (cur_rows > 1) {
        for (int j = 0; j < cols; ++j) {
            seq.merges.emplace_back(cell[0][j], cell[1][j]);
            cell[0][j] = std::min(cell[0][j], cell[1][j]);
        }
        cell.erase(cell.begin() + 1);
        --cur_rows;
    }
    // Remaining red cycle: sweep left to right.
    int blob = cell[0][0];
    for (int j = 1; j < cols; ++j) {
        seq.merges.emplace_back(blob, cell[0][j]);
        blob = std::min(blob, cell[0][j]);
    }
    return seq;
}

Tournament circular_tournament_graph(int m) {
    if (m < 1) throw std::invalid_argument("circular tournament needs m >= 1");
    int n = 2 * m + 1;
    Digraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 1; j <= m; ++j) g.add_edge(i, (i + j) % n);
    return Tournament(std::move(g));
}

ContractionSequence circular_contraction(int m) {
    if (m < 1) throw std::invalid_argument("circular contraction needs m >= 1");
    ContractionSequence seq;
    seq.n = 2 * m + 1;
    if (m == 1) {
        seq.merges = {{0, 1}, {0, 2}};
        return seq;
    }
    seq.merges.emplace_back(0, 1);
    seq.merges.emplace_back(m, m + 1);
    for (int j = 1; j <= m - 2; ++j) {
        seq.merges.emplace_back(0, 2 * m + 1 - j);
        seq.merges.emplace_back(m - j, m - j + 1);
    }
    seq.merges.emplace_back(0, 2);
    seq.merges.emplace_back(0, m + 2);
    return seq;
}

std::vector<std::array<int, 3>> gadget_functions(const BaseGraph& base, const Digraph& orientation,
                                                 int v, int a) {
    if (base.adj[v].size() != 3)
        throw std::invalid_argument("gadget_functions: base vertex is not 3-regular");
    std::array<int, 3> sign{};
    for (int i = 0; i < 3; ++i) {
        int w = base.adj[v][i];
        if (orientation.has_edge(v, w))
            sign[i] = 1;
        else if (orientation.has_edge(w, v))
            sign[i] = -1;
        else
            throw std::invalid_argument("gadget_functions: orientation misses a base edge");
    }
    std::vector<std::array<int, 3>> out;
    for (int x0 = 0; x0 < 3; ++x0)
        for (int x1 = 0; x1 < 3; ++x1)
            for (int x2 = 0; x2 < 3; ++x2) {
                int balance = sign[0] * x0 + sign[1] * x1 + sign[2] * x2;
                if (((balance % 3) + 3) % 3 == ((a % 3) + 3) % 3)
                    out.push_back({x0, x1, x2});
            }
    return out;
}

std::vector<std::pair<int, int>> gadget_orientation(const BaseGraph& base,
                                                    const std::vector<std::array<int, 3>>& funcs,
                                                    int v, const std::vector<int>& order_pos) {
    // Neighbors of v sorted by the linear order.
    std::vector<int> slots{0, 1, 2};
    std::sort(slots.begin(), slots.end(), [&](int x, int y) {
        return order_pos[base.adj[v][x]] < order_pos[base.adj[v][y]];
    });
    std::vector<std::pair<int, int>> edges;
    for (size_t i = 0; i < funcs.size(); ++i)
        for (size_t j = 0; j < funcs.size(); ++j) {
            if (i == j) continue;
            for (int s : slots) {
                if (funcs[i][s] == funcs[j][s]) continue;
                if ((funcs[i][s] + 1) % 3 == funcs[j][s])
                    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
                break;
            }
        }
    return edges;
}

int CfiGraph::function_index(int v, const std::array<int, 3>& f) const {
    const auto& list = functions[v];
    auto it = std::lower_bound(list.begin(), list.end(), f);
    if (it == list.end() || *it != f)
        throw std::logic_error("function_index: value outside the gadget");
    return static_cast<int>(it - list.begin());
}

CfiGraph build_cfi3(const BaseGraph& base, const Digraph& orientation,
                    const std::vector<int>& order_pos, const std::vector<int>& alpha) {
    if (!base.is_three_regular())
        throw std::invalid_argument("build_cfi3: base graph must be 3-regular");
    if (!base.is_connected()) throw std::invalid_argument("build_cfi3: base graph must be connected");
    if (static_cast<int>(order_pos.size()) != base.n ||
        static_cast<int>(alpha.size()) != base.n)
        throw std::invalid_argument("build_cfi3: order/alpha size mismatch");
    CfiGraph g;
    g.base = base;
    g.orientation = orientation;
    g.order_pos = order_pos;
    g.alpha = alpha;
    g.functions.resize(base.n);
    for (int v = 0; v < base.n; ++v) {
        g.functions[v] = gadget_functions(base, orientation, v, alpha[v]);
        if (g.functions[v].size() != 9)
            throw std::logic_error("build_cfi3: gadget does not have 9 functions");
        for (auto [i, j] : gadget_orientation(base, g.functions[v], v, order_pos))
            g.directed.emplace_back(9 * v + i, 9 * v + j);
    }
    for (auto [v, w] : base.edges) {
        int sv = base.edge_index_at(v, w);
        int sw = base.edge_index_at(w, v);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j)
                if (g.functions[v][i][sv] == g.functions[w][j][sw])
                    g.undirected.emplace_back(9 * v + i, 9 * w + j);
    }
    return g;
}

Tournament cfi_tournament(const CfiGraph& g) {
    int n = g.vertex_count();
    Digraph t(n);
    for (auto [x, y] : g.directed) t.add_edge(x, y);
    std::set<std::pair<int, int>> adjacent(g.undirected.begin(), g.undirected.end());
    auto cfi_adjacent = [&adjacent](int x, int y) {
        return adjacent.count({x, y}) || adjacent.count({y, x});
    };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int v = g.color(x), w = g.color(y);
            if (v == w) continue;
            if (g.order_pos[v] > g.order_pos[w]) continue;  // handle from the lower side
            if (cfi_adjacent(x, y))
                t.add_edge(y, x);
            else
                t.add_edge(x, y);
        }
    return Tournament(std::move(t));
}

TwistResult twist_iso(const BaseGraph& base, const Digraph& orientation,
                      const std::vector<int>& order_pos, const std::vector<int>& alpha,
                      const std::vector<int>& path) {
    if (path.size() < 2) throw std::invalid_argument("twist_iso: path needs >= 2 vertices");
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        int u = path[i], w = path[i + 1];
        bool adj = std::binary_search(base.adj[u].begin(), base.adj[u].end(), w);
        if (!adj) throw std::invalid_argument("twist_iso: path edge missing from base");
    }
    int from = path.front(), to = path.back();
    if (from == to) throw std::invalid_argument("twist_iso: path endpoints must differ");

    std::vector<int> beta = alpha;
    beta[from] = ((beta[from] + 1) % 3 + 3) % 3;
    beta[to] = ((beta[to] - 1) % 3 + 3) % 3;

    // Shift amounts h_u per incident edge slot.
    std::vector<std::array<int, 3>> shift(base.n, {0, 0, 0});
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        int u = path[i], w = path[i + 1];
        bool along = orientation.has_edge(u, w);  // base arc matches path direction
        // Tail of the path edge.
        shift[u][base.edge_index_at(u, w)] =
            ((shift[u][base.edge_index_at(u, w)] + (along ? 1 : 2)) % 3);
        // Head of the path edge.
        shift[w][base.edge_index_at(w, u)] =
            ((shift[w][base.edge_index_at(w, u)] + (along ? 1 : 2)) % 3);
    }

    CfiGraph ga = build_cfi3(base, orientation, order_pos, alpha);
    CfiGraph gb = build_cfi3(base, orientation, order_pos, beta);
    TwistResult result;
    result.beta = beta;
    result.vertex_map.assign(ga.vertex_count(), -1);
    for (int v = 0; v < base.n; ++v)
        for (int i = 0; i < 9; ++i) {
            std::array<int, 3> f = ga.functions[v][i];
            for (int s = 0; s < 3; ++s) f[s] = (f[s] + shift[v][s]) % 3;
            result.vertex_map[9 * v + i] = 9 * v + gb.function_index(v, f);
        }

    // The map must be an isomorphism of the two mixed graphs.
    auto edge_set = [](const std::vector<std::pair<int, int>>& edges, bool undirected) {
        std::set<std::pair<int, int>> out;
        for (auto [x, y] : edges) {
            out.emplace(x, y);
            if (undirected) out.emplace(y, x);
        }
        return out;
    };
    auto ua = edge_set(ga.undirected, true), ub = edge_set(gb.undirected, true);
    auto da = edge_set(ga.directed, false), db = edge_set(gb.directed, false);
    for (auto [x, y] : ua)
        if (!ub.count({result.vertex_map[x], result.vertex_map[y]}))
            throw std::logic_error("twist_iso: map does not preserve gadget adjacency");
    if (ua.size() != ub.size()) throw std::logic_error("twist_iso: adjacency count mismatch");
    for (auto [x, y] : da)
        if (!db.count({result.vertex_map[x], result.vertex_map[y]}))
            throw std::logic_error("twist_iso: map does not preserve gadget orientation");
    if (da.size() != db.size()) throw std::logic_error("twist_iso: orientation count mismatch");
    return result;
}

ContractionSequence cfi_contraction(const CfiGraph& g, const ContractionSequence& base_seq) {
    if (base_seq.n != g.base.n)
        throw std::invalid_argument("cfi_contraction: base sequence does not match the base");
    ContractionSequence seq;
    seq.n = g.vertex_count();
    for (int v = 0; v < g.base.n; ++v)
        for (int i = 1; i < 9; ++i) seq.merges.emplace_back(9 * v, 9 * v + i);
    for (auto [a, b] : base_seq.merges) seq.merges.emplace_back(9 * a, 9 * b);
    return seq;
}

CfiInstance cfi_instance(const BaseGraph& base, const ContractionSequence& base_red_seq,
                         int twist) {
    CfiInstance inst;
    RelStructure red = red_structure(base);
    inst.order = order_for_tww(red, base_red_seq);
    Digraph orientation(base.n);
    for (auto [u, v] : base.edges) orientation.add_edge(u, v);  // lexicographic
    std::vector<int> alpha(base.n, 0);
    alpha[0] = ((twist % 3) + 3) % 3;
    inst.graph = build_cfi3(base, orientation, inst.order.position, alpha);
    inst.tournament = cfi_tournament(inst.graph);
    inst.contraction = cfi_contraction(inst.graph, base_red_seq);
    return inst;
}

HardPair hard_pair(int k) {
    if (k < 2) throw std::invalid_argument("hard_pair: k must be at least 2");
    BaseGraph base = wall_graph(k);
    int side = 2 * k + 2;
    ContractionSequence base_seq = grid_red_contraction(side, side);
    return {cfi_instance(base, base_seq, 0), cfi_instance(base, base_seq, 1)};
}

}  // namespace twintour
