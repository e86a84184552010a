#include "twintour/isokit.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace twintour {

namespace {

std::vector<int> positions_of(const std::vector<int>& universe, const std::vector<int>& subset) {
    std::vector<int> pos;
    pos.reserve(subset.size());
    for (int v : subset) {
        auto it = std::lower_bound(universe.begin(), universe.end(), v);
        if (it == universe.end() || *it != v)
            throw std::logic_error("positions_of: element missing from universe");
        pos.push_back(static_cast<int>(it - universe.begin()));
    }
    return pos;
}

std::vector<int> sorted_union(const std::vector<std::vector<int>>& sets) {
    std::vector<int> out;
    for (const auto& s : sets) out.insert(out.end(), s.begin(), s.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PermGroup symmetric_group(int n) {
    std::vector<Perm> gens;
    if (n >= 2) {
        Perm swap01 = Perm::identity(n);
        std::swap(swap01.img[0], swap01.img[1]);
        gens.push_back(swap01);
        Perm cycle = Perm::identity(n);
        for (int i = 0; i < n; ++i) cycle.img[i] = (i + 1) % n;
        gens.push_back(cycle);
    }
    return PermGroup(n, gens);
}

// Arc coloring from the stable pair colors, on edges and loops only; the
// reverse-pair colors carry no extra information at the fixpoint.
ColoredDigraph stable_colored(const Tournament& t, const StableColoring& chi) {
    ColoredDigraph g(t.n());
    for (int u = 0; u < t.n(); ++u)
        for (int v = 0; v < t.n(); ++v)
            if (u == v || t.has_edge(u, v)) g.at(u, v) = chi.pair_color(u, v);
    return g;
}

}  // namespace

IsoSet small_iso(const ColoredDigraph& g1, const ColoredDigraph& g2) {
    if (g1.n != g2.n) return std::nullopt;
    if (g1.n == 0) return Coset{PermGroup(0), Perm::identity(0)};
    return transporter_graph(g1, g2, symmetric_group(g1.n), Perm::identity(g1.n));
}

IsoSet brute_force_iso(const Tournament& t1, const Tournament& t2) {
    if (t1.n() != t2.n()) return std::nullopt;
    auto joint = wl_refine_joint(2, ColoredDigraph::from_tournament(t1),
                                 ColoredDigraph::from_tournament(t2));
    if (joint.distinguished) return std::nullopt;
    return small_iso(stable_colored(t1, joint.first), stable_colored(t2, joint.second));
}

// ---- block isomorphisms (the local subroutine of the lifting step) ----

IsoSet block_isomorphisms(const BlockArgs& args) {
    const auto& parts_a = *args.parts_a;
    const auto& parts_b = *args.parts_b;
    const IsoTableFn& table = *args.table;

    if (args.sel_a.size() != args.sel_b.size()) return std::nullopt;
    std::vector<std::vector<int>> lists_a, lists_b;
    for (int p : args.sel_a) lists_a.push_back(parts_a[p]);
    for (int p : args.sel_b) lists_b.push_back(parts_b[p]);
    std::vector<int> ua = sorted_union(lists_a), ub = sorted_union(lists_b);
    if (ua.size() != ub.size()) return std::nullopt;

    // Single-part blocks: the table entry is the answer.
    if (args.sel_a.size() == 1)
        return table(args.side_a, args.sel_a[0], args.side_b, args.sel_b[0]);

    // Group the involved parts into isomorphism classes (table entries decide)
    // and fix one orbit per class representative, transported along table
    // representatives so that every isomorphism maps chosen orbits onto each
    // other.
    struct PartRef {
        int side, index;
        bool operator<(const PartRef& o) const {
            return std::tie(side, index) < std::tie(o.side, o.index);
        }
        bool operator==(const PartRef& o) const { return side == o.side && index == o.index; }
    };
    std::vector<PartRef> involved;
    for (int p : args.sel_a) involved.push_back({args.side_a, p});
    for (int p : args.sel_b) involved.push_back({args.side_b, p});
    std::sort(involved.begin(), involved.end());
    involved.erase(std::unique(involved.begin(), involved.end()), involved.end());

    std::map<PartRef, int> class_of;
    std::vector<PartRef> class_rep;
    for (const auto& ref : involved) {
        int found = -1;
        for (size_t c = 0; c < class_rep.size() && found < 0; ++c) {
            const IsoSet& e = table(class_rep[c].side, class_rep[c].index, ref.side, ref.index);
            if (e) found = static_cast<int>(c);
        }
        if (found < 0) {
            found = static_cast<int>(class_rep.size());
            class_rep.push_back(ref);
        }
        class_of[ref] = found;
    }

    // Chosen orbit per part, in part-local coordinates.
    std::map<PartRef, std::vector<int>> chosen_orbit;
    for (const auto& rep : class_rep) {
        const IsoSet& self = table(rep.side, rep.index, rep.side, rep.index);
        if (!self) throw std::logic_error("block_isomorphisms: missing diagonal table entry");
        int m = self->group.degree();
        std::vector<int> orbit_id = self->group.orbit_ids(0);
        std::map<int, std::vector<int>> orbits;
        for (int v = 0; v < m; ++v) orbits[orbit_id[v]].push_back(v);
        // Deterministic pick: smallest (size, members).
        std::vector<int> best;
        for (auto& [id, members] : orbits) {
            if (best.empty() || members.size() < best.size() ||
                (members.size() == best.size() && members < best))
                best = members;
        }
        if (best.size() % 2 == 0)
            throw std::logic_error("block_isomorphisms: chosen orbit has even size");
        chosen_orbit[rep] = best;
    }
    for (const auto& ref : involved) {
        const auto& rep = class_rep[class_of[ref]];
        if (ref == rep) continue;
        const IsoSet& e = table(rep.side, rep.index, ref.side, ref.index);
        std::vector<int> image;
        for (int v : chosen_orbit[rep]) image.push_back(e->rep(v));
        std::sort(image.begin(), image.end());
        chosen_orbit[ref] = image;
    }

    // Majority-edge quotient tournaments, vertex-colored by part class.
    auto quotient_graph = [&](const ColoredDigraph& g, const std::vector<int>& sel, int side,
                              const std::vector<std::vector<int>>& parts) {
        int m = static_cast<int>(sel.size());
        ColoredDigraph q(m);
        for (int i = 0; i < m; ++i) q.at(i, i) = class_of[{side, sel[i]}];
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j) continue;
                const auto& oi = chosen_orbit[{side, sel[i]}];
                const auto& oj = chosen_orbit[{side, sel[j]}];
                int fwd = 0, bwd = 0;
                for (int x : oi)
                    for (int y : oj) {
                        int xv = parts[sel[i]][x], yv = parts[sel[j]][y];
                        int arc = g.at(xv, yv);
                        int rev = g.at(yv, xv);
                        if (arc >= 0 && rev < 0) ++fwd;
                        if (rev >= 0 && arc < 0) ++bwd;
                    }
                if (fwd == bwd)
                    throw std::logic_error("block_isomorphisms: tie between odd orbits");
                if (fwd > bwd && i < j) q.at(i, j) = 1;
                if (bwd > fwd && i < j) q.at(j, i) = 1;
            }
        return q;
    };
    ColoredDigraph qa = quotient_graph(*args.graph_a, args.sel_a, args.side_a, parts_a);
    ColoredDigraph qb = quotient_graph(*args.graph_b, args.sel_b, args.side_b, parts_b);
    IsoSet tilde = small_iso(qa, qb);
    if (!tilde) return std::nullopt;

    // Wreath coset on the block union.
    int m = static_cast<int>(args.sel_a.size());
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < m; ++i) blocks.push_back(positions_of(ua, parts_a[args.sel_a[i]]));
    std::vector<std::vector<IsoSet>> wreath_table(m, std::vector<IsoSet>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            wreath_table[i][j] = table(args.side_a, args.sel_a[i], args.side_a, args.sel_a[j]);
    std::vector<Perm> gens =
        wreath_generators(static_cast<int>(ua.size()), blocks, wreath_table, tilde->group);

    Perm theta = Perm::identity(static_cast<int>(ua.size()));
    for (int i = 0; i < m; ++i) {
        int j = tilde->rep(i);
        const IsoSet& phi = table(args.side_a, args.sel_a[i], args.side_b, args.sel_b[j]);
        if (!phi) throw std::logic_error("block_isomorphisms: rep maps to non-isomorphic part");
        auto to_b = positions_of(ub, parts_b[args.sel_b[j]]);
        for (size_t k = 0; k < blocks[i].size(); ++k)
            theta.img[blocks[i][k]] = to_b[phi->rep(static_cast<int>(k))];
    }
    return transporter_graph(args.graph_a->induced(ua), args.graph_b->induced(ub),
                             PermGroup(static_cast<int>(ua.size()), gens), theta);
}

// ---- the lifting subroutine ----

namespace {

struct LiftContext {
    const LiftArgs& args;
    std::vector<std::vector<int>> parts1, parts2;  // vertex lists per part
    // Cache of block results keyed by ((side, parts), (side, parts)).
    std::map<std::pair<std::vector<int>, std::vector<int>>, IsoSet> block_cache;

    explicit LiftContext(const LiftArgs& a) : args(a) {
        parts1 = a.q1.parts();
        parts2 = a.q2.parts();
    }

    const ColoredDigraph& graph(int side) const { return side == 0 ? *args.g1 : *args.g2; }
    const std::vector<std::vector<int>>& parts(int side) const {
        return side == 0 ? parts1 : parts2;
    }

    IsoSet block_iso(int side_u, const std::vector<int>& sel_u, int side_v,
                     const std::vector<int>& sel_v) {
        std::vector<int> key1{side_u};
        key1.insert(key1.end(), sel_u.begin(), sel_u.end());
        std::vector<int> key2{side_v};
        key2.insert(key2.end(), sel_v.begin(), sel_v.end());
        auto key = std::make_pair(std::move(key1), std::move(key2));
        auto it = block_cache.find(key);
        if (it != block_cache.end()) return it->second;
        BlockArgs b;
        b.graph_a = &graph(side_u);
        b.graph_b = &graph(side_v);
        b.parts_a = &parts(side_u);
        b.parts_b = &parts(side_v);
        b.sel_a = sel_u;
        b.sel_b = sel_v;
        b.side_a = side_u;
        b.side_b = side_v;
        b.table = &args.table;
        IsoSet result = block_isomorphisms(b);
        block_cache.emplace(std::move(key), result);
        return result;
    }
};

void validate_lift_side(const LiftArgs& args, int side) {
    const ColoredDigraph& g = side == 0 ? *args.g1 : *args.g2;
    const Partition& q = side == 0 ? args.q1 : args.q2;
    std::string who = "lift side " + std::to_string(side + 1);
    if (q.n() != g.n) throw ValidationException({who, "partition domain mismatch"});
    for (int v = 0; v < g.n; ++v)
        for (int w = 0; w < g.n; ++w) {
            if (v != w && g.at(v, w) < 0) continue;  // not an edge or loop
            bool same = q.part_of(v) == q.part_of(w);
            bool intra = args.intra_colors.count(g.at(v, w)) > 0;
            if (same != intra)
                throw ValidationException(
                    {who, "partition is not lambda-defined by the color set at pair (" +
                              std::to_string(v) + "," + std::to_string(w) + ")"});
        }
    // Cross color, fan bound, and strong connectivity of the part quotient.
    int parts_count = q.size();
    Digraph part_graph(parts_count);
    std::vector<std::set<int>> fan(g.n);
    for (int v = 0; v < g.n; ++v)
        for (int w = 0; w < g.n; ++w) {
            if (v == w || g.at(v, w) != args.cstar) continue;
            int pv = q.part_of(v), pw = q.part_of(w);
            if (pv == pw)
                throw ValidationException({who, "cross color appears inside a part"});
            fan[v].insert(pw);
            if (!part_graph.has_edge(pv, pw)) part_graph.add_edge(pv, pw);
        }
    for (int v = 0; v < g.n; ++v)
        if (static_cast<int>(fan[v].size()) > args.d)
            throw ValidationException({who, "vertex " + std::to_string(v) +
                                                " exceeds the out-fan bound"});
    if (parts_count > 1 && scc(part_graph).size() != 1)
        throw ValidationException({who, "part quotient digraph is not strongly connected"});
}

// One anchored front-growing run: all isomorphisms g_a -> g_b inside the part
// structure that map r1 to r2. Coordinates inside the run are positions in the
// sorted front vertex lists.
IsoSet anchored_lift(LiftContext& ctx, int side_a, int side_b, int r1, int r2) {
    const ColoredDigraph& ga = ctx.graph(side_a);
    const ColoredDigraph& gb = ctx.graph(side_b);
    const Partition& qa = side_a == 0 ? ctx.args.q1 : ctx.args.q2;
    const Partition& qb = side_b == 0 ? ctx.args.q1 : ctx.args.q2;
    int cstar = ctx.args.cstar;

    int ra = qa.part_of(r1), rb = qb.part_of(r2);
    std::vector<int> wa = ctx.parts(side_a)[ra], wb = ctx.parts(side_b)[rb];
    std::set<int> wa_parts{ra}, wb_parts{rb};
    if (wa.size() != wb.size()) return std::nullopt;

    const IsoSet& base = ctx.args.table(side_a, ra, side_b, rb);
    if (!base) return std::nullopt;
    int pos_r1 = positions_of(wa, {r1})[0];
    int pos_r2 = positions_of(wb, {r2})[0];
    IsoSet cur = transporter_graph(ga.induced(wa), gb.induced(wb), base->group, base->rep,
                                   {{pos_r1, pos_r2}});
    if (!cur) return std::nullopt;

    while (static_cast<int>(wa.size()) < ga.n) {
        if (static_cast<int>(wb.size()) >= gb.n) return std::nullopt;
        // Frontier vertices with a cross edge of color cstar leaving the front.
        auto frontier = [cstar](const ColoredDigraph& g, const std::vector<int>& w_verts,
                                const Partition& q, const std::set<int>& w_parts) {
            std::vector<std::pair<int, std::vector<int>>> out;  // (u, sorted part list)
            std::vector<uint8_t> in_w(g.n, 0);
            for (int v : w_verts) in_w[v] = 1;
            for (int u : w_verts) {
                std::set<int> parts;
                for (int w = 0; w < g.n; ++w)
                    if (!in_w[w] && g.at(u, w) == cstar) {
                        if (w_parts.count(q.part_of(w)))
                            throw std::logic_error("anchored_lift: front is not part-closed");
                        parts.insert(q.part_of(w));
                    }
                if (!parts.empty()) out.emplace_back(u, std::vector<int>(parts.begin(), parts.end()));
            }
            return out;
        };
        auto u_a = frontier(ga, wa, qa, wa_parts);
        auto u_b = frontier(gb, wb, qb, wb_parts);
        if (u_a.empty() || u_b.empty()) return std::nullopt;

        // Equivalence classes of frontier vertices by block isomorphism.
        struct Member {
            int side_slot;  // 0 = side_a, 1 = side_b
            int u;
            const std::vector<int>* sel;
        };
        std::vector<Member> members;
        for (auto& [u, sel] : u_a) members.push_back({0, u, &sel});
        for (auto& [u, sel] : u_b) members.push_back({1, u, &sel});
        std::vector<int> class_id(members.size(), -1);
        std::vector<size_t> class_reps;
        for (size_t i = 0; i < members.size(); ++i) {
            for (size_t c = 0; c < class_reps.size() && class_id[i] < 0; ++c) {
                const Member& rep = members[class_reps[c]];
                int rep_side = rep.side_slot == 0 ? side_a : side_b;
                int mem_side = members[i].side_slot == 0 ? side_a : side_b;
                if (ctx.block_iso(rep_side, *rep.sel, mem_side, *members[i].sel))
                    class_id[i] = static_cast<int>(c);
            }
            if (class_id[i] < 0) {
                class_id[i] = static_cast<int>(class_reps.size());
                class_reps.push_back(i);
            }
        }
        int num_classes = static_cast<int>(class_reps.size());
        // Every class must be balanced between the two sides.
        std::vector<std::array<int, 2>> balance(num_classes, {0, 0});
        for (size_t i = 0; i < members.size(); ++i)
            balance[class_id[i]][members[i].side_slot]++;
        for (const auto& b : balance)
            if (b[0] != b[1]) return std::nullopt;

        // Deterministic class choice: smallest (part size multiset, least
        // diagonal color, least vertex).
        auto class_key = [&](int c) {
            std::vector<std::vector<int>> size_lists;
            int least_color = INT32_MAX, least_vertex = INT32_MAX;
            for (size_t i = 0; i < members.size(); ++i) {
                if (class_id[i] != c) continue;
                const Member& mem = members[i];
                const auto& parts = mem.side_slot == 0 ? ctx.parts(side_a) : ctx.parts(side_b);
                std::vector<int> sizes;
                for (int p : *mem.sel) sizes.push_back(static_cast<int>(parts[p].size()));
                std::sort(sizes.begin(), sizes.end());
                size_lists.push_back(std::move(sizes));
                const ColoredDigraph& g = mem.side_slot == 0 ? ga : gb;
                least_color = std::min(least_color, g.at(mem.u, mem.u));
                least_vertex = std::min(least_vertex, mem.u);
            }
            std::sort(size_lists.begin(), size_lists.end());
            return std::make_tuple(size_lists, least_color, least_vertex);
        };
        int star = 0;
        for (int c = 1; c < num_classes; ++c)
            if (class_key(c) < class_key(star)) star = c;

        std::vector<int> star_a, star_b;  // frontier vertex ids per side
        std::set<int> la_parts, lb_parts;
        std::map<int, std::vector<int>> sel_of_a, sel_of_b;
        for (size_t i = 0; i < members.size(); ++i) {
            if (class_id[i] != star) continue;
            if (members[i].side_slot == 0) {
                star_a.push_back(members[i].u);
                sel_of_a[members[i].u] = *members[i].sel;
                la_parts.insert(members[i].sel->begin(), members[i].sel->end());
            } else {
                star_b.push_back(members[i].u);
                sel_of_b[members[i].u] = *members[i].sel;
                lb_parts.insert(members[i].sel->begin(), members[i].sel->end());
            }
        }
        std::sort(star_a.begin(), star_a.end());
        std::sort(star_b.begin(), star_b.end());

        // Restrict the current coset to maps sending the chosen frontier class
        // onto its mirror (single-hyperedge transporter).
        Hypergraph h1{static_cast<int>(wa.size()), {positions_of(wa, star_a)}};
        Hypergraph h2{static_cast<int>(wb.size()), {positions_of(wb, star_b)}};
        IsoSet restricted = transporter_hypergraph(h1, h2, cur->group, cur->rep);
        if (!restricted) return std::nullopt;

        // New layer: union of the class's part selections.
        std::vector<std::vector<int>> la_lists, lb_lists;
        for (int p : la_parts) la_lists.push_back(ctx.parts(side_a)[p]);
        for (int p : lb_parts) lb_lists.push_back(ctx.parts(side_b)[p]);
        std::vector<int> la = sorted_union(la_lists), lb = sorted_union(lb_lists);
        if (la.size() != lb.size() || la_parts.size() != lb_parts.size()) return std::nullopt;
        if (la.empty()) throw std::logic_error("anchored_lift: empty extension layer");

        // Pair domain (u, w) for u in the class, w in its block.
        struct PairDomain {
            std::vector<std::pair<int, int>> pairs;  // sorted (u, w)
            std::map<std::pair<int, int>, int> index;
            std::vector<int> first_of_w;  // position into pairs per L position
        };
        auto build_pairs = [&](const std::vector<int>& stars,
                               const std::map<int, std::vector<int>>& sel_of,
                               const std::vector<std::vector<int>>& side_parts,
                               const std::vector<int>& l_verts) {
            PairDomain dom;
            for (int u : stars) {
                std::vector<std::vector<int>> lists;
                for (int p : sel_of.at(u)) lists.push_back(side_parts[p]);
                for (int w : sorted_union(lists)) dom.pairs.emplace_back(u, w);
            }
            std::sort(dom.pairs.begin(), dom.pairs.end());
            for (size_t i = 0; i < dom.pairs.size(); ++i) dom.index[dom.pairs[i]] = static_cast<int>(i);
            dom.first_of_w.assign(l_verts.size(), -1);
            for (size_t i = 0; i < dom.pairs.size(); ++i) {
                int wpos = positions_of(l_verts, {dom.pairs[i].second})[0];
                if (dom.first_of_w[wpos] < 0) dom.first_of_w[wpos] = static_cast<int>(i);
            }
            return dom;
        };
        PairDomain dom_a = build_pairs(star_a, sel_of_a, ctx.parts(side_a), la);
        PairDomain dom_b = build_pairs(star_b, sel_of_b, ctx.parts(side_b), lb);
        if (dom_a.pairs.size() != dom_b.pairs.size()) return std::nullopt;
        int num_pairs = static_cast<int>(dom_a.pairs.size());

        // Group on the pair domain: block automorphisms per frontier vertex
        // plus the restricted coset's action on the class.
        auto block_verts = [&](int side, const std::vector<int>& sel) {
            std::vector<std::vector<int>> lists;
            for (int p : sel) lists.push_back(ctx.parts(side)[p]);
            return sorted_union(lists);
        };
        std::vector<Perm> delta_gens;
        for (int u : star_a) {
            IsoSet self = ctx.block_iso(side_a, sel_of_a[u], side_a, sel_of_a[u]);
            if (!self) throw std::logic_error("anchored_lift: missing block automorphisms");
            auto verts = block_verts(side_a, sel_of_a[u]);
            for (const auto& g : self->group.generators()) {
                Perm lifted = Perm::identity(num_pairs);
                for (size_t k = 0; k < verts.size(); ++k) {
                    int from = dom_a.index.at({u, verts[k]});
                    int to = dom_a.index.at({u, verts[g(static_cast<int>(k))]});
                    lifted.img[from] = to;
                }
                delta_gens.push_back(std::move(lifted));
            }
        }
        for (const auto& g : restricted->group.generators()) {
            Perm lifted = Perm::identity(num_pairs);
            for (int u : star_a) {
                int u2 = wa[g(positions_of(wa, {u})[0])];
                IsoSet phi = ctx.block_iso(side_a, sel_of_a[u], side_a, sel_of_a.at(u2));
                if (!phi) throw std::logic_error("anchored_lift: class member blocks not isomorphic");
                auto verts_u = block_verts(side_a, sel_of_a[u]);
                auto verts_u2 = block_verts(side_a, sel_of_a[u2]);
                for (size_t k = 0; k < verts_u.size(); ++k) {
                    int from = dom_a.index.at({u, verts_u[k]});
                    int to = dom_a.index.at({u2, verts_u2[phi->rep(static_cast<int>(k))]});
                    lifted.img[from] = to;
                }
            }
            delta_gens.push_back(std::move(lifted));
        }
        Perm delta_rep = Perm::identity(num_pairs);
        for (int u : star_a) {
            int u2 = wb[restricted->rep(positions_of(wa, {u})[0])];
            IsoSet phi = ctx.block_iso(side_a, sel_of_a[u], side_b, sel_of_b.at(u2));
            if (!phi) throw std::logic_error("anchored_lift: rep maps to non-isomorphic block");
            auto verts_u = block_verts(side_a, sel_of_a[u]);
            auto verts_u2 = block_verts(side_b, sel_of_b[u2]);
            for (size_t k = 0; k < verts_u.size(); ++k) {
                int from = dom_a.index.at({u, verts_u[k]});
                int to = dom_b.index.at({u2, verts_u2[phi->rep(static_cast<int>(k))]});
                delta_rep.img[from] = to;
            }
        }
        if (!is_bijection(delta_rep.img, num_pairs)) return std::nullopt;

        // Fiber hypergraphs over the new layer.
        auto fibers = [&](const PairDomain& dom, const std::vector<int>& l_verts) {
            Hypergraph h;
            h.n = static_cast<int>(dom.pairs.size());
            std::map<int, std::vector<int>> by_w;
            for (size_t i = 0; i < dom.pairs.size(); ++i)
                by_w[dom.pairs[i].second].push_back(static_cast<int>(i));
            for (int w : l_verts) h.edges.push_back(by_w.at(w));
            return h;
        };
        Hypergraph fib_a = fibers(dom_a, la), fib_b = fibers(dom_b, lb);
        IsoSet fiber_iso = transporter_hypergraph(fib_a, fib_b,
                                                  PermGroup(num_pairs, delta_gens), delta_rep);
        if (!fiber_iso) return std::nullopt;

        // Induced action on the layer itself.
        auto layer_action = [&](const Perm& on_pairs, const PairDomain& dom_from,
                                const PairDomain& dom_to, const std::vector<int>& l_from,
                                const std::vector<int>& l_to) {
            Perm act = Perm::identity(static_cast<int>(l_from.size()));
            for (size_t wpos = 0; wpos < l_from.size(); ++wpos) {
                int pair_idx = dom_from.first_of_w[wpos];
                int image_pair = on_pairs(pair_idx);
                int w2 = dom_to.pairs[image_pair].second;
                act.img[wpos] = positions_of(l_to, {w2})[0];
            }
            return act;
        };
        std::vector<Perm> layer_gens;
        for (const auto& g : fiber_iso->group.generators())
            layer_gens.push_back(layer_action(g, dom_a, dom_a, la, la));
        Perm layer_rep = layer_action(fiber_iso->rep, dom_a, dom_b, la, lb);
        if (!is_bijection(layer_rep.img, static_cast<int>(la.size()))) return std::nullopt;

        // Extend the front and recombine on the union.
        std::vector<int> wa2 = sorted_union({wa, la});
        std::vector<int> wb2 = sorted_union({wb, lb});
        if (wa2.size() != wa.size() + la.size())
            throw std::logic_error("anchored_lift: layer overlaps the front");
        auto embed = [](const Perm& local, const std::vector<int>& verts,
                        const std::vector<int>& universe) {
            Perm out = Perm::identity(static_cast<int>(universe.size()));
            auto pos = positions_of(universe, verts);
            for (size_t k = 0; k < verts.size(); ++k) out.img[pos[k]] = pos[local(static_cast<int>(k))];
            return out;
        };
        std::vector<Perm> combined_gens;
        for (const auto& g : restricted->group.generators())
            combined_gens.push_back(embed(g, wa, wa2));
        for (const auto& g : layer_gens) combined_gens.push_back(embed(g, la, wa2));
        Perm combined_rep = Perm::identity(static_cast<int>(wa2.size()));
        {
            auto pos_wa = positions_of(wa2, wa);
            auto pos_wb = positions_of(wb2, wb);
            for (size_t k = 0; k < wa.size(); ++k)
                combined_rep.img[pos_wa[k]] = pos_wb[restricted->rep(static_cast<int>(k))];
            auto pos_la = positions_of(wa2, la);
            auto pos_lb = positions_of(wb2, lb);
            for (size_t k = 0; k < la.size(); ++k)
                combined_rep.img[pos_la[k]] = pos_lb[layer_rep(static_cast<int>(k))];
        }
        cur = transporter_graph(ga.induced(wa2), gb.induced(wb2),
                                PermGroup(static_cast<int>(wa2.size()), combined_gens),
                                combined_rep);
        if (!cur) return std::nullopt;
        wa = std::move(wa2);
        wb = std::move(wb2);
        for (int p : la_parts) wa_parts.insert(p);
        for (int p : lb_parts) wb_parts.insert(p);
    }
    if (static_cast<int>(wb.size()) != gb.n) return std::nullopt;
    return cur;
}

}  // namespace

IsoSet lift_isomorphisms(const LiftArgs& args) {
    if (args.d < 1) throw std::invalid_argument("lift_isomorphisms: d must be at least 1");
    validate_lift_side(args, 0);
    validate_lift_side(args, 1);
    int n1 = args.g1->n, n2 = args.g2->n;
    LiftContext ctx(args);

    // Assemble Aut(g1) from the anchored sets over all targets of the anchor.
    int r1 = 0;
    std::vector<Perm> aut_gens;
    for (int r2 = 0; r2 < n1; ++r2) {
        if (args.g1->at(r2, r2) != args.g1->at(r1, r1)) continue;
        IsoSet anchored = anchored_lift(ctx, 0, 0, r1, r2);
        if (!anchored) continue;
        for (const auto& g : anchored->group.generators()) aut_gens.push_back(g);
        aut_gens.push_back(anchored->rep);
    }
    PermGroup aut(n1, aut_gens);

    if (args.g1 == args.g2) return Coset{aut, Perm::identity(n1)};
    if (n1 != n2) return std::nullopt;
    for (int r2 = 0; r2 < n2; ++r2) {
        if (args.g2->at(r2, r2) != args.g1->at(r1, r1)) continue;
        IsoSet anchored = anchored_lift(ctx, 0, 1, r1, r2);
        if (anchored) return Coset{aut, anchored->rep};
    }
    return std::nullopt;
}

// ---- homogeneous case and the full test ----

IsoResult iso_homogeneous(const Tournament& t1, const Tournament& t2, int p) {
    if (p < 0) throw std::invalid_argument("iso_homogeneous: p must be nonnegative");
    auto joint = wl_refine_joint(2, ColoredDigraph::from_tournament(t1),
                                 ColoredDigraph::from_tournament(t2));
    if (!joint.first.all_diag_equal() || !joint.second.all_diag_equal())
        throw std::invalid_argument("iso_homogeneous: input is not 2-WL-homogeneous");
    if (t1.n() != t2.n() || joint.distinguished) return IsoSet{std::nullopt};

    auto seq_result = partition_sequence(t1, p, &joint.first);
    if (std::holds_alternative<TwinWidthExceeded>(seq_result))
        return std::get<TwinWidthExceeded>(seq_result);
    const PartitionSequence& seq = std::get<PartitionSequence>(seq_result);
    int levels = static_cast<int>(seq.levels.size());

    ColoredDigraph g1 = stable_colored(t1, joint.first);
    ColoredDigraph g2 = stable_colored(t2, joint.second);

    // Mirror the partition chain on the second tournament by color.
    std::vector<Partition> chain1 = seq.levels, chain2;
    {
        std::set<int> prefix;
        chain2.push_back(Partition::discrete(t2.n()));
        for (int i = 0; i + 1 < levels; ++i) {
            prefix.insert(seq.colors[i]);
            chain2.push_back(scc(color_subgraph(t2.digraph(), joint.second, prefix)));
        }
    }

    // Level 0 table: singleton parts, isomorphic iff equal vertex colors.
    using Key = std::array<int, 4>;
    std::map<Key, IsoSet> table;
    auto table_set = [&table](int sa, int pa, int sb, int pb, const IsoSet& iso) {
        table[{sa, pa, sb, pb}] = iso;
        table[{sb, pb, sa, pa}] = invert_iso(iso);
    };
    const ColoredDigraph* graphs[2] = {&g1, &g2};
    const std::vector<Partition>* chains[2] = {&chain1, &chain2};
    for (int sa = 0; sa < 2; ++sa)
        for (int sb = sa; sb < 2; ++sb) {
            const Partition& qa = (*chains[sa])[0];
            const Partition& qb = (*chains[sb])[0];
            for (int a = 0; a < qa.size(); ++a)
                for (int b = (sa == sb ? a : 0); b < qb.size(); ++b) {
                    int va = qa.part(a)[0], vb = qb.part(b)[0];
                    IsoSet iso;
                    if (graphs[sa]->at(va, va) == graphs[sb]->at(vb, vb))
                        iso = Coset{PermGroup(1), Perm::identity(1)};
                    table_set(sa, a, sb, b, iso);
                }
        }

    for (int level = 1; level < levels; ++level) {
        std::map<Key, IsoSet> next;
        auto next_set = [&next](int sa, int pa, int sb, int pb, const IsoSet& iso) {
            next[{sa, pa, sb, pb}] = iso;
            next[{sb, pb, sa, pa}] = invert_iso(iso);
        };
        int cstar = seq.colors[level - 1];
        std::set<int> intra;
        for (int s = 0; s < 2; ++s) {
            const ColoredDigraph& g = *graphs[s];
            const Partition& prev = (*chains[s])[level - 1];
            for (int v = 0; v < g.n; ++v) intra.insert(g.at(v, v));
            for (int v = 0; v < g.n; ++v)
                for (int w = 0; w < g.n; ++w)
                    if (v != w && g.at(v, w) >= 0 && prev.part_of(v) == prev.part_of(w))
                        intra.insert(g.at(v, w));
        }

        // Per enclosing part: induced graph, restricted sub-partition, and the
        // map from local sub-part indices to previous-level part indices.
        struct View {
            std::vector<int> verts;
            ColoredDigraph graph;
            Partition sub;
            std::vector<int> sub_to_prev;
        };
        std::vector<std::vector<View>> views(2);
        for (int s = 0; s < 2; ++s) {
            const Partition& cur = (*chains[s])[level];
            const Partition& prev = (*chains[s])[level - 1];
            for (int p2 = 0; p2 < cur.size(); ++p2) {
                View view;
                view.verts = cur.part(p2);
                view.graph = graphs[s]->induced(view.verts);
                std::vector<int> local_part(view.verts.size());
                std::map<int, int> prev_to_local;
                std::vector<int> rev;
                for (size_t i = 0; i < view.verts.size(); ++i) {
                    int prev_part = prev.part_of(view.verts[i]);
                    auto [it, fresh] = prev_to_local.emplace(prev_part,
                                                             static_cast<int>(rev.size()));
                    if (fresh) rev.push_back(prev_part);
                    local_part[i] = it->second;
                }
                view.sub = Partition::from_part_ids(local_part);
                // Partition sorts parts; recover the map local index -> prev part.
                view.sub_to_prev.assign(view.sub.size(), -1);
                for (int lp = 0; lp < view.sub.size(); ++lp) {
                    int member = view.verts[view.sub.part(lp)[0]];
                    view.sub_to_prev[lp] = prev.part_of(member);
                }
                views[s].push_back(std::move(view));
            }
        }

        for (int sa = 0; sa < 2; ++sa)
            for (int sb = sa; sb < 2; ++sb)
                for (int a = 0; a < static_cast<int>(views[sa].size()); ++a)
                    for (int b = (sa == sb ? a : 0); b < static_cast<int>(views[sb].size()); ++b) {
                        const View& va = views[sa][a];
                        const View& vb = views[sb][b];
                        // Parts that pass through unchanged copy their entry.
                        if (va.sub.size() == 1 && vb.sub.size() == 1) {
                            next_set(sa, a, sb, b,
                                     table.at({sa, va.sub_to_prev[0], sb, vb.sub_to_prev[0]}));
                            continue;
                        }
                        if (va.verts.size() != vb.verts.size() ||
                            va.sub.size() != vb.sub.size()) {
                            next_set(sa, a, sb, b, std::nullopt);
                            continue;
                        }
                        LiftArgs lift;
                        lift.d = 2 * p + 1;
                        lift.g1 = &va.graph;
                        lift.g2 = &vb.graph;
                        lift.q1 = va.sub;
                        lift.q2 = vb.sub;
                        lift.intra_colors = intra;
                        lift.cstar = cstar;
                        lift.table = [&table, &va, &vb, sa, sb](int side, int pa, int side2,
                                                                int pb) -> const IsoSet& {
                            int gs = side == 0 ? sa : sb;
                            int gp = side == 0 ? va.sub_to_prev[pa] : vb.sub_to_prev[pa];
                            int hs = side2 == 0 ? sa : sb;
                            int hp = side2 == 0 ? va.sub_to_prev[pb] : vb.sub_to_prev[pb];
                            return table.at({gs, gp, hs, hp});
                        };
                        next_set(sa, a, sb, b, lift_isomorphisms(lift));
                    }
        table = std::move(next);
    }
    return table.at({0, 0, 1, 0});
}

IsoResult tournament_iso(const Tournament& t1, const Tournament& t2, int p) {
    if (p < 1) throw std::invalid_argument("tournament_iso: p must be at least 1");
    if (t1.n() != t2.n()) return IsoSet{std::nullopt};
    if (t1.n() <= 2) return brute_force_iso(t1, t2);
    auto joint = wl_refine_joint(2, ColoredDigraph::from_tournament(t1),
                                 ColoredDigraph::from_tournament(t2));
    if (joint.distinguished) return IsoSet{std::nullopt};
    if (joint.first.all_diag_equal()) return iso_homogeneous(t1, t2, p);

    // Vertex color classes; recurse per class, glue, and finish with one
    // transporter over the product coset.
    std::map<int, std::vector<int>> classes1, classes2;
    for (int v = 0; v < t1.n(); ++v) classes1[joint.first.diag_color(v)].push_back(v);
    for (int v = 0; v < t2.n(); ++v) classes2[joint.second.diag_color(v)].push_back(v);
    if (classes1.size() != classes2.size()) return IsoSet{std::nullopt};
    std::vector<DirectFactor> factors;
    for (auto& [color, verts1] : classes1) {
        auto it = classes2.find(color);
        if (it == classes2.end() || it->second.size() != verts1.size())
            return IsoSet{std::nullopt};
        IsoResult sub = tournament_iso(t1.induced(verts1), t2.induced(it->second), p);
        if (exceeded(sub)) return sub;
        if (!iso_of(sub)) return IsoSet{std::nullopt};
        factors.push_back({verts1, it->second, iso_of(sub)});
    }
    Coset glued = direct_product(t1.n(), factors);
    return transporter_graph(stable_colored(t1, joint.first), stable_colored(t2, joint.second),
                             glued.group, glued.rep);
}

}  // namespace twintour
