#include "planemu/decomposition.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_set>

namespace planemu {

namespace {

// Next boundary half-edge after h, pivoting counterclockwise around head(h)
// until the face across the edge leaves the set.
int next_boundary(const PlaneGraph& g, const std::vector<char>& in_faces, int h) {
    int e = g.rot_next[g.twin(h)];
    while (in_faces[g.face_of[g.twin(e)]]) e = g.rot_next[e];
    return e;
}

}  // namespace

std::vector<int> boundary_cycle(const PlaneGraph& g, const std::vector<char>& in_faces) {
    std::vector<char> on_boundary(g.num_halfedges(), 0);
    int start = -1, total = 0;
    for (int h = 0; h < g.num_halfedges(); ++h) {
        if (in_faces[g.face_of[h]] && !in_faces[g.face_of[g.twin(h)]]) {
            on_boundary[h] = 1;
            ++total;
            if (start < 0) start = h;
        }
    }
    if (start < 0) throw structure_error("face set has no boundary");
    std::vector<int> cycle;
    std::vector<char> seen_vertex(g.nv, 0);
    int h = start;
    do {
        int v = g.origin(h);
        if (seen_vertex[v]) throw structure_error("boundary cycle is not simple");
        seen_vertex[v] = 1;
        cycle.push_back(v);
        h = next_boundary(g, in_faces, h);
        if (static_cast<int>(cycle.size()) > total)
            throw structure_error("boundary trace does not close");
    } while (h != start);
    if (static_cast<int>(cycle.size()) != total)
        throw structure_error("boundary is not a single cycle");
    return cycle;
}

namespace {

// Dual-connected components of a face set, each sorted.
std::vector<std::vector<int>> dual_components(const PlaneGraph& g,
                                              const std::vector<char>& in_faces) {
    std::vector<int> comp(g.num_faces(), -1);
    std::vector<std::vector<int>> out;
    for (int f0 = 0; f0 < g.num_faces(); ++f0) {
        if (!in_faces[f0] || comp[f0] >= 0) continue;
        int id = static_cast<int>(out.size());
        out.emplace_back();
        std::vector<int> stack{f0};
        comp[f0] = id;
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            out[id].push_back(f);
            for (int h : g.face_walk[f]) {
                int f2 = g.face_of[g.twin(h)];
                if (in_faces[f2] && comp[f2] < 0) {
                    comp[f2] = id;
                    stack.push_back(f2);
                }
            }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

std::vector<int> faces_to_vertices(const PlaneGraph& g, const std::vector<int>& faces) {
    std::vector<int> verts;
    for (int f : faces)
        for (int h : g.face_walk[f]) verts.push_back(g.origin(h));
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return verts;
}

}  // namespace

ComponentTree build_component_tree(const PlaneGraph& g, const RadialLevels& levels, int width) {
    if (width < 1) throw structure_error("component width must be positive");
    if (g.outer_face < 0) throw structure_error("graph has no outer face");

    ComponentTree tree;
    tree.width = width;

    // Components and boundaries of every positive level, computed once.
    int amax = levels.max_face_level / 2;
    std::vector<std::vector<std::vector<int>>> level_comps(amax + 1);
    std::vector<std::vector<std::vector<int>>> level_bounds(amax + 1);
    std::vector<int64_t> level_cost(amax + 1, 0);
    for (int a = 1; a <= amax; ++a) {
        std::vector<char> mask(g.num_faces(), 0);
        bool any = false;
        for (int f = 0; f < g.num_faces(); ++f)
            if (f != g.outer_face && levels.face_level[f] >= 2 * a) {
                mask[f] = 1;
                any = true;
            }
        if (!any) {
            amax = a - 1;
            break;
        }
        level_comps[a] = dual_components(g, mask);
        for (const auto& faces : level_comps[a]) {
            std::vector<char> cmask(g.num_faces(), 0);
            for (int f : faces) cmask[f] = 1;
            level_bounds[a].push_back(boundary_cycle(g, cmask));
            level_cost[a] += static_cast<int64_t>(level_bounds[a].back().size());
        }
    }

    // Offset choice: cheapest total boundary over the levels it selects.
    auto selected_levels = [&](int l) {
        std::vector<int> out;
        for (int a = (l == 0 ? width : l); a <= amax; a += width) out.push_back(a);
        return out;
    };
    int best_l = 0;
    int64_t best_cost = -1;
    for (int l = 0; l < width; ++l) {
        int64_t cost = 0;
        for (int a : selected_levels(l)) cost += level_cost[a];
        if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best_l = l;
        }
    }
    tree.offset = best_l;
    tree.total_boundary = best_cost;

    // Root: every bounded face.
    Component root;
    root.level = 0;
    root.in_faces.assign(g.num_faces(), 0);
    for (int f = 0; f < g.num_faces(); ++f)
        if (f != g.outer_face) {
            root.faces.push_back(f);
            root.in_faces[f] = 1;
        }
    if (root.faces.empty()) throw structure_error("graph has no bounded face");
    root.boundary = boundary_cycle(g, root.in_faces);
    root.vertices = faces_to_vertices(g, root.faces);
    tree.nodes.push_back(std::move(root));

    std::vector<int> owner(g.num_faces(), 0);  // owning node at the previous level
    for (int a : selected_levels(best_l)) {
        std::vector<int> next_owner(g.num_faces(), -1);
        for (size_t i = 0; i < level_comps[a].size(); ++i) {
            Component node;
            node.level = a;
            node.faces = level_comps[a][i];
            node.in_faces.assign(g.num_faces(), 0);
            for (int f : node.faces) node.in_faces[f] = 1;
            node.boundary = level_bounds[a][i];
            for (int v : node.boundary) assert(levels.vertex_level[v] == 2 * a - 1);
            node.vertices = faces_to_vertices(g, node.faces);
            node.parent = owner[node.faces[0]];
            int id = static_cast<int>(tree.nodes.size());
            tree.nodes[node.parent].children.push_back(id);
            for (int f : node.faces) {
                assert(tree.nodes[node.parent].in_faces[f]);
                next_owner[f] = id;
            }
            tree.nodes.push_back(std::move(node));
        }
        owner = std::move(next_owner);
    }

    for (auto& node : tree.nodes) {
        for (int c : node.children) {
            if (2 * tree.nodes[c].vertices.size() > node.vertices.size()) {
                if (node.heavy_child >= 0)
                    throw structure_error("two children both hold over half the vertices");
                node.heavy_child = c;
            }
        }
    }
    return tree;
}

int SliceTriangulation::edge_between(int u, int v) const {
    for (auto [e, w] : adj[u])
        if (w == v) return e;
    return -1;
}

SliceTriangulation triangulate_slice(const PlaneGraph& g, const RadialLevels& levels,
                                     const ComponentTree& tree, int comp) {
    const Component& K = tree.nodes[comp];
    SliceTriangulation s;
    s.component = comp;

    std::vector<char> in_child(g.num_faces(), 0);
    for (int c : K.children)
        for (int f : tree.nodes[c].faces) in_child[f] = 1;
    std::vector<int> slice_faces;
    for (int f : K.faces)
        if (!in_child[f]) slice_faces.push_back(f);

    // Local numbering: slice-face vertices and all boundary cycles, by id.
    std::vector<int> locals;
    for (int f : slice_faces)
        for (int h : g.face_walk[f]) locals.push_back(g.origin(h));
    for (int v : K.boundary) locals.push_back(v);
    for (int c : K.children)
        for (int v : tree.nodes[c].boundary) locals.push_back(v);
    std::sort(locals.begin(), locals.end());
    locals.erase(std::unique(locals.begin(), locals.end()), locals.end());

    s.from_graph.assign(g.nv, -1);
    for (int v : locals) {
        s.from_graph[v] = static_cast<int>(s.to_graph.size());
        s.to_graph.push_back(v);
    }
    s.n_real = static_cast<int>(s.to_graph.size());
    auto local = [&s](int v) {
        int lv = s.from_graph[v];
        if (lv < 0) throw structure_error("vertex missing from the slice");
        return lv;
    };

    s.external_cycle.reserve(K.boundary.size());
    for (int v : K.boundary) s.external_cycle.push_back(local(v));
    for (size_t i = 0; i < K.children.size(); ++i) {
        s.hole_cycles.emplace_back();
        for (int v : tree.nodes[K.children[i]].boundary)
            s.hole_cycles.back().push_back(local(v));
        if (K.children[i] == K.heavy_child) s.heavy_hole = static_cast<int>(i);
    }

    s.external_apex = static_cast<int>(s.to_graph.size());
    s.to_graph.push_back(-1);
    s.hole_apex.assign(s.hole_cycles.size(), -1);
    for (size_t i = 0; i < s.hole_cycles.size(); ++i) {
        if (static_cast<int>(i) == s.heavy_hole) continue;
        s.hole_apex[i] = static_cast<int>(s.to_graph.size());
        s.to_graph.push_back(-1);
    }

    // Triangles: slice faces fanned from their radial parent, then the
    // external fan, then one fan per non-heavy hole.
    auto add_tri = [&s](int a, int b, int c, int hole) {
        s.faces.push_back({{a, b, c}});
        s.face_hole.push_back(hole);
    };
    for (int f : slice_faces) {
        std::vector<int> walk = g.face_vertices(f);
        int pf = levels.face_parent_vertex[f];
        std::unordered_set<int> distinct(walk.begin(), walk.end());
        assert(pf >= 0 && distinct.count(pf));
        // A face whose walk revisits a vertex is a pinched disk: no single
        // fan vertex triangulates it without duplicate edges.
        if (distinct.size() != walk.size())
            throw structure_error("slice face walk revisits a vertex");
        int t = static_cast<int>(walk.size());
        for (int i = 0; i < t; ++i) {
            int u = walk[i], v = walk[(i + 1) % t];
            if (u == pf || v == pf) continue;
            add_tri(local(pf), local(u), local(v), -1);
        }
    }
    int bl = static_cast<int>(s.external_cycle.size());
    for (int i = 0; i < bl; ++i)
        add_tri(s.external_apex, s.external_cycle[i], s.external_cycle[(i + 1) % bl], -2);
    for (size_t hidx = 0; hidx < s.hole_cycles.size(); ++hidx) {
        if (static_cast<int>(hidx) == s.heavy_hole) continue;
        const auto& cyc = s.hole_cycles[hidx];
        for (size_t i = 0; i < cyc.size(); ++i)
            add_tri(s.hole_apex[hidx], cyc[i], cyc[(i + 1) % cyc.size()],
                    static_cast<int>(hidx));
    }

    // Edge table with flanking faces.
    int nl = s.num_vertices();
    s.adj.assign(nl, {});
    auto find_or_add_edge = [&s](int u, int v) {
        if (u > v) std::swap(u, v);
        for (auto [e, w] : s.adj[u])
            if (w == v) return e;
        int id = static_cast<int>(s.edges.size());
        s.edges.push_back({u, v, false, false});
        s.edge_faces.push_back({-1, -1});
        s.adj[u].emplace_back(id, v);
        s.adj[v].emplace_back(id, u);
        return id;
    };
    for (size_t fi = 0; fi < s.faces.size(); ++fi) {
        for (int k = 0; k < 3; ++k) {
            int e = find_or_add_edge(s.faces[fi].v[k], s.faces[fi].v[(k + 1) % 3]);
            if (s.edge_faces[e][0] < 0)
                s.edge_faces[e][0] = static_cast<int>(fi);
            else if (s.edge_faces[e][1] < 0)
                s.edge_faces[e][1] = static_cast<int>(fi);
            else
                throw structure_error("triangulation edge flanked by three faces");
        }
    }
    for (auto& e : s.edges)
        e.real = e.u < s.n_real && e.v < s.n_real &&
                 g.halfedge_between(s.to_graph[e.u], s.to_graph[e.v]) >= 0;

    // Spanning tree: boundary hangs off the external apex, interior vertices
    // off their radial grandparent, hole apexes off one chosen cycle vertex.
    s.parent.assign(nl, -1);
    s.parent_edge.assign(nl, -1);
    std::vector<char> on_external(nl, 0);
    for (int v : s.external_cycle) on_external[v] = 1;
    for (int lv = 0; lv < s.n_real; ++lv) {
        if (on_external[lv]) {
            s.parent[lv] = s.external_apex;
            continue;
        }
        int gv = s.to_graph[lv];
        int pf = levels.vertex_parent_face[gv];
        if (pf < 0) throw structure_error("interior vertex lacks a parent face");
        int gp = levels.face_parent_vertex[pf];
        if (gp < 0 || s.from_graph[gp] < 0)
            throw structure_error("radial grandparent missing from the slice");
        s.parent[lv] = s.from_graph[gp];
    }
    for (size_t hidx = 0; hidx < s.hole_cycles.size(); ++hidx) {
        if (s.hole_apex[hidx] < 0) continue;
        int best = s.hole_cycles[hidx][0];
        for (int v : s.hole_cycles[hidx])
            if (s.to_graph[v] < s.to_graph[best]) best = v;
        s.parent[s.hole_apex[hidx]] = best;
    }
    for (int v = 0; v < nl; ++v) {
        if (s.parent[v] < 0) continue;
        int e = s.edge_between(v, s.parent[v]);
        if (e < 0) throw structure_error("tree edge missing from the triangulation");
        s.parent_edge[v] = e;
        s.edges[e].tree = true;
    }
    s.depth.assign(nl, -1);
    s.depth[s.external_apex] = 0;
    for (int v = 0; v < nl; ++v) {
        int steps = 0;
        int u = v;
        std::vector<int> chain;
        while (s.depth[u] < 0) {
            chain.push_back(u);
            u = s.parent[u];
            if (u < 0 || ++steps > nl)
                throw structure_error("parent chain does not reach the root");
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            s.depth[*it] = s.depth[u] + 1;
            u = *it;
        }
    }
    return s;
}

namespace {

// Maximal cyclic runs of `cycle` positions whose vertex is marked, reported
// as graph vertex ids.  A fully marked cycle is one run starting at index 0.
std::vector<std::vector<int>> cycle_runs(const SliceTriangulation& s,
                                         const std::vector<int>& cycle,
                                         const std::vector<char>& marked) {
    int m = static_cast<int>(cycle.size());
    std::vector<std::vector<int>> runs;
    if (m == 0) return runs;
    bool all = true, none = true;
    for (int v : cycle) (marked[v] ? none : all) = false;
    if (none) return runs;
    if (all) {
        runs.emplace_back();
        for (int v : cycle) runs.back().push_back(s.to_graph[v]);
        return runs;
    }
    for (int i = 0; i < m; ++i) {
        if (!marked[cycle[i]] || marked[cycle[(i + m - 1) % m]]) continue;
        runs.emplace_back();
        for (int j = i; marked[cycle[j % m]]; ++j)
            runs.back().push_back(s.to_graph[cycle[j % m]]);
    }
    return runs;
}

struct ElimCtx {
    int hole = -1;
    std::vector<int> arc;  // local vertex ids along the hole cycle
    int64_t root_terms = 0;
    int depth = 0;

    bool active() const { return hole >= 0; }
};

struct SliceDecomposer {
    const SliceTriangulation& s;
    const std::vector<char>& is_terminal;
    const std::vector<std::vector<int>>& hole_terminals;
    DecompTree tree;

    int nf = 0;
    std::vector<std::vector<int>> hole_fans;   // fan face ids per hole
    std::vector<std::vector<int>> vert_faces;  // incident face ids per vertex
    std::vector<char> on_heavy;                // vertex lies on the heavy hole cycle
    std::vector<char> face_in;                 // scratch region mask
    std::vector<char> region_verts;            // scratch region vertex mask
    std::vector<char> vert_mark;               // scratch vertex mask

    // Dual tree: the non-tree edges of the triangulated slice connect its
    // faces into a spanning tree (the open heavy-hole face, when present,
    // becomes one virtual node).  Removing the dual edge of a non-tree edge e
    // splits the faces into the two Jordan sides of e's fundamental cycle, so
    // subtree membership answers "which side" even for cycles that never
    // touch the current region.
    int dual_nodes = 0;
    int dual_root = 0;
    std::vector<int> dual_parent;
    std::vector<int> dual_parent_edge;
    std::vector<int> dual_tin, dual_tout;
    std::vector<int> dual_order;     // preorder
    std::vector<int64_t> sub_cnt;    // scratch: region faces per dual subtree

    SliceDecomposer(const SliceTriangulation& slice, const std::vector<char>& term,
                    const std::vector<std::vector<int>>& ht)
        : s(slice), is_terminal(term), hole_terminals(ht) {
        nf = static_cast<int>(s.faces.size());
        hole_fans.assign(s.hole_cycles.size(), {});
        for (int f = 0; f < nf; ++f)
            if (s.face_hole[f] >= 0) hole_fans[s.face_hole[f]].push_back(f);
        vert_faces.assign(s.num_vertices(), {});
        for (int f = 0; f < nf; ++f)
            for (int v : s.faces[f].v) vert_faces[v].push_back(f);
        on_heavy.assign(s.num_vertices(), 0);
        if (s.heavy_hole >= 0)
            for (int v : s.hole_cycles[s.heavy_hole]) on_heavy[v] = 1;
        face_in.assign(nf, 0);
        region_verts.assign(s.num_vertices(), 0);
        vert_mark.assign(s.num_vertices(), 0);
        if (nf > 0) build_dual_tree();
    }

    void build_dual_tree() {
        bool open_face = s.heavy_hole >= 0;
        dual_nodes = nf + (open_face ? 1 : 0);
        dual_root = open_face ? nf : 0;
        std::vector<std::vector<std::pair<int, int>>> dadj(dual_nodes);
        for (int e = 0; e < static_cast<int>(s.edges.size()); ++e) {
            if (s.edges[e].tree) continue;
            auto [a, b] = s.edge_faces[e];
            if (a < 0) a = open_face ? nf : -1;
            if (b < 0) b = open_face ? nf : -1;
            if (a < 0 || b < 0) throw structure_error("edge borders a missing face");
            dadj[a].push_back({b, e});
            dadj[b].push_back({a, e});
        }
        dual_parent.assign(dual_nodes, -2);
        dual_parent_edge.assign(dual_nodes, -1);
        dual_tin.assign(dual_nodes, 0);
        dual_tout.assign(dual_nodes, 0);
        dual_order.clear();
        int timer = 0;
        std::vector<std::pair<int, size_t>> st;  // node, next adjacency slot
        dual_parent[dual_root] = -1;
        dual_tin[dual_root] = timer++;
        dual_order.push_back(dual_root);
        st.push_back({dual_root, 0});
        while (!st.empty()) {
            auto& [node, slot] = st.back();
            if (slot == dadj[node].size()) {
                dual_tout[node] = timer++;
                st.pop_back();
                continue;
            }
            auto [nxt, e] = dadj[node][slot++];
            if (nxt == dual_parent[node] && e == dual_parent_edge[node]) continue;
            if (dual_parent[nxt] != -2)
                throw structure_error("slice dual edges contain a cycle");
            dual_parent[nxt] = node;
            dual_parent_edge[nxt] = e;
            dual_tin[nxt] = timer++;
            dual_order.push_back(nxt);
            st.push_back({nxt, 0});
        }
        for (int f = 0; f < dual_nodes; ++f)
            if (dual_parent[f] == -2)
                throw structure_error("slice dual graph is not connected");
    }

    // The dual-tree child endpoint of non-tree edge e: enclosed(e) = its subtree.
    int child_face(int e) const {
        auto [a, b] = s.edge_faces[e];
        if (a < 0) a = nf;
        if (b < 0) b = nf;
        if (dual_parent[a] == b && dual_parent_edge[a] == e) return a;
        if (dual_parent[b] == a && dual_parent_edge[b] == e) return b;
        throw structure_error("edge is not a dual tree edge");
    }

    bool in_subtree(int f, int c) const {
        return dual_tin[c] <= dual_tin[f] && dual_tin[f] < dual_tout[c];
    }

    // Region faces inside each dual subtree; expects load_region state.
    void region_subtree_counts() {
        sub_cnt.assign(dual_nodes, 0);
        for (int f = 0; f < nf; ++f)
            if (face_in[f]) sub_cnt[f] = 1;
        for (auto it = dual_order.rbegin(); it != dual_order.rend(); ++it)
            if (dual_parent[*it] >= 0) sub_cnt[dual_parent[*it]] += sub_cnt[*it];
    }

    // Jordan sides of e's fundamental cycle restricted to region idx; the
    // first side is the one holding face edge_faces[e][0].
    std::pair<std::vector<int>, std::vector<int>> jordan_sides(int idx, int e) const {
        int c = child_face(e);
        int fa = s.edge_faces[e][0];
        if (fa < 0) fa = nf;
        bool a_in = in_subtree(fa, c);
        std::pair<std::vector<int>, std::vector<int>> out;
        for (int f : tree.regions[idx].faces)
            (in_subtree(f, c) == a_in ? out.first : out.second).push_back(f);
        return out;
    }

    void load_region(int idx) {
        std::fill(face_in.begin(), face_in.end(), 0);
        std::fill(region_verts.begin(), region_verts.end(), 0);
        for (int f : tree.regions[idx].faces) {
            face_in[f] = 1;
            for (int v : s.faces[f].v) region_verts[v] = 1;
        }
    }

    bool hole_inside(int h, const std::vector<char>& face_mask) const {
        if (h == s.heavy_hole || s.hole_apex[h] < 0) return false;
        for (int f : hole_fans[h])
            if (!face_mask[f]) return false;
        return true;
    }

    // A vertex is strictly inside a face set when every face around it
    // belongs to the set.  Heavy-cycle vertices never qualify: the open
    // heavy face at their back is not part of the complex.
    bool strictly_inside(int lv, const std::vector<char>& face_mask) const {
        if (on_heavy[lv]) return false;
        for (int f : vert_faces[lv])
            if (!face_mask[f]) return false;
        return true;
    }

    // Enclosed terminal weight of one side: terminals strictly inside its
    // face set plus everything inside its wholly-contained holes.  Terminals
    // on the bounding cycle count toward neither side — a Jordan curve can
    // never strictly separate two adjacent terminals, so balance and stop
    // rules must ignore what they cannot enclose.
    int64_t enclosed_terminals(const std::vector<int>& faces,
                               const std::vector<char>& face_mask) {
        std::fill(vert_mark.begin(), vert_mark.end(), 0);
        int64_t total = 0;
        for (int f : faces)
            for (int v : s.faces[f].v) {
                if (vert_mark[v]) continue;
                vert_mark[v] = 1;
                if (v < s.n_real && is_terminal[s.to_graph[v]] &&
                    strictly_inside(v, face_mask))
                    ++total;
            }
        for (size_t h = 0; h < s.hole_cycles.size(); ++h)
            if (hole_inside(static_cast<int>(h), face_mask))
                total += static_cast<int64_t>(hole_terminals[h].size());
        return total;
    }

    struct Cycle {
        std::vector<int> verts;  // u ... lca ... v in order
        std::vector<int> edges;
    };

    Cycle fundamental_cycle(int e) {
        Cycle c;
        int u = s.edges[e].u, v = s.edges[e].v;
        std::vector<int> pu{u}, pv{v};
        while (s.depth[u] > s.depth[v]) {
            c.edges.push_back(s.parent_edge[u]);
            u = s.parent[u];
            pu.push_back(u);
        }
        while (s.depth[v] > s.depth[u]) {
            c.edges.push_back(s.parent_edge[v]);
            v = s.parent[v];
            pv.push_back(v);
        }
        while (u != v) {
            c.edges.push_back(s.parent_edge[u]);
            u = s.parent[u];
            pu.push_back(u);
            c.edges.push_back(s.parent_edge[v]);
            v = s.parent[v];
            pv.push_back(v);
        }
        c.verts = pu;  // ends at the lca
        for (auto it = pv.rbegin(); it != pv.rend(); ++it)
            if (*it != u) c.verts.push_back(*it);
        c.edges.push_back(e);
        return c;
    }

    int new_region(std::vector<int> faces, int depth, const ElimCtx* ctx) {
        if (faces.empty()) throw structure_error("a split produced an empty region");
        DecompRegion r;
        r.faces = std::move(faces);
        r.depth = depth;
        std::vector<char> fmask(nf, 0);
        for (int f : r.faces) fmask[f] = 1;

        std::fill(vert_mark.begin(), vert_mark.end(), 0);
        for (int f : r.faces)
            for (int v : s.faces[f].v) vert_mark[v] = 1;
        for (int lv = 0; lv < s.n_real; ++lv)
            if (vert_mark[lv] && is_terminal[s.to_graph[lv]]) {
                r.terminals.push_back(s.to_graph[lv]);
                if (strictly_inside(lv, fmask))
                    r.core_terminals.push_back(s.to_graph[lv]);
            }
        for (size_t h = 0; h < s.hole_cycles.size(); ++h)
            if (hole_inside(static_cast<int>(h), fmask)) {
                r.holes.push_back(static_cast<int>(h));
                r.terminals.insert(r.terminals.end(), hole_terminals[h].begin(),
                                   hole_terminals[h].end());
                r.core_terminals.insert(r.core_terminals.end(), hole_terminals[h].begin(),
                                        hole_terminals[h].end());
            }
        std::sort(r.terminals.begin(), r.terminals.end());
        r.terminals.erase(std::unique(r.terminals.begin(), r.terminals.end()),
                          r.terminals.end());
        std::sort(r.core_terminals.begin(), r.core_terminals.end());
        r.core_terminals.erase(
            std::unique(r.core_terminals.begin(), r.core_terminals.end()),
            r.core_terminals.end());

        r.boundary_intervals = cycle_runs(s, s.external_cycle, vert_mark);
        if (s.heavy_hole >= 0) {
            auto heavy = cycle_runs(s, s.hole_cycles[s.heavy_hole], vert_mark);
            r.boundary_intervals.insert(r.boundary_intervals.end(), heavy.begin(),
                                        heavy.end());
        }
        if (ctx && ctx->active()) {
            r.elim_hole = ctx->hole;
            r.elim_intervals = cycle_runs(s, s.hole_cycles[ctx->hole], vert_mark);
        }
        tree.max_depth = std::max(tree.max_depth, depth);
        tree.regions.push_back(std::move(r));
        return static_cast<int>(tree.regions.size()) - 1;
    }

    // Expects load_region(idx) state.
    void set_separator(int idx, int e, const Cycle& c, RegionKind kind) {
        DecompRegion& r = tree.regions[idx];
        r.kind = kind;
        r.sep_edge = e;
        r.cycle = c.verts;
        r.cycle_real.clear();
        for (int v : c.verts)
            if (v < s.n_real && region_verts[v]) r.cycle_real.push_back(s.to_graph[v]);
    }

    // Expects load_region(idx) state; like set_separator but for a separator
    // that is a tree path rather than a fundamental cycle (no defining edge).
    void set_path_separator(int idx, const std::vector<int>& cut, RegionKind kind) {
        DecompRegion& r = tree.regions[idx];
        r.kind = kind;
        r.sep_edge = -1;
        r.cycle = cut;
        r.cycle_real.clear();
        for (int v : cut)
            if (v < s.n_real && region_verts[v]) r.cycle_real.push_back(s.to_graph[v]);
    }

    void recurse_on_sides(int idx, std::vector<int> side_a, std::vector<int> side_b,
                          const ElimCtx& ctx_a, const ElimCtx& ctx_b) {
        if (side_a.empty() || side_b.empty())
            throw structure_error("separator fails to split the region");
        int depth = tree.regions[idx].depth + 1;
        int ca = new_region(std::move(side_a), depth, &ctx_a);
        int cb = new_region(std::move(side_b), depth, &ctx_b);
        tree.regions[idx].child = {ca, cb};
        process(ca, ctx_a);
        process(cb, ctx_b);
    }

    // Expects load_region(idx) state; consumes it.
    void split_and_recurse(int idx, int e, const Cycle& c, RegionKind kind,
                           const ElimCtx& ctx_a, const ElimCtx& ctx_b) {
        auto [side_a, side_b] = jordan_sides(idx, e);
        set_separator(idx, e, c, kind);
        recurse_on_sides(idx, std::move(side_a), std::move(side_b), ctx_a, ctx_b);
    }

    bool try_good_split(int idx) {
        const int64_t total = static_cast<int64_t>(tree.regions[idx].core_terminals.size());
        const int64_t all_faces = static_cast<int64_t>(tree.regions[idx].faces.size());
        load_region(idx);
        region_subtree_counts();
        std::vector<char> banned_apex(s.num_vertices(), 0);
        for (int h : tree.regions[idx].holes)
            if (s.hole_apex[h] >= 0) banned_apex[s.hole_apex[h]] = 1;

        // Candidates are all non-tree edges of the triangulated slice, not
        // just those inside the region: a fundamental cycle lying outside can
        // still enclose part of the region.
        for (int e = 0; e < static_cast<int>(s.edges.size()); ++e) {
            if (s.edges[e].tree) continue;
            int64_t enclosed = sub_cnt[child_face(e)];
            if (enclosed <= 0 || enclosed >= all_faces) continue;
            Cycle c = fundamental_cycle(e);
            bool banned = false;
            for (int v : c.verts)
                if (banned_apex[v]) banned = true;
            if (banned) continue;

            auto [side_a, side_b] = jordan_sides(idx, e);
            if (side_a.empty() || side_b.empty()) continue;
            std::vector<char> in_a(nf, 0);
            for (int f : side_a) in_a[f] = 1;
            std::vector<char> in_b(nf, 0);
            for (int f : side_b) in_b[f] = 1;
            int64_t ta = enclosed_terminals(side_a, in_a);
            int64_t tb = enclosed_terminals(side_b, in_b);
            if (4 * ta > 3 * total || 4 * tb > 3 * total) continue;

            ElimCtx none;
            split_and_recurse(idx, e, c, RegionKind::good_split, none, none);
            return true;
        }
        return false;
    }

    // Expects load_region(idx) state.
    bool hole_disposable(int idx, int h) {
        const int64_t total = static_cast<int64_t>(tree.regions[idx].core_terminals.size());
        const auto& cyc = s.hole_cycles[h];
        int m = static_cast<int>(cyc.size());
        for (int i = 0; i < m; ++i) {
            int u = cyc[i], v = cyc[(i + 1) % m];
            int e = s.edge_between(u, v);
            if (e < 0 || s.edges[e].tree)
                throw structure_error("hole boundary edge is unusable");
            int fan = -1;
            for (int side = 0; side < 2; ++side) {
                int f = s.edge_faces[e][side];
                if (f >= 0 && s.face_hole[f] == h) fan = f;
            }
            if (fan < 0 || !face_in[fan]) throw structure_error("hole fan face missing");
            auto [side_a, side_b] = jordan_sides(idx, e);
            const std::vector<int>& other = (s.edge_faces[e][0] == fan) ? side_b : side_a;
            std::vector<char> in_other(nf, 0);
            for (int f : other) in_other[f] = 1;
            if (2 * enclosed_terminals(other, in_other) > total) return false;
        }
        return true;
    }

    // ── Heavy-hole elimination ──────────────────────────────────────
    //
    // The heavy hole carries no fan, so fundamental cycles can only peel thin
    // wedges off an annular region: when terminals spread around the ring no
    // such cycle is balanced.  The way out is a separator that crosses the
    // heavy hole: a radial tree path (or a pair of them on the full ring),
    // closed through the open heavy face.  It touches the heavy boundary at
    // most twice and splits the region into angular sectors, halving the
    // heavy arc each step.

    // Tree ascent from x to the root, x first.
    std::vector<int> ascent(int x) const {
        std::vector<int> p{x};
        while (s.parent[p.back()] >= 0) p.push_back(s.parent[p.back()]);
        return p;
    }

    // Expects load_region(idx).  Parent-chain prefix from x, truncated at the
    // first vertex past x that touches the region boundary (an incident face
    // outside the region); the full ascent when none does.  Empty when the
    // chain returns to the heavy rim, which would add an extra rim touch.
    std::vector<int> chord_from(int x) const {
        std::vector<int> p{x};
        while (s.parent[p.back()] >= 0) {
            int v = s.parent[p.back()];
            if (on_heavy[v]) return {};
            p.push_back(v);
            bool boundary = false;
            for (int f : vert_faces[v])
                if (!face_in[f]) { boundary = true; break; }
            if (boundary) break;
        }
        return p;
    }

    // The simple path u .. lca .. v through the spanning tree.
    std::vector<int> path_between(int u, int v) const {
        std::vector<int> pu = ascent(u), pv = ascent(v);
        std::vector<int> pos(s.num_vertices(), -1);
        for (size_t i = 0; i < pu.size(); ++i) pos[pu[i]] = static_cast<int>(i);
        size_t j = 0;
        while (pos[pv[j]] < 0) ++j;
        std::vector<int> path(pu.begin(), pu.begin() + pos[pv[j]] + 1);
        while (j-- > 0) path.push_back(pv[j]);
        return path;
    }

    // Expects load_region(idx).  Floods the region faces with the given edges
    // blocked, writing a component id per face; returns the component count.
    int flood_components(int idx, const std::vector<char>& blocked,
                         std::vector<int>& comp) {
        const auto& faces = tree.regions[idx].faces;
        comp.assign(nf, -1);
        int ncomp = 0;
        std::vector<int> stack;
        for (int f0 : faces) {
            if (comp[f0] >= 0) continue;
            comp[f0] = ncomp;
            stack.assign(1, f0);
            while (!stack.empty()) {
                int f = stack.back();
                stack.pop_back();
                const auto& fv = s.faces[f].v;
                for (int i = 0; i < 3; ++i) {
                    int e = s.edge_between(fv[i], fv[(i + 1) % 3]);
                    if (e < 0 || blocked[e]) continue;
                    int g = (s.edge_faces[e][0] == f) ? s.edge_faces[e][1]
                                                      : s.edge_faces[e][0];
                    if (g < 0 || !face_in[g] || comp[g] >= 0) continue;
                    comp[g] = ncomp;
                    stack.push_back(g);
                }
            }
            ++ncomp;
        }
        return ncomp;
    }

    // The real face flanking a heavy-rim edge, or -1 when the edge or its
    // face is missing from the loaded region.
    int rim_flank(int u, int v) const {
        int e = s.edge_between(u, v);
        if (e < 0) return -1;
        int f = s.edge_faces[e][0] >= 0 ? s.edge_faces[e][0] : s.edge_faces[e][1];
        return (f >= 0 && face_in[f]) ? f : -1;
    }

    // Expects load_region(idx).  Accepts the chord only when blocking it
    // splits the region into exactly two parts with the two rim probe faces
    // on opposite sides; previously carved pockets can pinch a candidate into
    // three parts or absorb it, so each one is checked by flooding.
    bool try_heavy_cut(int idx, const std::vector<int>& cut, int fl, int fh,
                       std::vector<int>& side_low, std::vector<int>& side_high) {
        if (cut.size() < 2 || fl < 0 || fh < 0) return false;
        std::vector<char> blocked(s.edges.size(), 0);
        for (size_t i = 0; i + 1 < cut.size(); ++i) {
            int e = s.edge_between(cut[i], cut[i + 1]);
            if (e < 0) return false;
            blocked[e] = 1;
        }
        std::vector<int> comp;
        if (flood_components(idx, blocked, comp) != 2) return false;
        if (comp[fl] == comp[fh]) return false;
        side_low.clear();
        side_high.clear();
        for (int f : tree.regions[idx].faces)
            (comp[f] == comp[fl] ? side_low : side_high).push_back(f);
        return true;
    }

    // Expects load_region(idx).  The heavy hole is disposable when, for every
    // in-region heavy boundary edge, the wedge its fundamental cycle encloses
    // away from the hole holds at most half of the region's core terminals.
    bool heavy_disposable(int idx) {
        const int64_t total =
            static_cast<int64_t>(tree.regions[idx].core_terminals.size());
        const auto& cyc = s.hole_cycles[s.heavy_hole];
        int m = static_cast<int>(cyc.size());
        for (int i = 0; i < m; ++i) {
            int e = s.edge_between(cyc[i], cyc[(i + 1) % m]);
            if (e < 0) throw structure_error("heavy boundary edge is missing");
            int flank =
                s.edge_faces[e][0] >= 0 ? s.edge_faces[e][0] : s.edge_faces[e][1];
            if (flank < 0 || !face_in[flank]) continue;  // edge outside the region
            if (s.edges[e].tree)
                throw structure_error("heavy boundary edge is a tree edge");
            auto [side_a, side_b] = jordan_sides(idx, e);
            int c = child_face(e);  // the dual subtree side faces away from the hole
            const std::vector<int>& wedge =
                (!side_a.empty() && in_subtree(side_a[0], c)) ? side_a : side_b;
            std::vector<char> in_w(nf, 0);
            for (int f : wedge) in_w[f] = 1;
            if (2 * enclosed_terminals(wedge, in_w) > total) return false;
        }
        return true;
    }

    // Longest maximal run of heavy-cycle vertices inside the loaded region
    // (the whole cycle when every vertex is present), as local ids.
    std::vector<int> longest_heavy_run() const {
        const auto& cyc = s.hole_cycles[s.heavy_hole];
        int m = static_cast<int>(cyc.size());
        bool all = true;
        for (int v : cyc)
            if (!region_verts[v]) all = false;
        if (all) return cyc;
        std::vector<int> best;
        for (int i = 0; i < m; ++i) {
            if (!region_verts[cyc[i]] || region_verts[cyc[(i + m - 1) % m]]) continue;
            std::vector<int> run;
            for (int j = i; region_verts[cyc[j % m]]; ++j) run.push_back(cyc[j % m]);
            if (run.size() > best.size()) best = std::move(run);
        }
        return best;
    }

    // Expects load_region(idx) state; cuts the heavy arc near its median.
    // Returns false when no candidate chord splits the region, so the caller
    // can release the region to the ordinary machinery.
    bool eliminate_heavy(int idx, const ElimCtx& ctx) {
        const auto& arc = ctx.arc;
        int len = static_cast<int>(arc.size());
        assert(len >= 3);
        const auto& cyc = s.hole_cycles[s.heavy_hole];
        bool full_ring = len == static_cast<int>(cyc.size());

        ElimCtx low{s.heavy_hole, {}, ctx.root_terms, ctx.depth + 1};
        ElimCtx high{s.heavy_hole, {}, ctx.root_terms, ctx.depth + 1};
        std::vector<int> side_low, side_high;

        auto commit = [&](const std::vector<int>& cut) {
            set_path_separator(idx, cut, RegionKind::hole_elimination);
            recurse_on_sides(idx, std::move(side_low), std::move(side_high), low,
                             high);
        };
        int attempts = 0;

        // One chord from the arc interior to the region boundary splits any
        // disk-like sector; try the medians first.
        if (!full_ring) {
            int mid = (len - 1) / 2;
            std::vector<int> order{mid};
            for (int d = 1; mid - d >= 1 || mid + d <= len - 2; ++d) {
                if (mid + d <= len - 2) order.push_back(mid + d);
                if (mid - d >= 1) order.push_back(mid - d);
            }
            for (int c : order) {
                if (attempts > 256) break;
                int fl = rim_flank(arc[c - 1], arc[c]);
                int fh = rim_flank(arc[c], arc[c + 1]);
                std::vector<int> trunc = chord_from(arc[c]);
                std::vector<int> full = ascent(arc[c]);
                for (const auto* cut : {&trunc, &full}) {
                    if (cut == &full && full.size() == trunc.size()) continue;
                    ++attempts;
                    if (!try_heavy_cut(idx, *cut, fl, fh, side_low, side_high))
                        continue;
                    low.arc.assign(arc.begin(), arc.begin() + c + 1);
                    high.arc.assign(arc.begin() + c, arc.end());
                    commit(*cut);
                    return true;
                }
            }
        }

        // A rim-to-rim chord, closed through the open heavy face: the only
        // cut that opens a full ring, and the fallback for sectors that wrap
        // around carved pockets where no single chord reaches the far
        // boundary.  Prefer near-halving pairs and slide outward.
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < len; ++i)
            for (int j = i + 1; j < len; ++j) {
                if (!full_ring && i == 0 && j == len - 1) continue;  // no progress
                pairs.push_back({i, j});
            }
        auto badness = [&](const std::pair<int, int>& p) {
            int d = (p.second - p.first) - len / 2;
            return d < 0 ? -d : d;
        };
        std::stable_sort(
            pairs.begin(), pairs.end(),
            [&](const auto& a, const auto& b) { return badness(a) < badness(b); });
        for (const auto& [i, j] : pairs) {
            if (++attempts > 256) break;
            std::vector<int> cut = path_between(arc[i], arc[j]);
            bool retouch = false;
            for (size_t t = 1; t + 1 < cut.size(); ++t)
                if (on_heavy[cut[t]]) retouch = true;
            if (retouch) continue;
            int fl = rim_flank(arc[i], arc[i + 1]);
            int fh = full_ring ? rim_flank(arc[j], arc[(j + 1) % len])
                     : i > 0   ? rim_flank(arc[i - 1], arc[i])
                               : rim_flank(arc[j], arc[j + 1]);
            if (!try_heavy_cut(idx, cut, fl, fh, side_low, side_high)) continue;
            low.arc.assign(arc.begin() + i, arc.begin() + j + 1);
            if (full_ring) {
                high.arc.assign(arc.begin() + j, arc.end());
                high.arc.insert(high.arc.end(), arc.begin(), arc.begin() + i + 1);
            } else {
                // The outside keeps two stubs; carry on with the longer one.
                if (i + 1 >= len - j)
                    high.arc.assign(arc.begin(), arc.begin() + i + 1);
                else
                    high.arc.assign(arc.begin() + j, arc.end());
            }
            commit(cut);
            return true;
        }
        return false;
    }

    // Expects load_region(idx) state; cuts the fan spoke at the arc median.
    // Returns false only when a heavy cut found no viable chord.
    bool eliminate(int idx, const ElimCtx& ctx) {
        if (ctx.hole == s.heavy_hole) return eliminate_heavy(idx, ctx);
        const auto& arc = ctx.arc;
        int len = static_cast<int>(arc.size());
        assert(len >= 3);
        int mid = (len - 1) / 2;
        int apex = s.hole_apex[ctx.hole];
        int e = s.edge_between(apex, arc[mid]);
        if (e < 0 || s.edges[e].tree) throw structure_error("elimination edge is unusable");
        Cycle c = fundamental_cycle(e);

        // The seed flank pairs with the arc half holding its third vertex.
        int seed = s.edge_faces[e][0];
        int third = -1;
        for (int v : s.faces[seed].v)
            if (v != apex && v != arc[mid]) third = v;
        ElimCtx low{ctx.hole, {arc.begin(), arc.begin() + mid + 1}, ctx.root_terms,
                    ctx.depth + 1};
        ElimCtx high{ctx.hole, {arc.begin() + mid, arc.end()}, ctx.root_terms,
                     ctx.depth + 1};
        if (third == arc[mid - 1])
            split_and_recurse(idx, e, c, RegionKind::hole_elimination, low, high);
        else if (third == arc[mid + 1])
            split_and_recurse(idx, e, c, RegionKind::hole_elimination, high, low);
        else
            throw structure_error("elimination flank does not border the arc");
        return true;
    }

    void process(int idx, ElimCtx ctx, bool allow_heavy = true) {
        int64_t terms = static_cast<int64_t>(tree.regions[idx].core_terminals.size());
        if (ctx.active()) {
            if (static_cast<int>(ctx.arc.size()) > 2 && terms > 0) {
                load_region(idx);
                if (eliminate(idx, ctx)) return;
                // No chord splits this pocketed remnant; release it to the
                // ordinary machinery and accept a longer rim interval.  A
                // heavy restart here would only rebuild the same stuck arc.
                allow_heavy = false;
            }
            ctx = ElimCtx{};
        }
        if (terms == 0) return;
        int active_holes = 0;
        for (int h : tree.regions[idx].holes)
            if (!hole_terminals[h].empty()) ++active_holes;
        if (terms <= 1 && active_holes <= 1) return;
        if (terms >= 2 && try_good_split(idx)) return;

        for (int h : tree.regions[idx].holes) {
            load_region(idx);
            if (!hole_disposable(idx, h)) continue;
            DecompRegion& r = tree.regions[idx];
            r.elim_root = true;
            r.elim_hole = h;
            std::fill(vert_mark.begin(), vert_mark.end(), 0);
            for (int f : r.faces)
                for (int v : s.faces[f].v) vert_mark[v] = 1;
            r.elim_intervals = cycle_runs(s, s.hole_cycles[h], vert_mark);

            int apex = s.hole_apex[h];
            int anchor = s.parent[apex];  // the one tree spoke
            const auto& cyc = s.hole_cycles[h];
            int pos = static_cast<int>(std::find(cyc.begin(), cyc.end(), anchor) -
                                       cyc.begin());
            ElimCtx start;
            start.hole = h;
            for (size_t i = 0; i <= cyc.size(); ++i)
                start.arc.push_back(cyc[(pos + i) % cyc.size()]);
            start.root_terms = terms;
            start.depth = 0;
            load_region(idx);
            eliminate(idx, start);
            return;
        }

        if (s.heavy_hole >= 0 && allow_heavy) {
            load_region(idx);
            std::vector<int> run = longest_heavy_run();
            if (static_cast<int>(run.size()) >= 3 && heavy_disposable(idx)) {
                DecompRegion& r = tree.regions[idx];
                r.elim_root = true;
                r.elim_hole = s.heavy_hole;
                std::fill(vert_mark.begin(), vert_mark.end(), 0);
                for (int f : r.faces)
                    for (int v : s.faces[f].v) vert_mark[v] = 1;
                r.elim_intervals = cycle_runs(s, s.hole_cycles[s.heavy_hole], vert_mark);
                ElimCtx start;
                start.hole = s.heavy_hole;
                start.arc = std::move(run);
                start.root_terms = terms;
                start.depth = 0;
                load_region(idx);
                if (eliminate(idx, start)) return;
                tree.regions[idx].elim_root = false;
                tree.regions[idx].elim_hole = -1;
                tree.regions[idx].elim_intervals.clear();
            }
        }
        throw structure_error(no_separator_report(idx));
    }

    // Forensic dump for the failure path: what the split scan actually saw.
    std::string no_separator_report(int idx) {
        load_region(idx);
        const DecompRegion& r = tree.regions[idx];
        const int64_t total = static_cast<int64_t>(r.core_terminals.size());
        std::string msg = "region admits no separator: terms=" + std::to_string(total) +
                          " faces=" + std::to_string(r.faces.size()) +
                          " depth=" + std::to_string(r.depth) +
                          " elim_hole=" + std::to_string(r.elim_hole);
        int candidates = 0, banned_cnt = 0;
        int64_t best = -1;
        region_subtree_counts();
        std::vector<char> banned_apex(s.num_vertices(), 0);
        for (int h : r.holes)
            if (s.hole_apex[h] >= 0) banned_apex[s.hole_apex[h]] = 1;
        for (int e = 0; e < static_cast<int>(s.edges.size()); ++e) {
            if (s.edges[e].tree) continue;
            int64_t enclosed = sub_cnt[child_face(e)];
            if (enclosed <= 0 || enclosed >= static_cast<int64_t>(r.faces.size())) continue;
            Cycle c = fundamental_cycle(e);
            bool banned = false;
            for (int v : c.verts)
                if (banned_apex[v]) banned = true;
            if (banned) {
                ++banned_cnt;
                continue;
            }
            ++candidates;
            auto [side_a, side_b] = jordan_sides(idx, e);
            if (side_a.empty() || side_b.empty()) continue;
            std::vector<char> in_a(nf, 0);
            for (int f : side_a) in_a[f] = 1;
            std::vector<char> in_b(nf, 0);
            for (int f : side_b) in_b[f] = 1;
            int64_t ta = enclosed_terminals(side_a, in_a);
            int64_t tb = enclosed_terminals(side_b, in_b);
            int64_t worst = std::max(ta, tb);
            if (best < 0 || worst < best) best = worst;
        }
        msg += " candidates=" + std::to_string(candidates) +
               " banned=" + std::to_string(banned_cnt) +
               " best_side=" + std::to_string(best) + "/" + std::to_string(total);
        msg += " holes=[";
        for (int h : r.holes) {
            load_region(idx);
            msg += std::to_string(h) + ":" + std::to_string(hole_terminals[h].size()) +
                   (hole_disposable(idx, h) ? "d" : "x") + " ";
        }
        msg += "]";
        if (s.heavy_hole >= 0) {
            load_region(idx);
            msg += " heavy_run=" + std::to_string(longest_heavy_run().size()) +
                   (heavy_disposable(idx) ? "d" : "x");
        }
        return msg;
    }
};

}  // namespace

DecompTree decompose_slice(const SliceTriangulation& slice, const std::vector<char>& is_terminal,
                           const std::vector<std::vector<int>>& hole_terminals) {
    if (hole_terminals.size() != slice.hole_cycles.size())
        throw structure_error("hole terminal table size disagrees");
    SliceDecomposer d(slice, is_terminal, hole_terminals);
    d.tree.component = slice.component;
    if (d.nf == 0) return std::move(d.tree);  // empty slice: no regions
    std::vector<int> all(d.nf);
    for (int f = 0; f < d.nf; ++f) all[f] = f;
    int root = d.new_region(std::move(all), 0, nullptr);
    d.process(root, ElimCtx{});
    return std::move(d.tree);
}

std::vector<std::string> audit_decomp_tree(const SliceTriangulation& slice,
                                           const DecompTree& tree) {
    std::vector<std::string> bad;
    auto complain = [&bad](int idx, const std::string& what) {
        bad.push_back("region " + std::to_string(idx) + ": " + what);
    };
    if (tree.regions.empty()) {
        if (!slice.faces.empty()) bad.push_back("slice has faces but no regions");
        return bad;
    }
    int nf = static_cast<int>(slice.faces.size());
    if (static_cast<int>(tree.regions[0].faces.size()) != nf)
        complain(0, "root does not cover the whole slice");
    if (tree.regions[0].depth != 0) complain(0, "root depth is not zero");

    std::vector<int64_t> elim_root_terms(tree.regions.size(), -1);
    for (size_t i = 0; i < tree.regions.size(); ++i) {
        const DecompRegion& r = tree.regions[i];
        int idx = static_cast<int>(i);
        bool internal = r.child[0] >= 0;
        if (internal != (r.child[1] >= 0)) complain(idx, "half-linked children");
        if (internal != (r.kind != RegionKind::leaf))
            complain(idx, "kind disagrees with having children");
        if (!std::includes(r.terminals.begin(), r.terminals.end(),
                           r.core_terminals.begin(), r.core_terminals.end()))
            complain(idx, "core terminals are not a subset of the terminals");
        if (!internal) {
            if (r.core_terminals.size() > 1) complain(idx, "leaf keeps several terminals");
            continue;
        }

        int ca = r.child[0], cb = r.child[1];
        const auto& fa = tree.regions[ca].faces;
        const auto& fb = tree.regions[cb].faces;
        std::vector<int> merged(fa.size() + fb.size());
        std::merge(fa.begin(), fa.end(), fb.begin(), fb.end(), merged.begin());
        if (merged != r.faces)
            complain(idx, "children do not partition the region");
        if (tree.regions[ca].depth != r.depth + 1 || tree.regions[cb].depth != r.depth + 1)
            complain(idx, "child depth is off");

        // A separator is either a fundamental cycle of a non-tree edge or,
        // for heavy-hole elimination, a tree path closed through the open
        // heavy face (a pair of radial cuts on the full ring).
        bool heavy_cut = r.kind == RegionKind::hole_elimination &&
                         slice.heavy_hole >= 0 &&
                         r.elim_hole == slice.heavy_hole && r.sep_edge < 0;
        if (heavy_cut) {
            std::unordered_set<int> distinct(r.cycle.begin(), r.cycle.end());
            if (distinct.size() != r.cycle.size() || r.cycle.size() < 2)
                complain(idx, "path separator is not a simple path");
            for (size_t q = 0; q + 1 < r.cycle.size(); ++q) {
                int e = slice.edge_between(r.cycle[q], r.cycle[q + 1]);
                if (e < 0 || !slice.edges[e].tree) {
                    complain(idx, "path separator leaves the spanning tree");
                    break;
                }
            }
            std::vector<char> hv(slice.num_vertices(), 0);
            for (int v : slice.hole_cycles[slice.heavy_hole]) hv[v] = 1;
            int touches = 0;
            for (int v : r.cycle)
                if (hv[v]) ++touches;
            if (touches > 2)
                complain(idx, "path separator crosses the heavy hole more than twice");
            if (r.cycle.empty() || !hv[r.cycle.front()])
                complain(idx, "path separator does not start on the heavy hole");
        } else if (r.sep_edge < 0 || r.sep_edge >= static_cast<int>(slice.edges.size()) ||
                   slice.edges[r.sep_edge].tree) {
            complain(idx, "separator edge is not a non-tree edge");
            continue;
        } else {
            std::unordered_set<int> distinct(r.cycle.begin(), r.cycle.end());
            if (distinct.size() != r.cycle.size() || r.cycle.size() < 3)
                complain(idx, "separator cycle is not a simple cycle");
        }

        // Each child's core terminals sit strictly inside the child's face
        // set, hence strictly inside the parent's: they must reappear there.
        for (int c : {ca, cb}) {
            const auto& cc = tree.regions[c].core_terminals;
            if (!std::includes(r.core_terminals.begin(), r.core_terminals.end(),
                               cc.begin(), cc.end()))
                complain(idx, "child core terminals leak out of the parent");
        }

        int64_t total = static_cast<int64_t>(r.core_terminals.size());
        int64_t ta = static_cast<int64_t>(tree.regions[ca].core_terminals.size());
        int64_t tb = static_cast<int64_t>(tree.regions[cb].core_terminals.size());
        if (r.kind == RegionKind::good_split) {
            for (int v : r.cycle)
                for (int h : r.holes)
                    if (slice.hole_apex[h] == v)
                        complain(idx, "separator passes a kept hole's apex");
            if (4 * ta > 3 * total || 4 * tb > 3 * total)
                complain(idx, "good split is unbalanced");
            // Holes of the region must stay whole under a good split.
            for (int h : r.holes) {
                std::vector<char> in_a(nf, 0);
                for (int f : fa) in_a[f] = 1;
                int inside = 0, outside = 0;
                for (int f = 0; f < nf; ++f)
                    if (slice.face_hole[f] == h) (in_a[f] ? inside : outside) += 1;
                if (inside && outside) complain(idx, "good split tears a hole fan");
            }
        } else if (r.kind == RegionKind::hole_elimination) {
            if (r.elim_hole < 0) complain(idx, "elimination node lacks a hole");
            if (r.elim_root) elim_root_terms[i] = total;
        }
    }

    // Elimination subtrees: propagate the root weight down (children always
    // follow their parent in the region array) and bound the branch leaves.
    for (size_t i = 0; i < tree.regions.size(); ++i) {
        const DecompRegion& r = tree.regions[i];
        if (r.kind != RegionKind::hole_elimination || elim_root_terms[i] < 0) continue;
        for (int c : {r.child[0], r.child[1]}) {
            const DecompRegion& rc = tree.regions[c];
            bool continues = rc.kind == RegionKind::hole_elimination &&
                             rc.elim_hole == r.elim_hole && !rc.elim_root;
            if (continues)
                elim_root_terms[c] = elim_root_terms[i];
            else if (2 * static_cast<int64_t>(rc.core_terminals.size()) >
                     elim_root_terms[i])
                complain(c, "elimination leaf keeps over half the root terminals");
        }
    }

    // Interval growth: per boundary cycle, a child may gain at most two runs.
    auto runs_of_cycle = [&](const std::vector<std::vector<int>>& intervals,
                             const std::vector<int>& cycle) {
        std::vector<char> members(slice.from_graph.size(), 0);
        for (int v : cycle) members[slice.to_graph[v]] = 1;
        int n = 0;
        for (const auto& run : intervals) {
            bool all = !run.empty();
            for (int t : run)
                if (!members[t]) all = false;
            if (all) ++n;
        }
        return n;
    };
    for (size_t i = 0; i < tree.regions.size(); ++i) {
        const DecompRegion& r = tree.regions[i];
        if (r.child[0] < 0) continue;
        for (int c : {r.child[0], r.child[1]}) {
            const DecompRegion& rc = tree.regions[c];
            int pe = runs_of_cycle(r.boundary_intervals, slice.external_cycle);
            int ce = runs_of_cycle(rc.boundary_intervals, slice.external_cycle);
            if (ce > pe + 2) complain(c, "external intervals grew by more than two");
            if (slice.heavy_hole >= 0) {
                int ph = runs_of_cycle(r.boundary_intervals,
                                       slice.hole_cycles[slice.heavy_hole]);
                int ch = runs_of_cycle(rc.boundary_intervals,
                                       slice.hole_cycles[slice.heavy_hole]);
                if (ch > ph + 2) complain(c, "heavy hole intervals grew by more than two");
            }
            if (r.elim_hole >= 0 && rc.elim_hole == r.elim_hole) {
                int ph = runs_of_cycle(r.elim_intervals, slice.hole_cycles[r.elim_hole]);
                int ch = runs_of_cycle(rc.elim_intervals, slice.hole_cycles[r.elim_hole]);
                if (ch > ph + 2)
                    complain(c, "eliminated hole intervals grew by more than two");
            }
        }
    }
    return bad;
}

}  // namespace planemu
