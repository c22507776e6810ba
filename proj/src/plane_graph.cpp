#include "planemu/plane_graph.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace planemu {

int PlaneGraph::degree(int v) const {
    int h0 = first_out[v];
    if (h0 < 0) return 0;
    int d = 0, h = h0;
    do {
        ++d;
        h = rot_next[h];
    } while (h != h0);
    return d;
}

std::vector<int> PlaneGraph::out_halfedges(int v) const {
    std::vector<int> out;
    int h0 = first_out[v];
    if (h0 < 0) return out;
    int h = h0;
    do {
        out.push_back(h);
        h = rot_next[h];
    } while (h != h0);
    return out;
}

std::vector<int> PlaneGraph::neighbors(int v) const {
    std::vector<int> out;
    for (int h : out_halfedges(v)) out.push_back(head(h));
    return out;
}

std::vector<int> PlaneGraph::face_vertices(int f) const {
    std::vector<int> out;
    out.reserve(face_walk[f].size());
    for (int h : face_walk[f]) out.push_back(origin(h));
    return out;
}

int PlaneGraph::halfedge_between(int u, int v) const {
    int h0 = first_out[u];
    if (h0 < 0) return -1;
    int h = h0;
    do {
        if (head(h) == v) return h;
        h = rot_next[h];
    } while (h != h0);
    return -1;
}

PlaneGraph assemble_embedding(int n, const std::vector<std::pair<int, int>>& arcs,
                              const std::vector<std::vector<int>>& rot_order,
                              int outer_halfedge) {
    PlaneGraph g;
    g.nv = n;
    int m = static_cast<int>(arcs.size());
    int hn = 2 * m;
    g.he_origin.resize(hn);
    for (int i = 0; i < m; ++i) {
        auto [u, v] = arcs[i];
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw embedding_error("arc endpoint out of range");
        g.he_origin[2 * i] = u;
        g.he_origin[2 * i + 1] = v;
    }
    if (static_cast<int>(rot_order.size()) != n)
        throw embedding_error("rotation table size mismatch");

    g.rot_next.assign(hn, -1);
    g.rot_prev.assign(hn, -1);
    g.first_out.assign(n, -1);
    int placed = 0;
    for (int v = 0; v < n; ++v) {
        const auto& order = rot_order[v];
        if (order.empty()) continue;
        g.first_out[v] = order[0];
        for (size_t i = 0; i < order.size(); ++i) {
            int h = order[i];
            if (h < 0 || h >= hn || g.he_origin[h] != v)
                throw embedding_error("rotation lists a half-edge with the wrong origin");
            if (g.rot_next[h] != -1)
                throw embedding_error("half-edge appears twice in rotations");
            int nx = order[(i + 1) % order.size()];
            g.rot_next[h] = nx;
            ++placed;
        }
        for (size_t i = 0; i < order.size(); ++i)
            g.rot_prev[order[(i + 1) % order.size()]] = order[i];
    }
    if (placed != hn) throw embedding_error("rotations do not cover every half-edge");

    // Connectivity over the underlying graph.
    if (n > 0) {
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        seen[0] = 1;
        q.push(0);
        int reached = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            int h0 = g.first_out[u];
            if (h0 < 0) continue;
            int h = h0;
            do {
                int w = g.head(h);
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    q.push(w);
                }
                h = g.rot_next[h];
            } while (h != h0);
        }
        if (reached != n) throw embedding_error("graph is not connected");
    }

    // Trace faces: next_in_face is a permutation of half-edges, so every
    // half-edge lies on exactly one face cycle.
    g.face_of.assign(hn, -1);
    for (int h0 = 0; h0 < hn; ++h0) {
        if (g.face_of[h0] != -1) continue;
        int f = g.num_faces();
        g.face_walk.emplace_back();
        int h = h0;
        do {
            g.face_of[h] = f;
            g.face_walk[f].push_back(h);
            h = g.next_in_face(h);
        } while (h != h0);
    }
    if (n - m + g.num_faces() != 2)
        throw embedding_error("rotation system is not planar (Euler check failed)");

    if (hn > 0) {
        if (outer_halfedge < 0 || outer_halfedge >= hn)
            throw embedding_error("outer half-edge out of range");
        g.outer_face = g.face_of[outer_halfedge];
    }
    return g;
}

PlaneGraph build_embedding(int n, const std::vector<std::vector<int>>& rotations,
                           std::pair<int, int> outer) {
    if (n <= 0) throw embedding_error("graph must have at least one vertex");
    if (static_cast<int>(rotations.size()) != n)
        throw embedding_error("rotation table size mismatch");

    // Collect arcs (u < v once each) and per-vertex half-edge orders.
    std::vector<std::pair<int, int>> arcs;
    std::unordered_map<int64_t, int> arc_id;  // key u * n + v, u < v
    auto key = [n](int u, int v) { return int64_t(std::min(u, v)) * n + std::max(u, v); };
    for (int v = 0; v < n; ++v) {
        for (int w : rotations[v]) {
            if (w < 0 || w >= n) throw embedding_error("neighbor out of range");
            if (w == v) throw embedding_error("self-loops are not supported");
            if (v < w) {
                auto [it, fresh] = arc_id.emplace(key(v, w), static_cast<int>(arcs.size()));
                (void)it;
                if (fresh) arcs.emplace_back(v, w);
            }
        }
    }
    std::vector<std::vector<int>> rot_order(n);
    std::vector<char> fwd_seen(arcs.size(), 0), bwd_seen(arcs.size(), 0);
    for (int v = 0; v < n; ++v) {
        rot_order[v].reserve(rotations[v].size());
        for (int w : rotations[v]) {
            auto it = arc_id.find(key(v, w));
            if (it == arc_id.end())
                throw embedding_error("rotations are not symmetric");
            int a = it->second;
            auto& seen = (arcs[a].first == v) ? fwd_seen : bwd_seen;
            if (seen[a]) throw embedding_error("duplicate neighbor in a rotation");
            seen[a] = 1;
            rot_order[v].push_back(arcs[a].first == v ? 2 * a : 2 * a + 1);
        }
    }
    for (size_t a = 0; a < arcs.size(); ++a)
        if (!fwd_seen[a] || !bwd_seen[a]) throw embedding_error("rotations are not symmetric");

    int outer_he = -1;
    if (!arcs.empty()) {
        auto it = arc_id.find(key(outer.first, outer.second));
        if (outer.first < 0 || outer.first >= n || outer.second < 0 || outer.second >= n ||
            it == arc_id.end())
            throw embedding_error("outer marker names a missing edge");
        outer_he = (arcs[it->second].first == outer.first) ? 2 * it->second : 2 * it->second + 1;
    }
    return assemble_embedding(n, arcs, rot_order, outer_he);
}

PlaneGraph enclose_with_triangle(const PlaneGraph& g) {
    int A = g.nv, B = g.nv + 1, C = g.nv + 2;
    std::vector<std::vector<int>> rot(g.nv + 3);
    if (g.num_edges() == 0) {
        if (g.nv != 1)
            throw embedding_error("cannot enclose an edgeless graph on several vertices");
        rot[0] = {A};
        rot[A] = {B, 0, C};
        rot[B] = {C, A};
        rot[C] = {A, B};
        return build_embedding(g.nv + 3, rot, {A, B});
    }
    if (g.outer_face < 0) throw embedding_error("graph has no outer face marker");

    // One bridge per triangle corner, to three distinct boundary vertices
    // spread along the outer walk: faces between the triangle and the old
    // boundary then have simple walks (a single bridge would pinch the moat
    // at both bridge endpoints).
    const auto& walk = g.face_walk[g.outer_face];
    int m = static_cast<int>(walk.size());
    std::vector<int> pos;  // walk positions whose origin is a first visit
    {
        std::vector<char> seen(g.nv, 0);
        for (int i = 0; i < m; ++i) {
            int v = g.origin(walk[i]);
            if (!seen[v]) {
                seen[v] = 1;
                pos.push_back(i);
            }
        }
    }
    if (pos.size() < 3)
        throw embedding_error("enclosure needs three distinct boundary vertices");
    int q = static_cast<int>(pos.size());
    std::array<int, 3> corner = {A, B, C};
    std::array<int, 3> at = {pos[0], pos[q / 3], pos[2 * q / 3]};

    for (int v = 0; v < g.nv; ++v) rot[v] = g.neighbors(v);
    std::array<int, 3> target;
    for (int j = 0; j < 3; ++j) {
        int i = at[j];
        int h = walk[i];
        int hprev = walk[(i + m - 1) % m];  // head(hprev) == origin(h)
        int u = g.origin(h);
        int x = g.origin(hprev);
        target[j] = u;
        // The outer face turns the corner at u between the half-edges u->x
        // and u->head(h), which are rotation-consecutive; the bridge goes
        // into that corner.
        auto& ru = rot[u];
        auto it = std::find(ru.begin(), ru.end(), x);
        assert(it != ru.end());
        ru.insert(it + 1, corner[j]);
    }
    rot[A] = {B, target[0], C};
    rot[B] = {C, target[1], A};
    rot[C] = {A, target[2], B};
    return build_embedding(g.nv + 3, rot, {A, B});
}

PlaneGraph radial_graph(const PlaneGraph& g) {
    // One node per vertex, one per face, one arc per incidence (= half-edge).
    // Arc h joins origin(h) to the face node of face_of(h).  Around a vertex
    // the incidences follow the rotation; around a face node they follow the
    // face walk, which is orientation-consistent on the sphere.
    int hn = g.num_halfedges();
    int nodes = g.nv + g.num_faces();
    std::vector<std::pair<int, int>> arcs(hn);
    for (int h = 0; h < hn; ++h) arcs[h] = {g.origin(h), g.nv + g.face_of[h]};
    std::vector<std::vector<int>> rot_order(nodes);
    for (int v = 0; v < g.nv; ++v)
        for (int h : g.out_halfedges(v)) rot_order[v].push_back(2 * h);
    for (int f = 0; f < g.num_faces(); ++f)
        for (int h : g.face_walk[f]) rot_order[g.nv + f].push_back(2 * h + 1);
    int marker = g.outer_face >= 0 ? g.face_walk[g.outer_face].front() : -1;
    return assemble_embedding(nodes, arcs, rot_order, marker >= 0 ? 2 * marker + 1 : -1);
}

RadialLevels radial_bfs_levels(const PlaneGraph& g) {
    if (g.outer_face < 0) throw embedding_error("radial BFS needs an outer face");
    RadialLevels r;
    r.vertex_level.assign(g.nv, -1);
    r.face_level.assign(g.num_faces(), -1);
    r.vertex_parent_face.assign(g.nv, -1);
    r.face_parent_vertex.assign(g.num_faces(), -1);

    // BFS over vertex-face incidences; nodes >= nv encode faces.
    std::queue<int> q;
    r.face_level[g.outer_face] = 0;
    q.push(g.nv + g.outer_face);
    while (!q.empty()) {
        int node = q.front();
        q.pop();
        if (node >= g.nv) {
            int f = node - g.nv;
            for (int h : g.face_walk[f]) {
                int v = g.origin(h);
                if (r.vertex_level[v] < 0) {
                    r.vertex_level[v] = r.face_level[f] + 1;
                    r.vertex_parent_face[v] = f;
                    r.max_vertex_level = std::max(r.max_vertex_level, r.vertex_level[v]);
                    q.push(v);
                }
            }
        } else {
            int v = node;
            for (int h : g.out_halfedges(v)) {
                int f = g.face_of[h];
                if (r.face_level[f] < 0) {
                    r.face_level[f] = r.vertex_level[v] + 1;
                    r.face_parent_vertex[f] = v;
                    r.max_face_level = std::max(r.max_face_level, r.face_level[f]);
                    q.push(g.nv + f);
                }
            }
        }
    }
    for (int v = 0; v < g.nv; ++v)
        if (r.vertex_level[v] < 0) throw embedding_error("radial BFS missed a vertex");
    return r;
}

namespace {

// Comment-stripped, non-blank lines.
std::vector<std::string> content_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream probe(line);
        std::string tok;
        if (probe >> tok) lines.push_back(line);
    }
    return lines;
}

}  // namespace

PlaneGraph parse_plane_graph(std::istream& in) {
    std::vector<std::string> lines = content_lines(in);
    if (lines.empty()) throw format_error("empty graph description");
    std::istringstream head(lines[0]);
    int n = 0, m = 0;
    if (!(head >> n >> m) || n <= 0 || m < 0)
        throw format_error("expected 'n m' on the first line");
    if (static_cast<int>(lines.size()) != n + 2)
        throw format_error("expected one rotation line per vertex plus the outer marker");

    std::vector<std::vector<int>> rotations(n);
    std::vector<char> seen(n, 0);
    int64_t degree_total = 0;
    for (int i = 0; i < n; ++i) {
        std::istringstream ls(lines[1 + i]);
        int v;
        if (!(ls >> v) || v < 0 || v >= n) throw format_error("bad vertex id in rotation line");
        if (seen[v]) throw format_error("vertex listed twice");
        seen[v] = 1;
        int w;
        while (ls >> w) {
            rotations[v].push_back(w);
            ++degree_total;
        }
    }
    if (degree_total != 2 * int64_t(m)) throw format_error("edge count disagrees with rotations");

    std::istringstream tail(lines.back());
    std::string keyword;
    int u = -1, v = -1;
    if (!(tail >> keyword >> u >> v) || keyword != "outer")
        throw format_error("expected trailing 'outer u v' line");
    return build_embedding(n, rotations, {u, v});
}

PlaneGraph parse_plane_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open " + path);
    return parse_plane_graph(in);
}

void write_plane_graph(std::ostream& out, const PlaneGraph& g) {
    out << g.nv << ' ' << g.num_edges() << '\n';
    for (int v = 0; v < g.nv; ++v) {
        out << v;
        for (int w : g.neighbors(v)) out << ' ' << w;
        out << '\n';
    }
    if (g.num_edges() == 0) {
        out << "outer 0 0\n";
        return;
    }
    int h = g.face_walk[g.outer_face].front();
    out << "outer " << g.origin(h) << ' ' << g.head(h) << '\n';
}

}  // namespace planemu
