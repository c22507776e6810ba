#include "planemu/builder.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace planemu {

const char* build_mode_name(BuildMode m) {
    switch (m) {
        case BuildMode::automatic: return "auto";
        case BuildMode::dense: return "dense";
        case BuildMode::monge: return "monge";
    }
    return "?";
}

std::optional<BuildMode> build_mode_from_name(const std::string& s) {
    if (s == "auto" || s == "automatic") return BuildMode::automatic;
    if (s == "dense") return BuildMode::dense;
    if (s == "monge") return BuildMode::monge;
    return std::nullopt;
}

namespace {

// Breadth-first distances from `src`, restricted to vertices with a set
// `allowed` flag (an empty mask allows everything).  -1 = unreachable.
std::vector<int64_t> masked_bfs(const std::vector<std::vector<int>>& adj,
                                const std::vector<char>& allowed, int src) {
    assert(allowed.empty() || allowed.size() == adj.size());
    std::vector<int64_t> dist(adj.size(), -1);
    if (!allowed.empty() && !allowed[src]) return dist;
    std::deque<int> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : adj[u]) {
            if (dist[v] >= 0) continue;
            if (!allowed.empty() && !allowed[v]) continue;
            dist[v] = dist[u] + 1;
            queue.push_back(v);
        }
    }
    return dist;
}

std::vector<std::vector<int>> graph_adjacency(const PlaneGraph& g) {
    std::vector<std::vector<int>> adj(g.nv);
    for (int v = 0; v < g.nv; ++v) adj[v] = g.neighbors(v);
    return adj;
}

}  // namespace

FaceDistanceMatrices face_distance_matrices(const std::vector<std::vector<int>>& adj,
                                            const std::vector<char>& allowed,
                                            const std::vector<int>& cycle) {
    int m = static_cast<int>(cycle.size());
    FaceDistanceMatrices fd{TriangularMatrix(m, Orientation::lower),
                            TriangularMatrix(m, Orientation::upper), true};
    for (int i = 0; i < m; ++i) {
        std::vector<int64_t> dist = masked_bfs(adj, allowed, cycle[i]);
        for (int j = 0; j < m; ++j) {
            int64_t d = dist[cycle[j]];
            if (d < 0) fd.complete = false;
            if (i <= j) fd.upper.at(i + 1, j + 1) = d;
            if (i >= j) fd.lower.at(i + 1, j + 1) = d;
        }
    }
    return fd;
}

namespace {

constexpr size_t kTagCount = 9;

// Accumulates the emulator under construction: one portal vertex per graph
// vertex that any piece touches, plus spliced matrix emulators hooked onto
// those portals by weight-0 edges.
struct Assembler {
    const std::vector<std::vector<int>>& adj;  // enclosed graph adjacency
    int n_orig;                                // original vertex count
    EmulatorGraph out;
    std::unordered_map<int, int32_t> portals;
    std::array<PieceStats, kTagCount> acc{};
    int64_t monge_fallbacks = 0;

    Assembler(const std::vector<std::vector<int>>& adj_, int n_orig_)
        : adj(adj_), n_orig(n_orig_) {}

    PieceStats& stat(PieceTag tag) { return acc[static_cast<size_t>(tag)]; }

    int32_t portal_of(int v) {
        auto it = portals.find(v);
        if (it != portals.end()) return it->second;
        int32_t p = out.add_vertex();
        out.set_label({LabelKind::portal, v}, p);
        portals.emplace(v, p);
        return p;
    }

    void edge(int a, int b, int64_t w, PieceTag tag) {
        if (a == b) return;
        assert(w >= 0);
        out.add_edge(portal_of(a), portal_of(b), w, tag);
        stat(tag).edges++;
    }

    // Splices a matrix emulator and hooks its outer row vertices to the
    // portals of `rows` and its outer column vertices to the portals of
    // `cols`.  With `both_directions`, an edge-reversed copy is also spliced
    // and hooked the other way round: reversing every edge of a DAG keeps
    // all path weights, so the copy answers column-to-row queries.
    void splice_matrix(const EmulatorGraph& e, const std::vector<int>& rows,
                       const std::vector<int>& cols, PieceTag tag, bool both_directions) {
        assert(e.weights_normalized);
        std::vector<int32_t> r0(rows.size()), c0(cols.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            auto v = e.vertex_of({LabelKind::row_outer, static_cast<int>(i) + 1});
            if (!v) throw emulator_error("matrix emulator lacks an outer row label");
            r0[i] = *v;
        }
        for (size_t j = 0; j < cols.size(); ++j) {
            auto v = e.vertex_of({LabelKind::col_outer, static_cast<int>(j) + 1});
            if (!v) throw emulator_error("matrix emulator lacks an outer column label");
            c0[j] = *v;
        }
        int32_t off = out.splice(e, tag);
        for (size_t i = 0; i < rows.size(); ++i)
            out.add_edge(portal_of(rows[i]), off + r0[i], 0, tag);
        for (size_t j = 0; j < cols.size(); ++j)
            out.add_edge(off + c0[j], portal_of(cols[j]), 0, tag);
        stat(tag).vertices += e.vertex_count;
        stat(tag).edges +=
            static_cast<int64_t>(e.edges.size() + rows.size() + cols.size());
        if (!both_directions) return;

        EmulatorGraph rev;
        rev.vertex_count = e.vertex_count;
        for (const EmulatorEdge& ed : e.edges) rev.add_edge(ed.dst, ed.src, ed.weight, ed.tag);
        int32_t off2 = out.splice(rev, tag);
        for (size_t j = 0; j < cols.size(); ++j)
            out.add_edge(portal_of(cols[j]), off2 + c0[j], 0, tag);
        for (size_t i = 0; i < rows.size(); ++i)
            out.add_edge(off2 + r0[i], portal_of(rows[i]), 0, tag);
        stat(tag).vertices += e.vertex_count;
        stat(tag).edges +=
            static_cast<int64_t>(e.edges.size() + rows.size() + cols.size());
    }

    // ── Recursive piece emission ─────────────────────────────────────
    //
    // A piece is an index rectangle over two vertex runs together with the
    // BFS distances between them under one mask.  Blocks that validate as
    // unit Monge in one of the four traversal reflections become matrix
    // emulators; blocks that fail are split along their longer side, so
    // validation failures — which concentrate where shortest paths switch
    // sides of a hole — only fragment their own neighborhood.  Tiny or
    // partly unreachable blocks become direct edges.  Either way every
    // covered pair gets its exact masked distance.

    struct Block {
        const std::vector<int>& rows;
        const std::vector<int>& cols;
        std::vector<std::vector<int64_t>> d;  // rows x cols; -1 unreachable
        PieceTag tag;
    };

    bool block_complete(const Block& b, int r0, int r1, int c0, int c1) const {
        for (int i = r0; i < r1; ++i)
            for (int j = c0; j < c1; ++j)
                if (b.d[i][j] < 0) return false;
        return true;
    }

    void dense_block(const Block& b, int r0, int r1, int c0, int c1) {
        for (int i = r0; i < r1; ++i)
            for (int j = c0; j < c1; ++j) {
                int64_t w = b.d[i][j];
                if (w < 0 || b.rows[i] == b.cols[j]) continue;
                edge(b.rows[i], b.cols[j], w, b.tag);
                edge(b.cols[j], b.rows[i], w, b.tag);
            }
    }

    bool try_monge_block(const Block& b, int r0, int r1, int c0, int c1) {
        int nr = r1 - r0, nc = c1 - c0;
        for (int o = 0; o < 4; ++o) {
            bool rrev = (o & 1) != 0, crev = (o & 2) != 0;
            IntMatrix mtx(nr, nc);
            for (int i = 0; i < nr; ++i)
                for (int j = 0; j < nc; ++j)
                    mtx.at(i + 1, j + 1) =
                        b.d[r0 + (rrev ? nr - 1 - i : i)][c0 + (crev ? nc - 1 - j : j)];
            if (!is_unit_monge(mtx)) continue;
            std::vector<int> rs(b.rows.begin() + r0, b.rows.begin() + r1);
            std::vector<int> cs(b.cols.begin() + c0, b.cols.begin() + c1);
            if (rrev) std::reverse(rs.begin(), rs.end());
            if (crev) std::reverse(cs.begin(), cs.end());
            try {
                EmulatorGraph piece = build_monge_emulator(decompose(mtx, false));
                splice_matrix(piece, rs, cs, b.tag, true);
                return true;
            } catch (const monge_error&) {
                // validation raced past is_unit_monge; try the next reflection
            }
        }
        return false;
    }

    static bool block_small(int nr, int nc) {
        return int64_t(nr) * nc <= 2 * int64_t(nr + nc) + 8;
    }

    void rect_rec(const Block& b, int r0, int r1, int c0, int c1) {
        int nr = r1 - r0, nc = c1 - c0;
        if (nr == 0 || nc == 0) return;
        if (block_small(nr, nc)) {
            dense_block(b, r0, r1, c0, c1);
            return;
        }
        if (block_complete(b, r0, r1, c0, c1)) {
            if (try_monge_block(b, r0, r1, c0, c1)) return;
            ++monge_fallbacks;
        }
        if (nr >= nc) {
            int rm = r0 + nr / 2;
            rect_rec(b, r0, rm, c0, c1);
            rect_rec(b, rm, r1, c0, c1);
        } else {
            int cm = c0 + nc / 2;
            rect_rec(b, r0, r1, c0, cm);
            rect_rec(b, r0, r1, cm, c1);
        }
    }

    // All distances between `rows` and `cols` inside the `allowed` mask,
    // both directions.  `rows` and `cols` must each walk a path of the graph
    // (consecutive entries adjacent) so the vertical difference condition of
    // the unit-Monge validation can hold.
    void emit_rect(const std::vector<int>& rows, const std::vector<int>& cols,
                   const std::vector<char>& allowed, PieceTag tag) {
        int nr = static_cast<int>(rows.size());
        int nc = static_cast<int>(cols.size());
        if (nr == 0 || nc == 0) return;
        Block b{rows, cols, {}, tag};
        b.d.resize(nr);
        for (int i = 0; i < nr; ++i) {
            std::vector<int64_t> dist = masked_bfs(adj, allowed, rows[i]);
            b.d[i].resize(nc);
            for (int j = 0; j < nc; ++j) b.d[i][j] = dist[cols[j]];
        }
        stat(tag).count++;
        rect_rec(b, 0, nr, 0, nc);
    }

    // Triangular pair attempt over run[lo..hi): the upper emulator answers
    // i<j, the lower one i>j (masked BFS distances are symmetric, so the
    // reverse query direction is the mirrored pair).
    bool try_triangular_block(const Block& b, int lo, int hi, bool reversed) {
        int m = hi - lo;
        TriangularMatrix u(m, Orientation::upper), l(m, Orientation::lower);
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j) {
                int ri = reversed ? lo + m - i : lo + i - 1;
                int rj = reversed ? lo + m - j : lo + j - 1;
                if (i <= j) u.at(i, j) = b.d[ri][rj];
                if (i >= j) l.at(i, j) = b.d[ri][rj];
            }
        EmulatorGraph up, low;
        try {
            up = build_triangular_emulator(u, true);
            low = build_triangular_emulator(l, true);
        } catch (const monge_error&) {
            return false;
        }
        std::vector<int> ids(b.rows.begin() + lo, b.rows.begin() + hi);
        if (reversed) std::reverse(ids.begin(), ids.end());
        splice_matrix(up, ids, ids, b.tag, false);
        splice_matrix(low, ids, ids, b.tag, false);
        return true;
    }

    void sym_rec(const Block& b, int lo, int hi) {
        int m = hi - lo;
        if (m < 2) return;
        if (m <= 6 || !block_complete(b, lo, hi, lo, hi)) {
            for (int i = lo; i < hi; ++i)
                for (int j = lo; j < hi; ++j) {
                    if (i == j || b.rows[i] == b.rows[j]) continue;
                    int64_t w = b.d[i][j];
                    if (w >= 0) edge(b.rows[i], b.rows[j], w, b.tag);
                }
            return;
        }
        if (try_triangular_block(b, lo, hi, false)) return;
        if (try_triangular_block(b, lo, hi, true)) return;
        ++monge_fallbacks;
        int mid = lo + m / 2;
        sym_rec(b, lo, mid);
        sym_rec(b, mid, hi);
        rect_rec(b, lo, mid, mid, hi);
    }

    // Pairwise distances within one run.
    void emit_symmetric_run(const std::vector<int>& run, const std::vector<char>& allowed,
                            PieceTag tag) {
        int m = static_cast<int>(run.size());
        if (m < 2) return;
        Block b{run, run, {}, tag};
        b.d.resize(m);
        for (int i = 0; i < m; ++i) {
            std::vector<int64_t> dist = masked_bfs(adj, allowed, run[i]);
            b.d[i].resize(m);
            for (int j = 0; j < m; ++j) b.d[i][j] = dist[run[j]];
        }
        stat(tag).count++;
        sym_rec(b, 0, m);
    }

    // All distances within and between a family of runs under one mask.
    void run_family(const std::vector<std::vector<int>>& runs,
                    const std::vector<char>& allowed, PieceTag tag) {
        for (const auto& r : runs) emit_symmetric_run(r, allowed, tag);
        for (size_t i = 0; i < runs.size(); ++i)
            for (size_t j = i + 1; j < runs.size(); ++j)
                emit_rect(runs[i], runs[j], allowed, tag);
    }
};

// Maximal runs of kept values; with `cyclic`, a run wrapping past the end is
// joined.  Used to cut enclosure vertices (ids >= n_orig) out of cycles while
// keeping each piece row a contiguous walk of the graph.
std::vector<std::vector<int>> keep_runs(const std::vector<int>& vals,
                                        const std::vector<char>& keep, bool cyclic) {
    int m = static_cast<int>(vals.size());
    std::vector<std::vector<int>> runs;
    std::vector<std::pair<int, int>> segs;  // (start, length)
    int i = 0;
    while (i < m) {
        if (!keep[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j < m && keep[j]) ++j;
        segs.emplace_back(i, j - i);
        i = j;
    }
    bool wrap = cyclic && segs.size() >= 2 && segs.front().first == 0 &&
                segs.back().first + segs.back().second == m;
    for (size_t s = wrap ? 1 : 0; s < segs.size(); ++s) {
        auto [st, len] = segs[s];
        runs.emplace_back(vals.begin() + st, vals.begin() + st + len);
    }
    if (wrap) {
        auto& joined = runs.back();
        joined.insert(joined.end(), vals.begin(), vals.begin() + segs.front().second);
    } else if (segs.empty()) {
        return runs;
    }
    return runs;
}

// Drives the component tree: per (unpruned) component it emits the boundary
// family of its slice annulus, decomposes the slice, and emits the region
// pieces.
struct MongeBuilder {
    const PlaneGraph& ge;         // enclosed graph
    int n_orig;                   // vertices of the original graph
    const RadialLevels& levels;
    const ComponentTree& tree;
    const std::vector<char>& term_mask;  // over ge.nv
    Assembler& emit;
    BuildResult& res;
    int components_built = 0;

    std::vector<std::vector<int>> split_real(const std::vector<int>& verts, bool cyclic) const {
        std::vector<char> keep(verts.size());
        for (size_t i = 0; i < verts.size(); ++i) keep[i] = verts[i] < n_orig;
        return keep_runs(verts, keep, cyclic);
    }

    // Runs of a slice-local cycle restricted to this region's vertices (and
    // to real, original-graph ids), reported as graph ids.
    std::vector<std::vector<int>> cycle_runs_in(const SliceTriangulation& s,
                                                const std::vector<int>& cyc,
                                                const std::vector<char>& lmark) const {
        std::vector<int> gids(cyc.size());
        std::vector<char> keep(cyc.size());
        for (size_t i = 0; i < cyc.size(); ++i) {
            int lv = cyc[i];
            int gv = s.to_graph[lv];
            gids[i] = gv;
            keep[i] = lmark[lv] && gv >= 0 && gv < n_orig;
        }
        return keep_runs(gids, keep, true);
    }

    // Local mark of a region's faces, and the matching graph-id mask with the
    // region's wholly-contained holes filled in (paths may dip through them).
    void region_masks(const SliceTriangulation& s, const Component& K, const DecompRegion& R,
                      std::vector<char>& lmark, std::vector<char>& allowed) const {
        lmark.assign(s.num_vertices(), 0);
        for (int f : R.faces)
            for (int v : s.faces[f].v) lmark[v] = 1;
        allowed.assign(ge.nv, 0);
        for (int lv = 0; lv < s.n_real; ++lv) {
            int gv = s.to_graph[lv];
            if (lmark[lv] && gv >= 0 && gv < n_orig) allowed[gv] = 1;
        }
        for (int h : R.holes)
            for (int v : tree.nodes[K.children[h]].vertices)
                if (v < n_orig) allowed[v] = 1;
    }

    void do_component(int c, std::set<int>& split_holes) {
        const Component& K = tree.nodes[c];
        int heavy = K.heavy_child;

        // Boundary family: the slice boundary cycles, measured in the annulus
        // between them (non-heavy child interiors stay in: they are part of
        // every shortest path that dips below this slice but not below the
        // heavy child).
        std::vector<char> annulus(ge.nv, 0);
        for (int v : K.vertices)
            if (v < n_orig) annulus[v] = 1;
        if (heavy >= 0) {
            for (int v : tree.nodes[heavy].vertices)
                if (v < n_orig) annulus[v] = 0;
            for (int v : tree.nodes[heavy].boundary)
                if (v < n_orig) annulus[v] = 1;
        }
        std::vector<std::vector<int>> bruns = split_real(K.boundary, true);
        if (heavy >= 0) {
            for (auto& r : split_real(tree.nodes[heavy].boundary, true))
                bruns.push_back(std::move(r));
        }
        emit.run_family(bruns, annulus, PieceTag::b2b);

        SliceTriangulation slice = triangulate_slice(ge, levels, tree, c);

        std::vector<std::vector<int>> hole_terms(slice.hole_cycles.size());
        for (size_t h = 0; h < K.children.size(); ++h) {
            if (static_cast<int>(h) == slice.heavy_hole) continue;
            const Component& H = tree.nodes[K.children[h]];
            std::vector<char> on_boundary(ge.nv, 0);
            for (int v : H.boundary) on_boundary[v] = 1;
            for (int v : H.vertices)
                if (term_mask[v] && !on_boundary[v]) hole_terms[h].push_back(v);
        }
        DecompTree dt = decompose_slice(slice, term_mask, hole_terms);
        for (const DecompRegion& r : dt.regions)
            if (r.elim_hole >= 0) split_holes.insert(r.elim_hole);

        for (const DecompRegion& R : dt.regions) {
            std::vector<char> lmark, allowed;
            region_masks(slice, K, R, lmark, allowed);
            std::vector<char> wholly(slice.hole_cycles.size(), 0);
            for (int h : R.holes) wholly[h] = 1;

            if (R.kind != RegionKind::leaf) {
                std::vector<int> csep;
                for (int v : R.cycle_real)
                    if (v < n_orig) csep.push_back(v);
                if (!csep.empty()) {
                    // Terminals to the separator, measured region-wide so a
                    // shortest path needs the separator at only one point.
                    if (!R.terminals.empty()) emit.stat(PieceTag::t2sep).count++;
                    for (int cv : csep) {
                        if (R.terminals.empty()) break;
                        std::vector<int64_t> dist = masked_bfs(emit.adj, allowed, cv);
                        for (int t : R.terminals) {
                            if (t == cv || dist[t] < 0) continue;
                            emit.edge(t, cv, dist[t], PieceTag::t2sep);
                            emit.edge(cv, t, dist[t], PieceTag::t2sep);
                        }
                    }
                    // Hole arcs (of holes not wholly inside) to the separator.
                    for (size_t h = 0; h < slice.hole_cycles.size(); ++h) {
                        if (wholly[h] || slice.hole_apex[h] < 0) continue;
                        for (const auto& run : cycle_runs_in(slice, slice.hole_cycles[h], lmark))
                            emit.emit_rect(run, csep, allowed, PieceTag::sep2h);
                    }
                    // Children's boundary intervals to the separator: the
                    // metric is the child side plus the separator itself.
                    for (int side = 0; side < 2; ++side) {
                        if (R.child[side] < 0) continue;
                        const DecompRegion& RC = dt.regions[R.child[side]];
                        std::vector<char> clmark, callowed;
                        region_masks(slice, K, RC, clmark, callowed);
                        for (int v : csep) callowed[v] = 1;
                        for (const auto& iv : RC.boundary_intervals)
                            for (const auto& run : split_real(iv, false))
                                emit.emit_rect(run, csep, callowed, PieceTag::sep2b);
                    }
                }
                if (R.elim_root && R.elim_hole >= 0) {
                    // First split of a hole elimination: connect the hole
                    // being eliminated to the region boundary, measured
                    // outside that hole's interior.
                    const Component& HC = tree.nodes[K.children[R.elim_hole]];
                    std::vector<char> outside = allowed;
                    for (int v : HC.vertices)
                        if (v < n_orig) outside[v] = 0;
                    for (int v : HC.boundary)
                        if (v < n_orig) outside[v] = 1;
                    auto hruns = cycle_runs_in(slice, slice.hole_cycles[R.elim_hole], lmark);
                    for (const auto& hrun : hruns)
                        for (const auto& iv : R.boundary_intervals)
                            for (const auto& brun : split_real(iv, false))
                                emit.emit_rect(hrun, brun, outside, PieceTag::h2b);
                }
            } else {
                std::vector<std::vector<int>> hruns;
                for (size_t h = 0; h < slice.hole_cycles.size(); ++h) {
                    if (wholly[h] || slice.hole_apex[h] < 0) continue;
                    for (auto& run : cycle_runs_in(slice, slice.hole_cycles[h], lmark))
                        hruns.push_back(std::move(run));
                }
                for (int t : R.terminals) {
                    std::vector<int64_t> dist = masked_bfs(emit.adj, allowed, t);
                    bool any = false;
                    auto connect = [&](const std::vector<int>& vs) {
                        for (int v : vs) {
                            if (v == t || dist[v] < 0) continue;
                            emit.edge(t, v, dist[v], PieceTag::leaf_t2b);
                            emit.edge(v, t, dist[v], PieceTag::leaf_t2b);
                            any = true;
                        }
                    };
                    for (const auto& iv : R.boundary_intervals)
                        for (const auto& run : split_real(iv, false)) connect(run);
                    for (const auto& run : hruns) connect(run);
                    if (any) emit.stat(PieceTag::leaf_t2b).count++;
                }
                emit.run_family(hruns, allowed, PieceTag::leaf_h2b);
            }
        }

        res.slices.push_back(std::move(slice));
        res.decomp_trees.push_back(std::move(dt));
    }

    void run() {
        size_t nn = tree.nodes.size();
        std::vector<char> pruned(nn, 0), has_term(nn, 0);
        for (size_t c = 0; c < nn; ++c)
            for (int v : tree.nodes[c].vertices)
                if (term_mask[v]) {
                    has_term[c] = 1;
                    break;
                }
        // Holes whose interior some shortest path may cross because a
        // region decomposition split them; their subtrees stay live even
        // without terminals.
        std::vector<std::set<int>> split(nn);
        for (size_t c = 0; c < nn; ++c) {
            const Component& K = tree.nodes[c];
            if (c > 0) {
                int p = K.parent;
                if (pruned[p]) {
                    pruned[c] = 1;
                } else if (static_cast<int>(c) != tree.nodes[p].heavy_child && !has_term[c]) {
                    int hidx = -1;
                    const auto& ch = tree.nodes[p].children;
                    for (size_t i = 0; i < ch.size(); ++i)
                        if (ch[i] == static_cast<int>(c)) {
                            hidx = static_cast<int>(i);
                            break;
                        }
                    if (split[p].find(hidx) == split[p].end()) pruned[c] = 1;
                }
            }
            if (pruned[c]) continue;
            do_component(static_cast<int>(c), split[c]);
            ++components_built;
        }
    }
};

// All-pairs terminal distances by breadth-first search, as direct edges.
EmulatorGraph build_dense_graph(const std::vector<std::vector<int>>& adj,
                                const std::vector<int>& terms) {
    EmulatorGraph g;
    std::vector<int32_t> tv(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) {
        tv[i] = g.add_vertex();
        g.set_label({LabelKind::terminal, terms[i]}, tv[i]);
    }
    std::vector<char> no_mask;
    for (size_t i = 0; i < terms.size(); ++i) {
        std::vector<int64_t> dist = masked_bfs(adj, no_mask, terms[i]);
        for (size_t j = 0; j < terms.size(); ++j) {
            if (i == j) continue;
            int64_t d = dist[terms[j]];
            if (d < 0) continue;
            g.add_edge(tv[i], tv[j], d, PieceTag::dense);
        }
    }
    g.weights_normalized = true;
    return g;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    return out;
}

}  // namespace

std::string BuildStats::to_json() const {
    std::ostringstream os;
    os << "{\"schema\": 1";
    os << ", \"n\": " << n << ", \"k\": " << k;
    os << ", \"mode_requested\": \"" << mode_requested << "\"";
    os << ", \"mode_used\": \"" << mode_used << "\"";
    os << ", \"width\": " << width << ", \"offset\": " << offset;
    os << ", \"fallback\": " << (fallback ? "true" : "false");
    os << ", \"fallback_reason\": \"" << json_escape(fallback_reason) << "\"";
    os << ", \"monge_fallback_pieces\": " << monge_fallback_pieces;
    os << ", \"total_vertices\": " << total_vertices;
    os << ", \"total_edges\": " << total_edges;
    os << ", \"components\": " << components << ", \"regions\": " << regions;
    os << ", \"pieces\": {";
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (i) os << ", ";
        const auto& [name, ps] = pieces[i];
        os << "\"" << name << "\": {\"vertices\": " << ps.vertices
           << ", \"edges\": " << ps.edges << ", \"count\": " << ps.count << "}";
    }
    os << "}}";
    return os.str();
}

BuildResult build_emulator(const PlaneGraph& g, const std::vector<int>& terminals,
                           const BuildOptions& opts) {
    int n = g.nv;
    if (terminals.empty()) throw std::invalid_argument("need at least one terminal");
    for (int t : terminals)
        if (t < 0 || t >= n) throw std::invalid_argument("terminal out of range");
    std::vector<int> terms = terminals;
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    int k = static_cast<int>(terms.size());

    int w = opts.width > 0
                ? opts.width
                : static_cast<int>(std::ceil(std::sqrt(double(n) / double(k))));
    w = std::clamp(w, 1, n);

    BuildResult res;
    BuildStats& st = res.stats;
    st.n = n;
    st.k = k;
    st.mode_requested = build_mode_name(opts.mode);
    st.width = w;

    std::vector<std::vector<int>> adj0 = graph_adjacency(g);

    std::optional<EmulatorGraph> monge;
    std::array<PieceStats, kTagCount> monge_acc{};
    int64_t monge_fallbacks = 0;
    int monge_components = 0, monge_offset = 0;
    if (opts.mode != BuildMode::dense) {
        try {
            PlaneGraph ge = enclose_with_triangle(g);
            RadialLevels levels = radial_bfs_levels(ge);
            ComponentTree tree = build_component_tree(ge, levels, w);
            std::vector<std::vector<int>> adj = graph_adjacency(ge);
            std::vector<char> term_mask(ge.nv, 0);
            for (int t : terms) term_mask[t] = 1;

            Assembler emit(adj, n);
            for (int t : terms) {
                int32_t p = emit.portal_of(t);
                emit.out.set_label({LabelKind::terminal, t}, p);
            }
            MongeBuilder mb{ge, n, levels, tree, term_mask, emit, res};
            mb.run();

            EmulatorGraph mg = std::move(emit.out);
            std::vector<int32_t> sources;
            for (int t : terms) sources.push_back(*mg.vertex_of({LabelKind::terminal, t}));
            mg.prune_unreachable(sources);
            mg.weights_normalized = true;
            monge = std::move(mg);
            monge_acc = emit.acc;
            monge_fallbacks = emit.monge_fallbacks;
            monge_components = mb.components_built;
            monge_offset = tree.offset;
        } catch (const structure_error& e) {
            st.fallback = true;
            st.fallback_reason = e.what();
            res.decomp_trees.clear();
            res.slices.clear();
        } catch (const embedding_error& e) {
            st.fallback = true;
            st.fallback_reason = e.what();
            res.decomp_trees.clear();
            res.slices.clear();
        }
    }

    std::optional<EmulatorGraph> dense;
    if (opts.mode != BuildMode::monge || !monge)
        dense = build_dense_graph(adj0, terms);
    if (opts.mode == BuildMode::monge && !monge)
        throw structure_error("monge construction failed: " + st.fallback_reason);

    bool use_monge;
    switch (opts.mode) {
        case BuildMode::dense: use_monge = false; break;
        case BuildMode::monge: use_monge = true; break;
        default:
            use_monge = monge && monge->size_cost() < dense->size_cost();
            break;
    }

    res.graph = use_monge ? std::move(*monge) : std::move(*dense);
    st.mode_used = use_monge ? "monge" : "dense";
    st.monge_fallback_pieces = monge ? monge_fallbacks : 0;
    st.components = monge ? monge_components : 0;
    st.offset = monge ? monge_offset : 0;
    for (const DecompTree& dt : res.decomp_trees)
        st.regions += static_cast<int>(dt.regions.size());
    st.total_vertices = res.graph.vertex_count;
    st.total_edges = static_cast<int64_t>(res.graph.edges.size());
    if (use_monge) {
        for (size_t i = 0; i < kTagCount; ++i) {
            const PieceStats& ps = monge_acc[i];
            if (ps.count == 0 && ps.edges == 0 && ps.vertices == 0) continue;
            st.pieces.emplace_back(piece_tag_name(static_cast<PieceTag>(i)), ps);
        }
    } else {
        PieceStats ps;
        ps.vertices = res.graph.vertex_count;
        ps.edges = static_cast<int64_t>(res.graph.edges.size());
        ps.count = 1;
        st.pieces.emplace_back("dense", ps);
    }

    for (const EmulatorEdge& e : res.graph.edges)
        if (e.weight < 0 || e.weight > n)
            throw emulator_error("edge weight out of range: " +
                                 std::to_string(e.weight) + " not in [0, " +
                                 std::to_string(n) + "] (piece " +
                                 piece_tag_name(e.tag) + ")");
    res.graph.weights_normalized = true;
    return res;
}

}  // namespace planemu
