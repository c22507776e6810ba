#include "planemu/generators.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace planemu {

PlaneGraph make_grid(int a, int b) {
    if (a < 1 || b < 1 || a * b < 2) throw std::invalid_argument("grid is too small");
    std::vector<std::vector<int>> rot(a * b);
    for (int r = 0; r < b; ++r)
        for (int c = 0; c < a; ++c) {
            int v = r * a + c;
            if (c + 1 < a) rot[v].push_back(v + 1);  // east
            if (r + 1 < b) rot[v].push_back(v + a);  // north
            if (c > 0) rot[v].push_back(v - 1);      // west
            if (r > 0) rot[v].push_back(v - a);      // south
        }
    int second = a > 1 ? 1 : a;
    return build_embedding(a * b, rot, {0, second});
}

PlaneGraph make_cylinder(int a, int b) {
    if (a < 3 || b < 1) throw std::invalid_argument("cylinder is too small");
    std::vector<std::vector<int>> rot(a * b);
    for (int r = 0; r < b; ++r)
        for (int c = 0; c < a; ++c) {
            int v = r * a + c;
            rot[v].push_back(r * a + (c + 1) % a);  // east, wrapping
            if (r + 1 < b) rot[v].push_back(v + a);
            rot[v].push_back(r * a + (c + a - 1) % a);  // west, wrapping
            if (r > 0) rot[v].push_back(v - a);
        }
    return build_embedding(a * b, rot, {0, 1});
}

namespace {

uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<uint64_t>(u) << 32) | static_cast<uint64_t>(v);
}

}  // namespace

PlaneGraph make_random_triangulation(int n, uint64_t seed) {
    if (n < 3) throw std::invalid_argument("triangulation needs at least three vertices");
    Rng rng(seed);

    // Oriented bounded triangles; the outer face stays the hull (0, 1, 2).
    std::vector<std::array<int, 3>> tris{{{0, 1, 2}}};
    std::unordered_map<uint64_t, std::array<int, 2>> flanks;  // -1 marks the hull side
    std::unordered_set<uint64_t> edges;
    for (int i = 0; i < 3; ++i) {
        uint64_t k = edge_key(i, (i + 1) % 3);
        flanks[k] = {0, -1};
        edges.insert(k);
    }
    auto replace_flank = [&flanks](uint64_t k, int from, int to) {
        auto& f = flanks[k];
        if (f[0] == from)
            f[0] = to;
        else
            f[1] = to;
    };

    for (int x = 3; x < n; ++x) {
        int i = static_cast<int>(rng.below(tris.size()));
        auto [a, b, c] = tris[i];
        int j1 = static_cast<int>(tris.size());
        int j2 = j1 + 1;
        tris[i] = {a, b, x};
        tris.push_back({b, c, x});
        tris.push_back({c, a, x});
        replace_flank(edge_key(b, c), i, j1);
        replace_flank(edge_key(c, a), i, j2);
        flanks[edge_key(a, x)] = {i, j2};
        flanks[edge_key(b, x)] = {i, j1};
        flanks[edge_key(c, x)] = {j1, j2};
        edges.insert(edge_key(a, x));
        edges.insert(edge_key(b, x));
        edges.insert(edge_key(c, x));
    }

    // Diagonal flips for mixing.  A flip needs an internal edge whose quad
    // diagonal is not already present.
    auto directed_third = [&tris](int t, int u, int v) {
        // Third vertex of triangle t if its walk contains u -> v, else -1.
        for (int s = 0; s < 3; ++s)
            if (tris[t][s] == u && tris[t][(s + 1) % 3] == v) return tris[t][(s + 2) % 3];
        return -1;
    };
    for (int attempt = 0; attempt < 6 * n; ++attempt) {
        int t = static_cast<int>(rng.below(tris.size()));
        int s = static_cast<int>(rng.below(3));
        int u = tris[t][s], v = tris[t][(s + 1) % 3];
        auto f = flanks[edge_key(u, v)];
        if (f[1] < 0) continue;  // hull edge
        int t1 = f[0], t2 = f[1];
        int p = directed_third(t1, u, v);
        if (p < 0) {
            std::swap(t1, t2);
            p = directed_third(t1, u, v);
        }
        int q = directed_third(t2, v, u);
        if (p < 0 || q < 0) throw embedding_error("triangulation flanks are inconsistent");
        if (p == q || edges.count(edge_key(p, q))) continue;
        tris[t1] = {u, q, p};
        tris[t2] = {v, p, q};
        edges.erase(edge_key(u, v));
        flanks.erase(edge_key(u, v));
        edges.insert(edge_key(p, q));
        flanks[edge_key(p, q)] = {t1, t2};
        replace_flank(edge_key(u, q), t2, t1);
        replace_flank(edge_key(v, p), t1, t2);
    }

    // Rotations from the triangle orientation: a bounded face walking
    // u -> v -> w puts w right after u around v.
    std::vector<std::unordered_map<int, int>> succ(n);
    for (const auto& t : tris) {
        succ[t[1]][t[0]] = t[2];
        succ[t[2]][t[1]] = t[0];
        succ[t[0]][t[2]] = t[1];
    }
    std::vector<std::vector<int>> rot(n);
    for (int v = 0; v < n; ++v) {
        std::unordered_set<int> values;
        for (auto [from, to] : succ[v]) values.insert(to);
        int start = -1;
        for (auto [from, to] : succ[v])
            if (!values.count(from) && (start < 0 || from < start)) start = from;
        if (start < 0)
            for (auto [from, to] : succ[v])
                if (start < 0 || from < start) start = from;
        int cur = start;
        while (true) {
            rot[v].push_back(cur);
            auto it = succ[v].find(cur);
            if (it == succ[v].end()) break;  // hull gap: the outer face corner
            cur = it->second;
            if (cur == start) break;
            if (rot[v].size() > succ[v].size() + 1)
                throw embedding_error("triangulation rotation does not close");
        }
        size_t expected = succ[v].size() + (v < 3 ? 1 : 0);
        if (rot[v].size() != expected)
            throw embedding_error("triangulation rotation misses neighbors");
    }
    return build_embedding(n, rot, {1, 0});
}

std::vector<int> terminals_corners(const PlaneGraph& g) {
    if (g.nv < 2) return {0};
    // Corners are the minimum-degree vertices (4 for a grid, the two ends
    // for a path).  When that set is large — cycles, cylinders — fall back
    // to the extremal ids.
    std::vector<int> deg(g.nv, 0);
    for (int v = 0; v < g.nv; ++v) deg[v] = static_cast<int>(g.neighbors(v).size());
    int mind = *std::min_element(deg.begin(), deg.end());
    std::vector<int> corners;
    for (int v = 0; v < g.nv; ++v)
        if (deg[v] == mind) corners.push_back(v);
    if (corners.size() > 8) return {0, g.nv - 1};
    return corners;
}

std::vector<int> terminals_random(const PlaneGraph& g, int k, uint64_t seed) {
    if (k < 1 || k > g.nv) throw std::invalid_argument("terminal count out of range");
    Rng rng(seed);
    std::vector<int> ids(g.nv);
    for (int i = 0; i < g.nv; ++i) ids[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.below(g.nv - i));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(k);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace planemu
