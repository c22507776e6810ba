#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "planemu/generators.hpp"
#include "planemu/oracle.hpp"
#include "planemu/plane_graph.hpp"

using namespace planemu;

namespace {

std::vector<std::vector<int>> adjacency(const PlaneGraph& g) {
    std::vector<std::vector<int>> adj(g.nv);
    for (int v = 0; v < g.nv; ++v) adj[v] = g.neighbors(v);
    return adj;
}

std::string serialized(const PlaneGraph& g) {
    std::ostringstream out;
    write_plane_graph(out, g);
    return out.str();
}

// Simple graph check: no self loops, no parallel edges.
bool simple(const PlaneGraph& g) {
    for (int v = 0; v < g.nv; ++v) {
        std::vector<int> nb = g.neighbors(v);
        std::set<int> uniq(nb.begin(), nb.end());
        if (uniq.size() != nb.size() || uniq.count(v)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("grids have the expected counts and distances") {
    for (auto [a, b] : std::vector<std::pair<int, int>>{{2, 2}, {5, 3}, {7, 7}, {1, 4}}) {
        PlaneGraph g = make_grid(a, b);
        CHECK(g.nv == a * b);
        CHECK(g.num_edges() == a * (b - 1) + b * (a - 1));
        // One bounded cell per grid square, plus the outer face.
        CHECK(g.num_faces() == (a - 1) * (b - 1) + 1);
        CHECK(simple(g));

        auto adj = adjacency(g);
        std::vector<int64_t> dist = bfs_from(adj, 0);
        for (int r = 0; r < b; ++r)
            for (int c = 0; c < a; ++c) CHECK(dist[r * a + c] == r + c);  // Manhattan
    }
    CHECK_THROWS_AS(make_grid(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 5), std::invalid_argument);
}

TEST_CASE("cylinders wrap one direction") {
    for (auto [a, b] : std::vector<std::pair<int, int>>{{3, 1}, {4, 3}, {6, 5}}) {
        PlaneGraph g = make_cylinder(a, b);
        CHECK(g.nv == a * b);
        CHECK(g.num_edges() == a * b + a * (b - 1));
        CHECK(simple(g));

        auto adj = adjacency(g);
        std::vector<int64_t> dist = bfs_from(adj, 0);
        for (int c = 0; c < a; ++c) CHECK(dist[c] == std::min(c, a - c));  // ring metric
        if (b > 1) CHECK(dist[(b - 1) * a] == b - 1);
    }
    CHECK_THROWS_AS(make_cylinder(2, 4), std::invalid_argument);
}

TEST_CASE("random triangulations are simple plane triangulations") {
    for (int n : {3, 4, 10, 60, 200}) {
        PlaneGraph g = make_random_triangulation(n, 7);
        CHECK(g.nv == n);
        CHECK(g.num_edges() == 3 * n - 6);
        CHECK(g.num_faces() == 2 * n - 4);
        CHECK(simple(g));
        for (int f = 0; f < g.num_faces(); ++f) CHECK(g.face_vertices(f).size() == 3);

        // Connected: one BFS reaches everything.
        std::vector<int64_t> dist = bfs_from(adjacency(g), 0);
        CHECK(std::count(dist.begin(), dist.end(), -1) == 0);
    }
    CHECK_THROWS_AS(make_random_triangulation(2, 1), std::invalid_argument);
}

TEST_CASE("generators are deterministic under the seed") {
    CHECK(serialized(make_random_triangulation(40, 5)) ==
          serialized(make_random_triangulation(40, 5)));
    CHECK(serialized(make_random_triangulation(40, 5)) !=
          serialized(make_random_triangulation(40, 6)));
    CHECK(serialized(make_grid(6, 4)) == serialized(make_grid(6, 4)));

    PlaneGraph g = make_grid(6, 6);
    CHECK(terminals_random(g, 7, 11) == terminals_random(g, 7, 11));
    CHECK(terminals_random(g, 7, 11) != terminals_random(g, 7, 12));

    Rng r1(99), r2(99);
    for (int i = 0; i < 16; ++i) CHECK(r1.next() == r2.next());
    CHECK(Rng(1).below(0) == 0);
}

TEST_CASE("corner terminals pick the extremes") {
    std::vector<int> grid_corners = terminals_corners(make_grid(5, 4));
    CHECK(grid_corners == std::vector<int>{0, 4, 15, 19});

    // Every cylinder vertex in a one-row ring has equal degree; the corner
    // rule falls back to extremal ids once the minimum-degree set is large.
    std::vector<int> ring = terminals_corners(make_cylinder(12, 2));
    CHECK(ring == std::vector<int>{0, 23});

    std::vector<int> path_ends = terminals_corners(make_grid(1, 6));
    CHECK(path_ends == std::vector<int>{0, 5});
}

TEST_CASE("random terminals are distinct in-range vertices") {
    PlaneGraph g = make_random_triangulation(50, 3);
    for (int k : {1, 2, 16, 50}) {
        std::vector<int> t = terminals_random(g, k, 21);
        REQUIRE(int(t.size()) == k);
        CHECK(std::is_sorted(t.begin(), t.end()));
        std::set<int> uniq(t.begin(), t.end());
        CHECK(int(uniq.size()) == k);
        CHECK(*t.begin() >= 0);
        CHECK(*t.rbegin() < g.nv);
    }
    CHECK_THROWS_AS(terminals_random(g, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(terminals_random(g, 51, 1), std::invalid_argument);
}
