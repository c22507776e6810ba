#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "planemu/plane_graph.hpp"

using namespace planemu;

namespace {

PlaneGraph triangle() {
    std::vector<std::vector<int>> rot = {{1, 2}, {2, 0}, {0, 1}};
    return build_embedding(3, rot, {1, 0});
}

// Unit square 0(0,0) 1(1,0) 2(1,1) 3(0,1) with the 0-2 diagonal.
PlaneGraph square_with_diagonal() {
    std::vector<std::vector<int>> rot = {
        {3, 2, 1}, {0, 2}, {1, 0, 3}, {2, 0}};
    return build_embedding(4, rot, {1, 0});
}

std::set<int> face_vertex_set(const PlaneGraph& g, int f) {
    auto vs = g.face_vertices(f);
    return {vs.begin(), vs.end()};
}

}  // namespace

TEST_CASE("triangle embeds with two faces") {
    PlaneGraph g = triangle();
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_edges() == 3);
    REQUIRE(g.num_faces() == 2);
    CHECK(g.outer_face >= 0);
    for (int f = 0; f < 2; ++f) {
        CHECK(g.face_walk[f].size() == 3);
        CHECK(face_vertex_set(g, f) == std::set<int>{0, 1, 2});
    }
}

TEST_CASE("square with diagonal splits into two triangles") {
    PlaneGraph g = square_with_diagonal();
    CHECK(g.num_edges() == 5);
    REQUIRE(g.num_faces() == 3);
    CHECK(g.face_walk[g.outer_face].size() == 4);
    std::set<std::set<int>> inner;
    for (int f = 0; f < g.num_faces(); ++f)
        if (f != g.outer_face) inner.insert(face_vertex_set(g, f));
    CHECK(inner == std::set<std::set<int>>{{0, 1, 2}, {0, 2, 3}});
}

TEST_CASE("halfedge structure is involutive and closed") {
    PlaneGraph g = square_with_diagonal();
    for (int h = 0; h < g.num_halfedges(); ++h) {
        CHECK(g.twin(g.twin(h)) == h);
        CHECK(g.origin(g.twin(h)) == g.head(h));
        // next_in_face keeps the walk on one face and chains head to origin.
        int nx = g.next_in_face(h);
        CHECK(g.face_of[nx] == g.face_of[h]);
        CHECK(g.origin(nx) == g.head(h));
    }
    // Every face walk accounts for its half-edges exactly once.
    size_t total = 0;
    for (const auto& w : g.face_walk) total += w.size();
    CHECK(total == size_t(g.num_halfedges()));
}

TEST_CASE("degree, neighbors, and halfedge_between agree with the rotations") {
    PlaneGraph g = square_with_diagonal();
    CHECK(g.degree(0) == 3);
    CHECK(g.degree(1) == 2);
    CHECK(g.neighbors(0).size() == 3);
    // Neighbor order is the rotation order (up to the starting point).
    auto nb = g.neighbors(0);
    auto it = std::find(nb.begin(), nb.end(), 3);
    REQUIRE(it != nb.end());
    std::rotate(nb.begin(), it, nb.end());
    CHECK(nb == std::vector<int>{3, 2, 1});

    int h = g.halfedge_between(0, 2);
    REQUIRE(h >= 0);
    CHECK(g.origin(h) == 0);
    CHECK(g.head(h) == 2);
    CHECK(g.halfedge_between(1, 3) == -1);
}

TEST_CASE("build_embedding rejects bad inputs") {
    // Asymmetric rotations: 0 lists 1 but 1 does not list 0.
    CHECK_THROWS_AS(build_embedding(3, {{1, 2}, {2}, {0, 1}}, {0, 2}),
                    embedding_error);
    // Disconnected: two triangles.
    CHECK_THROWS_AS(build_embedding(6,
                                    {{1, 2}, {2, 0}, {0, 1},
                                     {4, 5}, {5, 3}, {3, 4}},
                                    {1, 0}),
                    embedding_error);
    // The all-ascending rotation system of K4 is toroidal: Euler fails.
    CHECK_THROWS_AS(build_embedding(4,
                                    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}},
                                    {1, 0}),
                    embedding_error);
}

TEST_CASE("enclose_with_triangle wraps the graph") {
    PlaneGraph g = triangle();
    PlaneGraph e = enclose_with_triangle(g);
    CHECK(e.num_vertices() == 6);
    CHECK(e.num_edges() == g.num_edges() + 6);  // 3-cycle plus three bridges
    CHECK(e.face_walk[e.outer_face].size() == 3);
    // The original bounded face survives.
    bool found = false;
    for (int f = 0; f < e.num_faces(); ++f)
        if (f != e.outer_face && face_vertex_set(e, f) == std::set<int>{0, 1, 2})
            found = true;
    CHECK(found);
}

TEST_CASE("radial graph is the bipartite incidence graph") {
    PlaneGraph g = triangle();
    PlaneGraph r = radial_graph(g);
    CHECK(r.num_vertices() == g.num_vertices() + g.num_faces());
    CHECK(r.num_edges() == g.num_halfedges());  // one per corner
    for (int h = 0; h < r.num_halfedges(); h += 2) {
        int u = r.origin(h), v = r.head(h);
        CHECK(((u < 3) != (v < 3)));  // vertex node on one side, face node other
    }
}

TEST_CASE("radial levels alternate parity from the outer face") {
    PlaneGraph g = triangle();
    RadialLevels lv = radial_bfs_levels(g);
    CHECK(lv.face_level[g.outer_face] == 0);
    for (int v = 0; v < 3; ++v) CHECK(lv.vertex_level[v] == 1);
    int inner = 1 - g.outer_face;
    CHECK(lv.face_level[inner] == 2);
    CHECK(lv.max_vertex_level == 1);
    CHECK(lv.max_face_level == 2);
    CHECK(lv.face_parent_vertex[g.outer_face] == -1);
    CHECK(lv.face_parent_vertex[inner] >= 0);
    for (int v = 0; v < 3; ++v) CHECK(lv.vertex_parent_face[v] == g.outer_face);
}

TEST_CASE("plane graph text format round-trips") {
    PlaneGraph g = square_with_diagonal();
    std::ostringstream os;
    write_plane_graph(os, g);
    std::istringstream is(os.str());
    PlaneGraph h = parse_plane_graph(is);
    CHECK(h.num_vertices() == g.num_vertices());
    CHECK(h.num_edges() == g.num_edges());
    CHECK(h.num_faces() == g.num_faces());
    for (int v = 0; v < g.num_vertices(); ++v)
        CHECK(h.neighbors(v) == g.neighbors(v));
    CHECK(face_vertex_set(h, h.outer_face) == face_vertex_set(g, g.outer_face));
}

TEST_CASE("parser rejects malformed input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_plane_graph(empty), format_error);
    std::istringstream noouter("3 3\n0 1 2\n1 2 0\n2 0 1\n");
    CHECK_THROWS_AS(parse_plane_graph(noouter), format_error);
    std::istringstream comments(
        "# tiny triangle\n3 3\n0 1 2\n1 2 0\n2 0 1\nouter 1 0\n");
    PlaneGraph g = parse_plane_graph(comments);
    CHECK(g.num_faces() == 2);
}
