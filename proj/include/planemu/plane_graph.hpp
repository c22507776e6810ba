#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace planemu {

struct embedding_error : std::runtime_error {
    explicit embedding_error(const std::string& what) : std::runtime_error(what) {}
};

struct format_error : std::runtime_error {
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

// Combinatorial embedding of a connected plane graph, stored as half-edges.
//
// Half-edge h runs origin(h) -> head(h); its twin is h^1.  Rotations list the
// outgoing half-edges counterclockwise around each vertex.  Faces are traced
// with next_in_face(h) = rot_next(twin(h)), which walks every bounded face
// counterclockwise and the outer face clockwise.
struct PlaneGraph {
    int nv = 0;
    std::vector<int> he_origin;               // per half-edge
    std::vector<int> rot_next;                // next outgoing half-edge, ccw
    std::vector<int> rot_prev;
    std::vector<int> first_out;               // per vertex, -1 if isolated
    std::vector<int> face_of;                 // per half-edge
    std::vector<std::vector<int>> face_walk;  // per face: half-edges in order
    int outer_face = -1;

    int num_vertices() const { return nv; }
    int num_halfedges() const { return static_cast<int>(he_origin.size()); }
    int num_edges() const { return num_halfedges() / 2; }
    int num_faces() const { return static_cast<int>(face_walk.size()); }

    int twin(int h) const { return h ^ 1; }
    int origin(int h) const { return he_origin[h]; }
    int head(int h) const { return he_origin[h ^ 1]; }
    int next_in_face(int h) const { return rot_next[h ^ 1]; }

    // Degree of v (counts multi-edges once per incidence).
    int degree(int v) const;

    // Outgoing half-edges of v in rotation order starting at first_out[v].
    std::vector<int> out_halfedges(int v) const;

    // Neighbors of v in rotation order.
    std::vector<int> neighbors(int v) const;

    // Face walk as a vertex sequence (origins of the walk's half-edges).
    std::vector<int> face_vertices(int f) const;

    // Half-edge from u to v, or -1.  Only meaningful for simple graphs.
    int halfedge_between(int u, int v) const;
};

// Builds the embedding from counterclockwise rotations.  `rotations[v]` lists
// the neighbors of v; `outer` names a half-edge (u, v) on the outer face.
// Requires a connected simple graph whose rotation lists are symmetric.
// Throws embedding_error if the input is inconsistent or fails Euler's check.
PlaneGraph build_embedding(int n, const std::vector<std::vector<int>>& rotations,
                           std::pair<int, int> outer);

// Lower-level assembly used where parallel edges are legitimate (the radial
// graph).  `arcs` lists (u, v) once per edge; `rot_order[v]` gives the
// outgoing half-edge ids (2*i for arcs[i] at u, 2*i+1 at v) ccw around v.
PlaneGraph assemble_embedding(int n, const std::vector<std::pair<int, int>>& arcs,
                              const std::vector<std::vector<int>>& rot_order,
                              int outer_halfedge);

// Surrounds the graph with a 3-cycle joined to the old outer face by three
// bridge edges, one per triangle corner, landing on distinct boundary
// vertices (a single bridge would pinch the moat face at its endpoint).  The
// new vertices take ids n, n+1, n+2; the new outer face is the triangle.
PlaneGraph enclose_with_triangle(const PlaneGraph& g);

// Vertex-face incidence graph: node v for each vertex, node nv+f for each
// face, one edge per incidence occurrence (so a vertex visited twice by a
// face walk yields two parallel edges).  Embedded in the plane inherited
// from g; the outer face of the radial graph is the one at the corner of
// g's outer-face marker.
PlaneGraph radial_graph(const PlaneGraph& g);

// Breadth-first search of the radial graph from the outer face, realized
// directly on g's incidence structure.  Vertices get odd levels, faces even
// levels.  Parents follow discovery order: faces explore their walk in order,
// vertices explore incident faces in rotation order.
struct RadialLevels {
    std::vector<int> vertex_level;        // size nv
    std::vector<int> face_level;          // size num_faces
    std::vector<int> vertex_parent_face;  // -1 for none
    std::vector<int> face_parent_vertex;  // -1 for the outer face
    int max_vertex_level = 0;
    int max_face_level = 0;
};
RadialLevels radial_bfs_levels(const PlaneGraph& g);

// Text format:
//   line 1:  n m
//   n lines: vertex id followed by its neighbors in ccw rotation order
//   last:    "outer u v"  naming a half-edge on the outer face
// '#' starts a comment; blank lines are ignored.
PlaneGraph parse_plane_graph(std::istream& in);
PlaneGraph parse_plane_graph_file(const std::string& path);
void write_plane_graph(std::ostream& out, const PlaneGraph& g);

}  // namespace planemu
