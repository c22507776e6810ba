#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planemu/plane_graph.hpp"

namespace planemu {

// Raised when an input violates the structural assumptions of the planar
// decomposition (non-simple level cycles, shared child boundaries, ...).
// The builder catches it and falls back to the dense construction.
struct structure_error : std::runtime_error {
    explicit structure_error(const std::string& what) : std::runtime_error(what) {}
};

// ── Component tree ──────────────────────────────────────────────────
//
// Faces at radial level >= 2i, split into dual-connected components, for the
// selected levels l, l+w, l+2w, ...  plus level 0 for the root.  Each
// component's boundary is a simple cycle; components nest into a tree.

struct Component {
    int level = 0;                 // component level (face threshold 2*level)
    std::vector<int> faces;        // sorted face ids of g
    std::vector<char> in_faces;    // membership mask over faces
    std::vector<int> boundary;     // boundary cycle as a vertex sequence
    std::vector<int> vertices;     // sorted vertex ids of the subgraph
    int parent = -1;
    std::vector<int> children;
    int heavy_child = -1;          // child holding > half of our vertices
};

struct ComponentTree {
    int width = 1;        // w
    int offset = 0;       // l, chosen to minimize total boundary length
    int64_t total_boundary = 0;
    std::vector<Component> nodes;  // nodes[0] is the root
};

// Builds the tree for the given width.  The offset l in [0, w) is chosen by
// computing, for every candidate, the total boundary length of all level
// cycles it selects, and keeping the minimizer (ties: smallest l).
ComponentTree build_component_tree(const PlaneGraph& g, const RadialLevels& levels,
                                   int width);

// Extracts the boundary cycle of a face set.  Throws structure_error if the
// boundary is not a single simple cycle.
std::vector<int> boundary_cycle(const PlaneGraph& g, const std::vector<char>& in_faces);

// ── Slice triangulation ─────────────────────────────────────────────
//
// The slice of a component is everything it encloses minus what its children
// enclose.  It is triangulated by fanning every slice face from its radial
// parent vertex, adding an apex vertex inside the external hole and inside
// every non-heavy internal hole.  The tree T rooted at the external apex
// follows the radial BFS: the parent of an interior vertex is its radial
// grandparent, external boundary vertices hang off the root apex, and each
// internal apex hangs off one vertex of its hole.

struct SliceTriangulation {
    int component = -1;

    // Local vertex numbering: 0..n_real-1 are graph vertices, then apexes.
    std::vector<int> to_graph;    // local -> graph vertex id (-1 for apexes)
    std::vector<int> from_graph;  // graph -> local (-1 if absent); size g.nv
    int n_real = 0;
    int external_apex = -1;

    // Cycles, as local vertex sequences.
    std::vector<int> external_cycle;
    std::vector<std::vector<int>> hole_cycles;  // per child of the component
    std::vector<int> hole_apex;                 // local apex id, -1 for heavy
    int heavy_hole = -1;                        // index into hole_cycles, or -1

    struct Tri {
        std::array<int, 3> v;
    };
    std::vector<Tri> faces;
    std::vector<int> face_hole;  // -1 slice face, -2 external fan, else hole idx

    struct Edge {
        int u, v;
        bool real;  // an edge of the underlying graph
        bool tree;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<std::pair<int, int>>> adj;    // vertex -> (edge, other)
    std::vector<std::array<int, 2>> edge_faces;           // faces flanking an edge
    std::vector<int> parent;                              // -1 for the root apex
    std::vector<int> parent_edge;
    std::vector<int> depth;

    int edge_between(int u, int v) const;  // -1 if absent

    int num_vertices() const { return static_cast<int>(to_graph.size()); }
};

SliceTriangulation triangulate_slice(const PlaneGraph& g, const RadialLevels& levels,
                                     const ComponentTree& tree, int comp);

// ── Region decomposition ────────────────────────────────────────────
//
// Recursive decomposition of a triangulated slice by fundamental-cycle
// separators: weight-balanced good cycles while the region holds several
// terminals, hole-elimination subtrees when a disposable hole exists, and
// leaves once at most one hole and at most one terminal remain.

enum class RegionKind : uint8_t { good_split, hole_elimination, leaf };

struct DecompRegion {
    std::vector<int> faces;      // sorted triangulation face ids
    std::vector<int> terminals;  // graph vertex ids of terminals in the filled region
    // Terminals counted by the recursion: strictly interior to the region
    // (every incident face belongs to it) plus the contents of wholly kept
    // holes.  Terminals sitting on a bounding cycle stay in `terminals` —
    // pieces still wire them — but stop rules and balance ignore them, since
    // no Jordan cycle could ever strictly separate two adjacent terminals.
    std::vector<int> core_terminals;
    std::vector<int> holes;      // hole indices wholly inside the region
    RegionKind kind = RegionKind::leaf;
    int depth = 0;

    // For internal nodes: the separator.
    int sep_edge = -1;            // triangulation edge id
    std::vector<int> cycle;       // fundamental cycle as local vertex ids
    std::vector<int> cycle_real;  // graph vertex ids on the cycle, in order
    int elim_hole = -1;           // hole being eliminated (subtree nodes)
    bool elim_root = false;       // first split of that subtree
    std::array<int, 2> child = {-1, -1};

    // Boundary intervals: arcs of the external cycle and of the heavy hole
    // present in this region, each as a run of graph vertex ids.
    std::vector<std::vector<int>> boundary_intervals;
    // Arcs of the hole being eliminated (graph vertex ids), when relevant.
    std::vector<std::vector<int>> elim_intervals;
};

struct DecompTree {
    int component = -1;
    std::vector<DecompRegion> regions;  // regions[0] is the root
    int max_depth = 0;
};

// Terminal weight balance threshold for good cycles.
inline constexpr double kGoodCycleRho = 0.75;

// `is_terminal` masks graph vertices; `hole_terminals[h]` lists terminals
// strictly inside hole h (they count toward the region holding that hole).
DecompTree decompose_slice(const SliceTriangulation& slice,
                           const std::vector<char>& is_terminal,
                           const std::vector<std::vector<int>>& hole_terminals);

// Structural audit used by tests and the acceptance suite.  Returns the list
// of violated invariants (empty = pass): separator/hole crossings, leaf stop
// rule, good-split decay, elimination depth, interval growth, tree shape.
std::vector<std::string> audit_decomp_tree(const SliceTriangulation& slice,
                                           const DecompTree& tree);

}  // namespace planemu
