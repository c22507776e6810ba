#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace planemu {

struct emulator_error : std::runtime_error {
    explicit emulator_error(const std::string& what) : std::runtime_error(what) {}
};

// Where an emulator edge came from.  The planar builder tags every edge so
// per-piece sizes can be reported; the matrix-level constructions tag
// everything `monge_core`.
enum class PieceTag : uint8_t {
    monge_core,  // inside a matrix emulator (also its hookup edges)
    b2b,         // boundary/heavy-hole pairwise pieces of a slice
    t2sep,       // terminal-to-separator edges
    sep2b,       // separator-to-boundary-interval pieces
    h2b,         // hole-to-boundary pieces at a hole-elimination root
    sep2h,       // separator-to-hole-interval pieces
    leaf_h2b,    // hole-to-boundary pieces at a leaf region
    leaf_t2b,    // single-terminal-to-boundary edges at a leaf region
    dense,       // all-pairs terminal edges (dense mode)
};
const char* piece_tag_name(PieceTag t);
std::optional<PieceTag> piece_tag_from_name(const std::string& s);

// External labels.  r/c are the row and column vertices of a substochastic
// emulator; r0/c0 the outer row and column vertices of a matrix emulator;
// terminal/portal carry original graph vertex ids in the planar emulator.
enum class LabelKind : uint8_t { row, col, row_outer, col_outer, terminal, portal };

struct Label {
    LabelKind kind;
    int index;  // 1-based matrix index, or graph vertex id
    bool operator==(const Label& o) const { return kind == o.kind && index == o.index; }
};

struct LabelHash {
    size_t operator()(const Label& l) const {
        return std::hash<uint64_t>()((uint64_t(l.index) << 3) | uint64_t(l.kind));
    }
};

std::string label_to_string(const Label& l);
std::optional<Label> label_from_string(const std::string& s);

struct EmulatorEdge {
    int32_t src;
    int32_t dst;
    int64_t weight;
    PieceTag tag;
};

// A directed weighted graph whose distances between labeled vertices answer
// queries exactly.  Matrix-level emulators are DAGs; the planar emulator is a
// general digraph glued from pieces.
struct EmulatorGraph {
    int32_t vertex_count = 0;
    std::vector<EmulatorEdge> edges;
    std::unordered_map<Label, int32_t, LabelHash> labels;
    bool weights_normalized = false;  // true once weights are known >= 0

    int32_t add_vertex() { return vertex_count++; }
    void add_edge(int32_t s, int32_t d, int64_t w, PieceTag tag = PieceTag::monge_core) {
        edges.push_back({s, d, w, tag});
    }
    void set_label(Label l, int32_t v) { labels.emplace(l, v); }
    std::optional<int32_t> vertex_of(const Label& l) const {
        auto it = labels.find(l);
        if (it == labels.end()) return std::nullopt;
        return it->second;
    }
    int64_t size_cost() const { return int64_t(vertex_count) + int64_t(edges.size()); }

    // Out-adjacency built on demand (CSR layout).
    struct Adjacency {
        std::vector<int32_t> head;   // size vertex_count + 1
        std::vector<int32_t> to;
        std::vector<int64_t> w;
    };
    Adjacency build_adjacency() const;

    // Topological order; throws emulator_error if the graph has a cycle.
    std::vector<int32_t> topo_order() const;

    // Single-source shortest paths along a DAG (weights may be negative).
    // Unreachable vertices get nullopt.
    std::vector<std::optional<int64_t>> dag_distances_from(int32_t src) const;

    // Appends `other` into this graph, returning the id offset its vertices
    // received.  Labels are not copied (callers wire pieces through portals).
    int32_t splice(const EmulatorGraph& other, PieceTag retag);

    // Drops edges incident to vertices that cannot be reached from any
    // labeled source vertex, then compacts ids, keeping labeled vertices.
    void prune_unreachable(const std::vector<int32_t>& sources);
};

// Serialization: header (n k mode flags), stats line, vertex table with
// labels, edge list.  Deterministic: vertices by id, edges sorted.
struct EmulatorFile {
    int n = 0;
    int k = 0;
    std::string mode;       // "monge", "dense", or "matrix"
    bool fallback = false;  // structural fallback happened during the build
    std::string stats_json;
    EmulatorGraph graph;
};
void write_emulator(std::ostream& out, const EmulatorFile& f);
EmulatorFile read_emulator(std::istream& in);

}  // namespace planemu
