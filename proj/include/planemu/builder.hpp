#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "planemu/decomposition.hpp"
#include "planemu/emulator.hpp"
#include "planemu/monge.hpp"
#include "planemu/plane_graph.hpp"

namespace planemu {

enum class BuildMode : uint8_t { automatic, dense, monge };
const char* build_mode_name(BuildMode m);
std::optional<BuildMode> build_mode_from_name(const std::string& s);

struct BuildOptions {
    BuildMode mode = BuildMode::automatic;
    int width = 0;  // 0: ceil(sqrt(n / k)), clamped to [1, n]
};

struct PieceStats {
    int64_t vertices = 0;
    int64_t edges = 0;
    int64_t count = 0;  // pieces of this type
};

struct BuildStats {
    int n = 0;
    int k = 0;
    std::string mode_requested;
    std::string mode_used;
    int width = 0;
    int offset = 0;
    bool fallback = false;          // structural fallback to dense happened
    std::string fallback_reason;
    int64_t monge_fallback_pieces = 0;  // pieces emitted densely after a failed
                                        // Monge validation
    int64_t total_vertices = 0;
    int64_t total_edges = 0;
    int components = 0;
    int regions = 0;
    std::vector<std::pair<std::string, PieceStats>> pieces;

    std::string to_json() const;  // {"schema": 1, ...}
};

struct BuildResult {
    EmulatorGraph graph;
    BuildStats stats;
    // Populated on monge builds for auditing.
    std::vector<DecompTree> decomp_trees;
    std::vector<SliceTriangulation> slices;  // aligned with decomp_trees
};

// Distance matrices of a cycle lying on a face of `sub`: breadth-first
// search from every cycle vertex inside the subgraph mask.  Unreachable
// pairs are reported via the mask result so callers can drop those pieces.
struct FaceDistanceMatrices {
    TriangularMatrix lower;
    TriangularMatrix upper;
    bool complete = true;  // false if some pair was unreachable
};
FaceDistanceMatrices face_distance_matrices(const std::vector<std::vector<int>>& adj,
                                            const std::vector<char>& allowed,
                                            const std::vector<int>& cycle);

// Builds the distance emulator of `g` over `terminals`.  The monge path
// follows the component-tree / slice-decomposition construction; dense
// connects all terminal pairs by BFS distance.  `automatic` builds the monge
// emulator and keeps it only when it is smaller than the dense one.
// Structural violations on the monge path trigger a dense fallback, flagged
// in the stats.
BuildResult build_emulator(const PlaneGraph& g, const std::vector<int>& terminals,
                           const BuildOptions& opts = {});

}  // namespace planemu
