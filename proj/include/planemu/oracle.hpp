#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace planemu {

// Reference implementations that the emulator machinery is checked against.
// They are deliberately naive and share no code with the modules they test.

// All-pairs BFS distances from `sources` over an undirected graph given as
// adjacency lists.  result[s][v] is nullopt when v is unreachable.
std::vector<std::vector<std::optional<int64_t>>> bfs_apsp(
    const std::vector<std::vector<int>>& adj, const std::vector<int>& sources);

// Single-source BFS over adjacency lists restricted to `allowed` vertices
// (empty mask = all).  -1 marks unreachable.
std::vector<int64_t> bfs_from(const std::vector<std::vector<int>>& adj, int src,
                              const std::vector<char>& allowed = {});

// Number of 1-entries of a binary matrix inside the quadrant
// {i >= x, j >= y}, by full scan.  `one_col` stores, per row, the 1-based
// column of the row's single 1 (or -1 for none).
int64_t dominance_count(const std::vector<int>& one_col, int cols, int x, int y);

}  // namespace planemu
