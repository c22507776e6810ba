#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "planemu/emulator.hpp"

namespace planemu {

// Dijkstra over the emulator's directed edges.  Throws emulator_error on a
// negative edge weight.
std::vector<std::optional<int64_t>> dijkstra(const EmulatorGraph& g, int32_t src);

std::optional<int64_t> query_distance(const EmulatorGraph& g, int terminal_a,
                                      int terminal_b);

// One Dijkstra per terminal; result indexed by terminal order.  Verifies the
// matrix is symmetric with a zero diagonal and throws emulator_error
// otherwise.
std::vector<std::vector<std::optional<int64_t>>> apsp_terminals(
    const EmulatorGraph& g, const std::vector<int>& terminals);

// CSV: header row of terminal labels, one row per terminal, "inf" for
// unreachable pairs.
void write_apsp_csv(std::ostream& out, const std::vector<int>& terminals,
                    const std::vector<std::vector<std::optional<int64_t>>>& dist);

}  // namespace planemu
