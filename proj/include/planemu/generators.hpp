#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "planemu/plane_graph.hpp"

namespace planemu {

// Deterministic instance generators.  All randomness comes from an explicit
// seed through a small splitmix generator, so outputs are byte-identical
// across runs and platforms.

struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0, bound)
    uint64_t below(uint64_t bound) { return bound ? next() % bound : 0; }
};

// a x b grid (a columns, b rows), vertex id = row * a + col.
PlaneGraph make_grid(int a, int b);

// a x b cylinder: the grid with column a-1 joined back to column 0.
// Requires a >= 3 so the wrap stays simple.
PlaneGraph make_cylinder(int a, int b);

// Random planar triangulation on n >= 3 vertices: repeated insertion of a
// vertex into a random face of a triangle, followed by random diagonal
// flips.  Deterministic under the seed.
PlaneGraph make_random_triangulation(int n, uint64_t seed);

// Terminal selection.
std::vector<int> terminals_corners(const PlaneGraph& g);  // extremal vertex ids
std::vector<int> terminals_random(const PlaneGraph& g, int k, uint64_t seed);

}  // namespace planemu
