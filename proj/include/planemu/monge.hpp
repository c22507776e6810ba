#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planemu/emulator.hpp"

namespace planemu {

struct monge_error : std::runtime_error {
    explicit monge_error(const std::string& what) : std::runtime_error(what) {}
};

// Dense integer matrix, 1-based accessors to match the usual index algebra.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int64_t> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}
    int64_t& at(int i, int j) { return a[size_t(i - 1) * cols + (j - 1)]; }
    int64_t at(int i, int j) const { return a[size_t(i - 1) * cols + (j - 1)]; }
};

// A matrix is unit Monge when M[i+1,j] - M[i,j] <= M[i+1,j+1] - M[i,j+1] for
// all i, j, and every such vertical difference lies in {-1, 0, 1}.  Only
// vertical adjacency is constrained.
bool is_unit_monge(const IntMatrix& m, std::string* why = nullptr);

// Binary matrix with at most one 1 per row, stored as the column of that 1.
// `first_original[i]`, when present, marks the leftmost column of row i that
// carries meaning; entries to its left are artificial and must be zero.
// Emulator paths from row i exist only to columns >= first_original[i].
struct SubstochasticMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::optional<int>> one_col;  // 1-based column, per row
    std::vector<int> first_original;          // empty, or 1-based per row

    bool triangular() const { return !first_original.empty(); }
    int first_col(int i) const { return triangular() ? first_original[i - 1] : 1; }
};

// Lemma-style decomposition M[x,y] = U[x] + V[y] + sum of P over the
// quadrant {i >= 2x-1, j >= y}.  P has 2(n-1) rows and m-1 columns.
struct UnitMongeRep {
    std::vector<int64_t> U;  // size n
    std::vector<int64_t> V;  // size m
    SubstochasticMatrix P;

    int n() const { return static_cast<int>(U.size()); }
    int m() const { return static_cast<int>(V.size()); }
};

// Splits M into (U, V, P).  With validate set, checks the unit Monge
// conditions first and throws monge_error on violation; without it, the
// block structure is still verified while P is extracted.
UnitMongeRep decompose(const IntMatrix& m, bool validate = true);

// Inverse of decompose: M[x,y] = U[x] + V[y] + dominance sum of P.
IntMatrix reconstruct(const UnitMongeRep& rep);

// Extends a rectangular unit Monge matrix to a square one by duplicating its
// last row or column.
IntMatrix pad_to_square(const IntMatrix& m);

// Orientation of a triangular matrix: which half carries defined entries.
// The diagonal is supplied too (it anchors the artificial-fill recurrences);
// emulator guarantees cover only the strict triangle.
enum class Orientation : uint8_t { lower, upper };  // lower: i > j, upper: i < j

// Triangular unit Monge matrix: entries defined for i >= j (lower) or
// i <= j (upper); the Monge and unit conditions hold on quadruples that stay
// inside the defined triangle.
struct TriangularMatrix {
    int n = 0;
    Orientation orient = Orientation::lower;
    std::vector<int64_t> a;  // row-major dense; only the triangle is read

    TriangularMatrix() = default;
    TriangularMatrix(int n_, Orientation o) : n(n_), orient(o), a(size_t(n_) * n_, 0) {}
    bool defined(int i, int j) const {
        return orient == Orientation::lower ? i >= j : i <= j;
    }
    int64_t& at(int i, int j) { return a[size_t(i - 1) * n + (j - 1)]; }
    int64_t at(int i, int j) const { return a[size_t(i - 1) * n + (j - 1)]; }
};

// Emulator for P alone: row vertices r[x], column vertices c[y], and
// d(r[x], c[y]) = sum of P over {i >= x, j >= y}.  The graph is a DAG with
// exactly one r[x]-to-c[y] path per connected pair; for triangular P the
// pair is connected iff y >= first_original[x].
EmulatorGraph build_substochastic_emulator(const SubstochasticMatrix& p);

// Emulator for a full unit Monge matrix: vertices r0[x], c0[y] with
// d(r0[x], c0[y]) = M[x,y].  Weights are reweighted; they come out
// non-negative exactly when every column minimum of M is (a negative entry
// cannot be realized with non-negative weights), which distance matrices
// satisfy.  `weights_normalized` reports the outcome.
EmulatorGraph build_monge_emulator(const IntMatrix& m, bool validate = true);
EmulatorGraph build_monge_emulator(const UnitMongeRep& rep);
// The same emulator before the reweighting pass: distances agree with
// build_monge_emulator but edge weights may be negative.
EmulatorGraph build_monge_emulator_signed(const UnitMongeRep& rep);

// Emulator for a triangular unit Monge matrix: d(r0[x], c0[y]) = M[x,y] for
// pairs in the strict defined triangle, and no path exists for pairs outside
// it.  Weights are reweighted, non-negative under the same condition as
// build_monge_emulator (column minima over the strict triangle).
EmulatorGraph build_triangular_emulator(const TriangularMatrix& m, bool validate = true);

// Shifts weights by a super-source price function so that every weight is
// non-negative while all r0-to-c0 (or r-to-c) distances are preserved.
// Requires a DAG.  Edges leaving vertices unreachable from every row vertex
// are dropped; such edges lie on no row-to-column path.
EmulatorGraph reweight_nonnegative(const EmulatorGraph& g);

// Serialization of UnitMongeRep:
//   line 1: n m
//   line 2: U (n integers)
//   line 3: V (m integers)
//   n-1 lines: the two 1-based column indices of block x ('-' when absent)
void write_unit_monge_rep(std::ostream& out, const UnitMongeRep& rep);
UnitMongeRep read_unit_monge_rep(std::istream& in);

}  // namespace planemu
