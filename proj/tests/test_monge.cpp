#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <optional>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "planemu/generators.hpp"
#include "planemu/monge.hpp"
#include "planemu/oracle.hpp"

using namespace planemu;

namespace {

// Frozen 4x7 example used throughout: row offsets U, column offsets V, and an
// entry matrix that is the 6x6 identity permutation.  The induced matrix and
// all derived quantities below are pinned by hand.
UnitMongeRep frozen_rep() {
    UnitMongeRep rep;
    rep.U = {-3, -2, -1, 0};
    rep.V = {2, 2, 2, 3, 4, 4, 4};
    rep.P.rows = 6;
    rep.P.cols = 6;
    rep.P.one_col = {1, 2, 3, 4, 5, 6};
    return rep;
}

const int64_t kFrozenM[4][7] = {
    {5, 4, 3, 3, 3, 2, 1},
    {4, 4, 4, 4, 4, 3, 2},
    {3, 3, 3, 4, 5, 4, 3},
    {2, 2, 2, 3, 4, 4, 4},
};

IntMatrix frozen_matrix() {
    IntMatrix m(4, 7);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 7; ++j) m.at(i, j) = kFrozenM[i - 1][j - 1];
    return m;
}

// Random representation in the canonical form decompose produces: per block,
// a lone entry sits in the block's first row, a pair is ordered by column,
// and the row offsets end at zero.  The vertical unit condition ties each
// offset step U[x+1] - U[x] to the block's entry count b: the step minus any
// quadrant count in {0..b} must stay within [-1, 1], so b = 2 forces step 1,
// b = 1 allows {0, 1}, and b = 0 allows {-1, 0, 1}.
// decompose(reconstruct(rep)) is the identity exactly on these.
UnitMongeRep random_canonical_rep(Rng& rng, int n, int m, bool signed_offsets) {
    UnitMongeRep rep;
    rep.U.resize(n);
    rep.V.resize(m);
    int64_t shift = signed_offsets ? 8 : 0;
    for (auto& v : rep.V) v = int64_t(rng.below(17)) - shift;
    rep.P.rows = 2 * (n - 1);
    rep.P.cols = m - 1;
    rep.P.one_col.assign(rep.P.rows, std::nullopt);
    std::vector<int> entries(std::max(0, n - 1), 0);
    for (int x = 1; x < n; ++x) {
        int kind = int(rng.below(3));
        if (kind == 0) continue;
        entries[x - 1] = kind;
        int a = 1 + int(rng.below(uint64_t(rep.P.cols)));
        if (kind == 1) {
            rep.P.one_col[2 * x - 2] = a;
        } else {
            int b = 1 + int(rng.below(uint64_t(rep.P.cols)));
            rep.P.one_col[2 * x - 2] = std::min(a, b);
            rep.P.one_col[2 * x - 1] = std::max(a, b);
        }
    }
    rep.U[n - 1] = 0;
    for (int x = n - 1; x >= 1; --x) {
        int b = entries[x - 1];
        int64_t step = b == 2 ? 1 : b == 1 ? int64_t(rng.below(2)) : int64_t(rng.below(3)) - 1;
        rep.U[x - 1] = rep.U[x] - step;
    }
    return rep;
}

bool same_matrix(const IntMatrix& a, const IntMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.a == b.a;
}

bool same_rep(const UnitMongeRep& a, const UnitMongeRep& b) {
    return a.U == b.U && a.V == b.V && a.P.rows == b.P.rows && a.P.cols == b.P.cols &&
           a.P.one_col == b.P.one_col && a.P.first_original == b.P.first_original;
}

std::optional<int64_t> emu_dist(const EmulatorGraph& g, Label from, Label to) {
    auto s = g.vertex_of(from);
    auto t = g.vertex_of(to);
    REQUIRE(s);
    REQUIRE(t);
    return g.dag_distances_from(*s)[*t];
}

// Number of distinct paths from src to every vertex, by DAG counting.
std::vector<int64_t> path_counts(const EmulatorGraph& g, int32_t src) {
    std::vector<int32_t> topo = g.topo_order();
    EmulatorGraph::Adjacency adj = g.build_adjacency();
    std::vector<int64_t> cnt(g.vertex_count, 0);
    cnt[src] = 1;
    for (int32_t u : topo)
        for (int32_t j = adj.head[u]; j < adj.head[u + 1]; ++j) cnt[adj.to[j]] += cnt[u];
    return cnt;
}

int64_t min_edge_weight(const EmulatorGraph& g) {
    int64_t w = 0;
    for (const auto& e : g.edges) w = std::min(w, e.weight);
    return w;
}

std::vector<int> oracle_cols(const SubstochasticMatrix& p) {
    std::vector<int> oc(p.rows, -1);
    for (int i = 0; i < p.rows; ++i)
        if (p.one_col[i]) oc[i] = *p.one_col[i];
    return oc;
}

}  // namespace

TEST_CASE("frozen example decomposes and reconstructs exactly") {
    UnitMongeRep rep = frozen_rep();
    IntMatrix m = reconstruct(rep);
    CHECK(same_matrix(m, frozen_matrix()));

    std::string why;
    CHECK(is_unit_monge(m, &why));
    CHECK(why.empty());

    UnitMongeRep back = decompose(m);
    CHECK(same_rep(back, rep));
    CHECK(same_matrix(reconstruct(back), m));
}

TEST_CASE("frozen example dominance anchors hold in oracle and entry emulator") {
    UnitMongeRep rep = frozen_rep();
    std::vector<int> oc = oracle_cols(rep.P);

    // Quadrant counts pinned by hand: all-but-first-row, and the lower-right
    // quadrant below row 3 from column 2 on.
    CHECK(dominance_count(oc, rep.P.cols, 2, 1) == 5);
    CHECK(dominance_count(oc, rep.P.cols, 4, 2) == 3);

    EmulatorGraph g = build_substochastic_emulator(rep.P);
    CHECK(g.weights_normalized);
    CHECK(emu_dist(g, {LabelKind::row, 2}, {LabelKind::col, 1}) == 5);
    CHECK(emu_dist(g, {LabelKind::row, 4}, {LabelKind::col, 2}) == 3);

    for (int x = 1; x <= rep.P.rows; ++x) {
        auto dist = g.dag_distances_from(*g.vertex_of({LabelKind::row, x}));
        for (int y = 1; y <= rep.P.cols; ++y) {
            auto d = dist[*g.vertex_of({LabelKind::col, y})];
            REQUIRE(d);
            CHECK(*d == dominance_count(oc, rep.P.cols, x, y));
        }
    }
}

TEST_CASE("frozen example full emulator matches the matrix before and after reweighting") {
    UnitMongeRep rep = frozen_rep();
    IntMatrix m = frozen_matrix();

    EmulatorGraph signed_g = build_monge_emulator_signed(rep);
    EmulatorGraph norm_g = build_monge_emulator(rep);
    CHECK(min_edge_weight(signed_g) == -3);  // the smallest row offset
    CHECK(min_edge_weight(norm_g) == 0);
    CHECK(norm_g.weights_normalized);

    for (int x = 1; x <= 4; ++x) {
        auto ds = signed_g.dag_distances_from(*signed_g.vertex_of({LabelKind::row_outer, x}));
        auto dn = norm_g.dag_distances_from(*norm_g.vertex_of({LabelKind::row_outer, x}));
        for (int y = 1; y <= 7; ++y) {
            auto s = ds[*signed_g.vertex_of({LabelKind::col_outer, y})];
            auto nrm = dn[*norm_g.vertex_of({LabelKind::col_outer, y})];
            REQUIRE(s);
            REQUIRE(nrm);
            CHECK(*s == m.at(x, y));
            CHECK(*nrm == m.at(x, y));
        }
    }

    // The matrix-overload entry point agrees.
    EmulatorGraph direct = build_monge_emulator(m);
    CHECK(emu_dist(direct, {LabelKind::row_outer, 2}, {LabelKind::col_outer, 1}) == 4);
}

TEST_CASE("random canonical representations round-trip exactly") {
    Rng rng(20260816);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + int(rng.below(9));
        int m = 2 + int(rng.below(11));
        UnitMongeRep rep = random_canonical_rep(rng, n, m, /*signed_offsets=*/true);
        IntMatrix m1 = reconstruct(rep);
        CHECK(is_unit_monge(m1));
        UnitMongeRep back = decompose(m1);
        REQUIRE(same_rep(back, rep));
        CHECK(same_matrix(reconstruct(back), m1));
    }
}

TEST_CASE("non-canonical entry rows reconstruct to the same matrix") {
    // A lone entry in a block's second row is legal input for reconstruct;
    // decompose then returns the canonical packing with equal quadrant sums.
    UnitMongeRep rep;
    rep.U = {-2, -1, 0};
    rep.V = {5, 5, 6};
    rep.P.rows = 4;
    rep.P.cols = 2;
    rep.P.one_col = {std::nullopt, 2, std::nullopt, 1};
    IntMatrix m = reconstruct(rep);
    CHECK(is_unit_monge(m));

    UnitMongeRep canon = decompose(m);
    CHECK(canon.U == rep.U);
    CHECK(canon.V == rep.V);
    REQUIRE(canon.P.one_col.size() == 4);
    CHECK(canon.P.one_col[0] == 2);  // moved up within its block
    CHECK(!canon.P.one_col[1]);
    CHECK(canon.P.one_col[2] == 1);
    CHECK(!canon.P.one_col[3]);
    CHECK(same_matrix(reconstruct(canon), m));
}

TEST_CASE("unit Monge validation rejects bad matrices") {
    // Vertical step of 2.
    IntMatrix step(2, 2);
    step.at(1, 1) = 0;
    step.at(1, 2) = 0;
    step.at(2, 1) = 2;
    step.at(2, 2) = 0;
    std::string why;
    CHECK(!is_unit_monge(step, &why));
    CHECK(!why.empty());
    CHECK_THROWS_AS(decompose(step), monge_error);

    // Vertical steps fine but the 2x2 block is anti-Monge.
    IntMatrix anti(2, 2);
    anti.at(1, 1) = 1;
    anti.at(1, 2) = 0;
    anti.at(2, 1) = 1;
    anti.at(2, 2) = 1;
    CHECK(is_unit_monge(anti));  // rows differ by {0, 1}: vertically fine...
    anti.at(1, 1) = 0;
    anti.at(2, 1) = 1;
    anti.at(1, 2) = 1;
    anti.at(2, 2) = 0;  // ...now block density is -2
    CHECK(!is_unit_monge(anti, &why));
    CHECK(!why.empty());

    // Without validation the block extraction still notices.
    CHECK_THROWS_AS(decompose(anti, /*validate=*/false), monge_error);

    // Row of block densities summing past two.
    IntMatrix wide(2, 3);
    wide.at(1, 1) = 3;
    wide.at(1, 2) = 1;
    wide.at(1, 3) = 0;
    wide.at(2, 1) = 0;
    wide.at(2, 2) = 0;
    wide.at(2, 3) = 0;
    CHECK_THROWS_AS(decompose(wide, /*validate=*/false), monge_error);

    CHECK_THROWS_AS(decompose(IntMatrix{}), monge_error);
}

TEST_CASE("entry emulator agrees with the dominance oracle on random matrices") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        SubstochasticMatrix p;
        p.rows = 1 + int(rng.below(24));
        p.cols = 1 + int(rng.below(24));
        p.one_col.assign(p.rows, std::nullopt);
        for (int i = 0; i < p.rows; ++i)
            if (rng.below(4) != 0) p.one_col[i] = 1 + int(rng.below(uint64_t(p.cols)));

        EmulatorGraph g = build_substochastic_emulator(p);
        CHECK(g.weights_normalized);
        CHECK(min_edge_weight(g) >= 0);
        g.topo_order();  // throws on a cycle

        std::vector<int> oc = oracle_cols(p);
        for (int x = 1; x <= p.rows; ++x) {
            int32_t src = *g.vertex_of({LabelKind::row, x});
            auto dist = g.dag_distances_from(src);
            std::vector<int64_t> paths = path_counts(g, src);
            for (int y = 1; y <= p.cols; ++y) {
                int32_t dst = *g.vertex_of({LabelKind::col, y});
                REQUIRE(dist[dst]);
                CHECK(*dist[dst] == dominance_count(oc, p.cols, x, y));
                CHECK(paths[dst] == 1);  // one route carries each answer
            }
        }
    }
}

TEST_CASE("entry emulator honours per-row first original columns") {
    SubstochasticMatrix p;
    p.rows = 4;
    p.cols = 3;
    p.one_col = {2, 3, std::nullopt, std::nullopt};
    p.first_original = {1, 2, 2, 4};

    EmulatorGraph g = build_substochastic_emulator(p);
    std::vector<int> oc = oracle_cols(p);
    for (int x = 1; x <= p.rows; ++x) {
        int32_t src = *g.vertex_of({LabelKind::row, x});
        auto dist = g.dag_distances_from(src);
        std::vector<int64_t> paths = path_counts(g, src);
        for (int y = 1; y <= p.cols; ++y) {
            int32_t dst = *g.vertex_of({LabelKind::col, y});
            if (y >= p.first_original[x - 1]) {
                REQUIRE(dist[dst]);
                CHECK(*dist[dst] == dominance_count(oc, p.cols, x, y));
                CHECK(paths[dst] == 1);
            } else {
                CHECK(!dist[dst]);
                CHECK(paths[dst] == 0);
            }
        }
    }

    SubstochasticMatrix bad = p;
    bad.first_original = {2, 1, 2, 4};  // not non-decreasing
    CHECK_THROWS_AS(build_substochastic_emulator(bad), monge_error);
    bad = p;
    bad.one_col[1] = 1;  // entry left of its first original column
    CHECK_THROWS_AS(build_substochastic_emulator(bad), monge_error);
}

TEST_CASE("triangular emulators answer exactly the strict triangle") {
    Rng rng(4242);
    for (int n = 2; n <= 10; ++n) {
        for (int trial = 0; trial < 8; ++trial) {
            UnitMongeRep rep = random_canonical_rep(rng, n, n, /*signed_offsets=*/false);
            // Non-negative entries, as for distance matrices: a negative
            // entry cannot be realized by non-negative weights at all.
            IntMatrix m = reconstruct(rep);
            int64_t lo = 0;
            for (int64_t v : m.a) lo = std::min(lo, v);
            for (auto& v : rep.V) v -= lo;
            m = reconstruct(rep);

            for (Orientation orient : {Orientation::upper, Orientation::lower}) {
                TriangularMatrix t(n, orient);
                for (int i = 1; i <= n; ++i)
                    for (int j = 1; j <= n; ++j)
                        if (t.defined(i, j)) t.at(i, j) = m.at(i, j);

                EmulatorGraph g = build_triangular_emulator(t);
                CHECK(g.weights_normalized);
                CHECK(min_edge_weight(g) >= 0);
                for (int i = 1; i <= n; ++i) {
                    auto dist = g.dag_distances_from(*g.vertex_of({LabelKind::row_outer, i}));
                    for (int j = 1; j <= n; ++j) {
                        auto d = dist[*g.vertex_of({LabelKind::col_outer, j})];
                        bool strict =
                            orient == Orientation::upper ? i < j : i > j;
                        if (strict) {
                            REQUIRE(d);
                            CHECK(*d == m.at(i, j));
                        } else {
                            CHECK(!d);
                        }
                    }
                }
            }
        }
    }

    TriangularMatrix bad(3, Orientation::upper);
    bad.at(1, 2) = 0;
    bad.at(1, 3) = 0;
    bad.at(2, 3) = 5;  // vertical step of 5 inside the triangle
    CHECK_THROWS_AS(build_triangular_emulator(bad), monge_error);
}

TEST_CASE("padding to a square preserves structure and distances") {
    IntMatrix m = frozen_matrix();
    IntMatrix sq = pad_to_square(m);
    REQUIRE(sq.rows == 7);
    REQUIRE(sq.cols == 7);
    for (int i = 1; i <= 7; ++i)
        for (int j = 1; j <= 7; ++j) CHECK(sq.at(i, j) == m.at(std::min(i, 4), j));
    CHECK(is_unit_monge(sq));

    EmulatorGraph g = build_monge_emulator(sq);
    for (int x = 1; x <= 4; ++x) {
        auto dist = g.dag_distances_from(*g.vertex_of({LabelKind::row_outer, x}));
        for (int y = 1; y <= 7; ++y) {
            auto d = dist[*g.vertex_of({LabelKind::col_outer, y})];
            REQUIRE(d);
            CHECK(*d == m.at(x, y));
        }
    }

    IntMatrix tall(3, 1);
    tall.at(1, 1) = 4;
    tall.at(2, 1) = 3;
    tall.at(3, 1) = 2;
    IntMatrix tsq = pad_to_square(tall);
    REQUIRE(tsq.rows == 3);
    REQUIRE(tsq.cols == 3);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) CHECK(tsq.at(i, j) == tall.at(i, 1));
    CHECK_THROWS_AS(pad_to_square(IntMatrix{}), monge_error);
}

TEST_CASE("reweighting preserves distances and clears negative weights") {
    Rng rng(555);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + int(rng.below(7));
        int m = 2 + int(rng.below(9));
        UnitMongeRep rep = random_canonical_rep(rng, n, m, /*signed_offsets=*/true);

        // Shift the column offsets until the matrix is non-negative, so every
        // column minimum (the price the final hop re-adds) stays >= 0.
        IntMatrix mat = reconstruct(rep);
        int64_t lo = 0;
        for (int64_t v : mat.a) lo = std::min(lo, v);
        for (auto& v : rep.V) v -= lo;
        mat = reconstruct(rep);

        EmulatorGraph signed_g = build_monge_emulator_signed(rep);
        EmulatorGraph norm_g = reweight_nonnegative(signed_g);
        CHECK(norm_g.weights_normalized);
        CHECK(min_edge_weight(norm_g) >= 0);
        CHECK(norm_g.vertex_count == signed_g.vertex_count);

        for (int x = 1; x <= n; ++x) {
            auto ds = signed_g.dag_distances_from(*signed_g.vertex_of({LabelKind::row_outer, x}));
            auto dn = norm_g.dag_distances_from(*norm_g.vertex_of({LabelKind::row_outer, x}));
            for (int y = 1; y <= m; ++y) {
                auto s = ds[*signed_g.vertex_of({LabelKind::col_outer, y})];
                auto nrm = dn[*norm_g.vertex_of({LabelKind::col_outer, y})];
                REQUIRE(s);
                REQUIRE(nrm);
                CHECK(*s == mat.at(x, y));
                CHECK(*nrm == mat.at(x, y));
            }
        }
    }
}

TEST_CASE("representation serialization round-trips") {
    UnitMongeRep rep = frozen_rep();
    std::ostringstream os;
    write_unit_monge_rep(os, rep);
    CHECK(os.str() ==
          "4 7\n"
          "-3 -2 -1 0\n"
          "2 2 2 3 4 4 4\n"
          "1 2\n"
          "3 4\n"
          "5 6\n");

    std::istringstream is(os.str());
    UnitMongeRep back = read_unit_monge_rep(is);
    CHECK(same_rep(back, rep));

    Rng rng(9001);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + int(rng.below(8));
        int m = 1 + int(rng.below(8));
        UnitMongeRep r = n > 1 && m > 1
                             ? random_canonical_rep(rng, n, m, /*signed_offsets=*/true)
                             : UnitMongeRep{};
        if (r.U.empty()) {
            r.U.assign(n, 3);
            r.V.assign(m, -2);
            r.P.rows = std::max(0, 2 * (n - 1));
            r.P.cols = std::max(0, m - 1);
            r.P.one_col.assign(r.P.rows, std::nullopt);
        }
        std::ostringstream out;
        write_unit_monge_rep(out, r);
        std::istringstream in(out.str());
        CHECK(same_rep(read_unit_monge_rep(in), r));
    }

    std::istringstream truncated("3 4\n0 1 2\n");
    CHECK_THROWS_AS(read_unit_monge_rep(truncated), monge_error);
    std::istringstream junk_col("2 2\n0 0\n0 0\nx -\n");
    CHECK_THROWS_AS(read_unit_monge_rep(junk_col), monge_error);
    std::istringstream out_of_range("2 2\n0 0\n0 0\n9 -\n");
    CHECK_THROWS_AS(read_unit_monge_rep(out_of_range), monge_error);

    UnitMongeRep bad = frozen_rep();
    bad.P.rows = 4;  // dimension mismatch
    bad.P.one_col.resize(4);
    std::ostringstream sink;
    CHECK_THROWS_AS(write_unit_monge_rep(sink, bad), monge_error);
}

TEST_CASE("single-row and single-column matrices build star emulators") {
    IntMatrix row(1, 5);
    for (int j = 1; j <= 5; ++j) row.at(1, j) = 10 - j;
    EmulatorGraph g = build_monge_emulator(row);
    for (int j = 1; j <= 5; ++j)
        CHECK(emu_dist(g, {LabelKind::row_outer, 1}, {LabelKind::col_outer, j}) == 10 - j);

    IntMatrix col(4, 1);
    for (int i = 1; i <= 4; ++i) col.at(i, 1) = i + 2;
    EmulatorGraph h = build_monge_emulator(col);
    for (int i = 1; i <= 4; ++i)
        CHECK(emu_dist(h, {LabelKind::row_outer, i}, {LabelKind::col_outer, 1}) == i + 2);

    IntMatrix one(1, 1);
    one.at(1, 1) = 7;
    UnitMongeRep rep = decompose(one);
    CHECK(same_matrix(reconstruct(rep), one));
    EmulatorGraph s = build_monge_emulator(one);
    CHECK(emu_dist(s, {LabelKind::row_outer, 1}, {LabelKind::col_outer, 1}) == 7);
}
