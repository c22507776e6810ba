#include "planemu/monge.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace planemu {

bool is_unit_monge(const IntMatrix& m, std::string* why) {
    auto fail = [why](std::string s) {
        if (why) *why = std::move(s);
        return false;
    };
    for (int i = 1; i < m.rows; ++i) {
        for (int j = 1; j <= m.cols; ++j) {
            int64_t d = m.at(i + 1, j) - m.at(i, j);
            if (d < -1 || d > 1)
                return fail("vertical step " + std::to_string(d) + " at (" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
        }
        for (int j = 1; j < m.cols; ++j) {
            if (m.at(i, j) + m.at(i + 1, j + 1) < m.at(i, j + 1) + m.at(i + 1, j))
                return fail("Monge condition fails on the block at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
        }
    }
    return true;
}

UnitMongeRep decompose(const IntMatrix& m, bool validate) {
    if (m.rows < 1 || m.cols < 1) throw monge_error("cannot decompose an empty matrix");
    if (validate) {
        std::string why;
        if (!is_unit_monge(m, &why)) throw monge_error("not unit Monge: " + why);
    }
    int n = m.rows, mc = m.cols;
    UnitMongeRep rep;
    rep.U.resize(n);
    rep.V.resize(mc);
    for (int x = 1; x <= n; ++x) rep.U[x - 1] = m.at(x, mc) - m.at(n, mc);
    for (int y = 1; y <= mc; ++y) rep.V[y - 1] = m.at(n, y);

    rep.P.rows = 2 * (n - 1);
    rep.P.cols = mc - 1;
    rep.P.one_col.assign(rep.P.rows, std::nullopt);
    for (int x = 1; x < n; ++x) {
        // Density of the 2x2 block; non-negativity and a row sum of at most
        // two are exactly what the blockwise encoding needs.
        int cols_found[2];
        int found = 0;
        for (int j = 1; j < mc; ++j) {
            int64_t d = m.at(x, j) + m.at(x + 1, j + 1) - m.at(x, j + 1) - m.at(x + 1, j);
            if (d < 0 || d > 2) throw monge_error("block density out of range");
            if (found + d > 2) throw monge_error("block row sum exceeds two");
            for (int64_t t = 0; t < d; ++t) cols_found[found++] = j;
        }
        // Canonical packing: the smaller (or only) column in the block's
        // first row.  Reconstruction only cares about columns, but this makes
        // decompose(reconstruct(rep)) the identity on canonical reps.
        if (found >= 1) rep.P.one_col[2 * x - 2] = cols_found[0];
        if (found == 2) rep.P.one_col[2 * x - 1] = cols_found[1];
    }
    return rep;
}

IntMatrix reconstruct(const UnitMongeRep& rep) {
    int n = rep.n(), mc = rep.m();
    if (n < 1 || mc < 1) throw monge_error("cannot reconstruct an empty matrix");
    if (rep.P.rows != 2 * (n - 1) || rep.P.cols != mc - 1)
        throw monge_error("representation dimensions disagree");
    for (const auto& oc : rep.P.one_col)
        if (oc && (*oc < 1 || *oc > rep.P.cols))
            throw monge_error("entry column out of range");

    // suf[i][y] counts entries in rows >= i with column >= y.
    int pr = rep.P.rows, pc = rep.P.cols;
    std::vector<std::vector<int64_t>> suf(pr + 2, std::vector<int64_t>(pc + 2, 0));
    for (int i = pr; i >= 1; --i) {
        const auto& oc = rep.P.one_col[i - 1];
        for (int y = pc; y >= 1; --y)
            suf[i][y] = suf[i + 1][y] + suf[i][y + 1] - suf[i + 1][y + 1] +
                        ((oc && *oc == y) ? 1 : 0);
    }
    IntMatrix m(n, mc);
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= mc; ++y) {
            int64_t dom = (y <= pc) ? suf[std::min(2 * x - 1, pr + 1)][y] : 0;
            m.at(x, y) = rep.U[x - 1] + rep.V[y - 1] + dom;
        }
    return m;
}

IntMatrix pad_to_square(const IntMatrix& m) {
    if (m.rows < 1 || m.cols < 1) throw monge_error("cannot pad an empty matrix");
    int s = std::max(m.rows, m.cols);
    IntMatrix out(s, s);
    for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j) out.at(i, j) = m.at(std::min(i, m.rows), std::min(j, m.cols));
    return out;
}

namespace {

void validate_substochastic(const SubstochasticMatrix& p) {
    if (p.rows < 0 || p.cols < 0) throw monge_error("negative matrix dimensions");
    if (static_cast<int>(p.one_col.size()) != p.rows)
        throw monge_error("entry table size disagrees with row count");
    for (int i = 1; i <= p.rows; ++i) {
        const auto& oc = p.one_col[i - 1];
        if (oc && (*oc < 1 || *oc > p.cols)) throw monge_error("entry column out of range");
    }
    if (!p.triangular()) return;
    if (static_cast<int>(p.first_original.size()) != p.rows)
        throw monge_error("first-original table size disagrees with row count");
    for (int i = 1; i <= p.rows; ++i) {
        int a = p.first_original[i - 1];
        if (a < 1 || a > p.cols + 1) throw monge_error("first-original column out of range");
        if (i > 1 && a < p.first_original[i - 2])
            throw monge_error("first-original columns must be non-decreasing");
        if (p.one_col[i - 1] && *p.one_col[i - 1] < a)
            throw monge_error("entry sits left of its row's first original column");
    }
}

// Divide-and-conquer construction.  A node owns a row range and a sorted
// column list; it exposes one vertex per listed column, with the invariant
// that d(r[i], c_node[y]) counts the entries in {rows i..hi, columns >= y}
// whenever y >= first_col(i), and that no path reaches c_node[y] otherwise.
//
// Each child keeps the columns where reachability is mixed across its rows,
// the columns holding one of its entries, and the node's last column; every
// other column of the parent rounds up to the next kept one without passing
// an entry, so the child's counts transfer unchanged.
struct SubstochasticBuilder {
    const SubstochasticMatrix& p;
    EmulatorGraph& g;
    const std::vector<int32_t>& rvert;

    struct Level {
        std::vector<int> cols;
        std::vector<int32_t> vert;
        std::vector<int64_t> dom;  // entries in {node rows, column >= cols[t]}
    };

    Level run(int lo, int hi, std::vector<int> cols, const std::vector<int32_t>* preset) {
        Level out;
        out.cols = std::move(cols);
        int nc = static_cast<int>(out.cols.size());
        if (preset) {
            out.vert = *preset;
        } else {
            out.vert.reserve(nc);
            for (int t = 0; t < nc; ++t) out.vert.push_back(g.add_vertex());
        }
        out.dom.assign(nc, 0);

        if (lo == hi) {
            const auto& oc = p.one_col[lo - 1];
            int a = p.first_col(lo);
            for (int t = 0; t < nc; ++t) {
                int y = out.cols[t];
                out.dom[t] = (oc && *oc >= y) ? 1 : 0;
                if (y >= a) g.add_edge(rvert[lo - 1], out.vert[t], out.dom[t]);
            }
            return out;
        }

        int mid = lo + (hi - lo) / 2;
        auto select = [&](int clo, int chi) {
            int a_first = p.first_col(clo);
            int a_last = p.first_col(chi);
            std::unordered_set<int> entries;
            for (int i = clo; i <= chi; ++i)
                if (p.one_col[i - 1]) entries.insert(*p.one_col[i - 1]);
            std::vector<int> sub;
            for (int t = 0; t < nc; ++t) {
                int y = out.cols[t];
                bool mixed = y >= a_first && y < a_last;
                if (t == nc - 1 || mixed || (y >= a_last && entries.count(y)))
                    sub.push_back(y);
            }
            // Every entry column must already be listed at the parent, or
            // the rounding invariant above breaks.
            for (int w : entries)
                assert(std::binary_search(out.cols.begin(), out.cols.end(), w));
            return sub;
        };
        Level top = run(lo, mid, select(lo, mid), nullptr);
        Level bot = run(mid + 1, hi, select(mid + 1, hi), nullptr);

        int a_top = p.first_col(lo);
        int a_bot = p.first_col(mid + 1);
        for (int t = 0; t < nc; ++t) {
            int y = out.cols[t];
            int j1 = int(std::lower_bound(top.cols.begin(), top.cols.end(), y) - top.cols.begin());
            int j2 = int(std::lower_bound(bot.cols.begin(), bot.cols.end(), y) - bot.cols.begin());
            assert(j1 < int(top.cols.size()) && j2 < int(bot.cols.size()));
            out.dom[t] = top.dom[j1] + bot.dom[j2];
            if (y >= a_bot) g.add_edge(bot.vert[j2], out.vert[t], 0);
            if (y >= a_top) g.add_edge(top.vert[j1], out.vert[t], bot.dom[j2]);
        }
        return out;
    }
};

}  // namespace

EmulatorGraph build_substochastic_emulator(const SubstochasticMatrix& p) {
    validate_substochastic(p);
    EmulatorGraph g;
    std::vector<int32_t> rvert(p.rows), cvert(p.cols);
    for (int i = 1; i <= p.rows; ++i) {
        rvert[i - 1] = g.add_vertex();
        g.set_label({LabelKind::row, i}, rvert[i - 1]);
    }
    for (int y = 1; y <= p.cols; ++y) {
        cvert[y - 1] = g.add_vertex();
        g.set_label({LabelKind::col, y}, cvert[y - 1]);
    }
    if (p.rows == 0 || p.cols == 0) {
        g.weights_normalized = true;
        return g;
    }
    std::vector<int> all_cols(p.cols);
    for (int y = 1; y <= p.cols; ++y) all_cols[y - 1] = y;
    SubstochasticBuilder builder{p, g, rvert};
    builder.run(1, p.rows, std::move(all_cols), &cvert);
    g.weights_normalized = true;
    return g;
}

namespace {

// Hooks outer vertices onto the entry emulator so that d(r0[x], c0[y])
// equals U[x] + V[y] + (entries dominated by (2x-1, y)).  With `upper` set,
// paths exist exactly for x < y; otherwise for all pairs.
EmulatorGraph wire_outer(const UnitMongeRep& rep, bool upper) {
    int n = rep.n(), mc = rep.m();
    bool star = (n == 1 || mc == 1);
    if (!star && (rep.P.rows != 2 * (n - 1) || rep.P.cols != mc - 1))
        throw monge_error("representation dimensions disagree");

    EmulatorGraph g = star ? EmulatorGraph{} : build_substochastic_emulator(rep.P);
    std::vector<int32_t> r0(n), c0(mc);
    for (int x = 1; x <= n; ++x) {
        r0[x - 1] = g.add_vertex();
        g.set_label({LabelKind::row_outer, x}, r0[x - 1]);
    }
    for (int y = 1; y <= mc; ++y) {
        c0[y - 1] = g.add_vertex();
        g.set_label({LabelKind::col_outer, y}, c0[y - 1]);
    }
    if (star) {
        for (int x = 1; x <= n; ++x)
            for (int y = 1; y <= mc; ++y) {
                if (upper && !(x < y)) continue;
                g.add_edge(r0[x - 1], c0[y - 1], rep.U[x - 1] + rep.V[y - 1]);
            }
        return g;
    }
    for (int x = 1; x < n; ++x) {
        int32_t r = *g.vertex_of({LabelKind::row, 2 * x - 1});
        g.add_edge(r0[x - 1], r, rep.U[x - 1]);
    }
    for (int y = 1; y < mc; ++y) {
        int32_t c = *g.vertex_of({LabelKind::col, y});
        g.add_edge(c, c0[y - 1], rep.V[y - 1]);
    }
    int last_row = upper ? n - 1 : n;
    for (int x = 1; x <= last_row; ++x)
        g.add_edge(r0[x - 1], c0[mc - 1], rep.U[x - 1] + rep.V[mc - 1]);
    if (!upper)
        for (int y = 1; y < mc; ++y)
            g.add_edge(r0[n - 1], c0[y - 1], rep.U[n - 1] + rep.V[y - 1]);
    return g;
}

bool triangle_ok_upper(const TriangularMatrix& t, std::string* why) {
    auto fail = [why](std::string s) {
        if (why) *why = std::move(s);
        return false;
    };
    for (int i = 1; i < t.n; ++i) {
        for (int j = i + 1; j <= t.n; ++j) {
            int64_t d = t.at(i + 1, j) - t.at(i, j);
            if (d < -1 || d > 1)
                return fail("vertical step " + std::to_string(d) + " at (" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
        }
        for (int j = i + 1; j < t.n; ++j) {
            if (t.at(i, j) + t.at(i + 1, j + 1) < t.at(i, j + 1) + t.at(i + 1, j))
                return fail("Monge condition fails on the block at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
        }
    }
    return true;
}

EmulatorGraph build_upper_emulator(const TriangularMatrix& t, bool validate) {
    if (validate) {
        std::string why;
        if (!triangle_ok_upper(t, &why)) throw monge_error("not triangular unit Monge: " + why);
    }
    int n = t.n;
    // Fill below the diagonal so that the square matrix stays unit Monge and
    // every filled block has density zero: rows grow by the same diagonal
    // step everywhere left of the diagonal.
    std::vector<int64_t> s(n + 1, 0);  // s[i] accumulates the diagonal steps
    for (int i = 2; i <= n; ++i) s[i] = s[i - 1] + (t.at(i, i) - t.at(i - 1, i));
    IntMatrix full(n, n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            full.at(i, j) = (i <= j) ? t.at(i, j) : t.at(j, j) + s[i] - s[j];

    UnitMongeRep rep = decompose(full, /*validate=*/false);
    rep.P.first_original.resize(rep.P.rows);
    for (int i = 1; i <= rep.P.rows; ++i) {
        int block = (i + 1) / 2;
        rep.P.first_original[i - 1] = block + 1;
        assert(!rep.P.one_col[i - 1] || *rep.P.one_col[i - 1] >= block + 1);
    }
    return reweight_nonnegative(wire_outer(rep, /*upper=*/true));
}

}  // namespace

EmulatorGraph build_monge_emulator(const UnitMongeRep& rep) {
    if (rep.P.triangular())
        throw monge_error("full-matrix emulator expects a plain entry matrix");
    return reweight_nonnegative(wire_outer(rep, /*upper=*/false));
}

EmulatorGraph build_monge_emulator_signed(const UnitMongeRep& rep) {
    if (rep.P.triangular())
        throw monge_error("full-matrix emulator expects a plain entry matrix");
    return wire_outer(rep, /*upper=*/false);
}

EmulatorGraph build_monge_emulator(const IntMatrix& m, bool validate) {
    return build_monge_emulator(decompose(m, validate));
}

EmulatorGraph build_triangular_emulator(const TriangularMatrix& m, bool validate) {
    if (m.n < 1) throw monge_error("cannot build an emulator for an empty matrix");
    if (m.orient == Orientation::upper) return build_upper_emulator(m, validate);

    // Reflect through the anti-diagonal; the upper emulator of the reflection
    // answers d(r0[n+1-x], c0[n+1-y]) = M[x,y], so only the labels move.
    int n = m.n;
    TriangularMatrix refl(n, Orientation::upper);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) refl.at(i, j) = m.at(n + 1 - i, n + 1 - j);
    EmulatorGraph g = build_upper_emulator(refl, validate);
    std::unordered_map<Label, int32_t, LabelHash> relabeled;
    relabeled.reserve(g.labels.size());
    for (const auto& [label, v] : g.labels) {
        Label l = label;
        if (l.kind == LabelKind::row_outer || l.kind == LabelKind::col_outer)
            l.index = n + 1 - l.index;
        relabeled.emplace(l, v);
    }
    g.labels = std::move(relabeled);
    return g;
}

EmulatorGraph reweight_nonnegative(const EmulatorGraph& g) {
    std::vector<int32_t> topo = g.topo_order();
    EmulatorGraph::Adjacency adj = g.build_adjacency();

    // Sources are the outermost row tier: with r0 vertices present, paths
    // from bare r[i] vertices skip the row offsets and would drag the column
    // potentials below the true matrix minima, making the sink adjustment
    // negative.
    bool has_outer_rows = false;
    for (const auto& [label, v] : g.labels) {
        (void)v;
        if (label.kind == LabelKind::row_outer) has_outer_rows = true;
    }
    std::vector<std::optional<int64_t>> phi(g.vertex_count);
    bool has_row = false;
    for (const auto& [label, v] : g.labels)
        if (label.kind == (has_outer_rows ? LabelKind::row_outer : LabelKind::row)) {
            phi[v] = 0;
            has_row = true;
        }
    if (!has_row) throw emulator_error("reweighting needs at least one row vertex");
    for (int32_t u : topo) {
        if (!phi[u]) continue;
        for (int32_t j = adj.head[u]; j < adj.head[u + 1]; ++j) {
            int64_t cand = *phi[u] + adj.w[j];
            if (!phi[adj.to[j]] || cand < *phi[adj.to[j]]) phi[adj.to[j]] = cand;
        }
    }

    bool has_outer_cols = false;
    for (const auto& [label, v] : g.labels) {
        (void)v;
        if (label.kind == LabelKind::col_outer) has_outer_cols = true;
    }
    std::vector<char> sink(g.vertex_count, 0);
    for (const auto& [label, v] : g.labels)
        if (label.kind == (has_outer_cols ? LabelKind::col_outer : LabelKind::col)) sink[v] = 1;

    EmulatorGraph out;
    out.vertex_count = g.vertex_count;
    out.labels = g.labels;
    out.edges.reserve(g.edges.size());
    bool nonneg = true;
    for (const auto& e : g.edges) {
        if (sink[e.src]) throw emulator_error("sink vertices must not have outgoing edges");
        if (!phi[e.src]) continue;  // on no row-to-column path
        assert(phi[e.dst]);
        int64_t w = e.weight + *phi[e.src] - *phi[e.dst];
        assert(w >= 0);
        if (sink[e.dst]) w += *phi[e.dst];
        if (w < 0) nonneg = false;
        out.add_edge(e.src, e.dst, w, e.tag);
    }
    out.weights_normalized = nonneg;
    return out;
}

void write_unit_monge_rep(std::ostream& out, const UnitMongeRep& rep) {
    int n = rep.n(), mc = rep.m();
    if (rep.P.rows != std::max(0, 2 * (n - 1)) || rep.P.cols != std::max(0, mc - 1) ||
        rep.P.triangular())
        throw monge_error("representation dimensions disagree");
    out << n << ' ' << mc << '\n';
    for (int x = 1; x <= n; ++x) out << rep.U[x - 1] << (x == n ? '\n' : ' ');
    for (int y = 1; y <= mc; ++y) out << rep.V[y - 1] << (y == mc ? '\n' : ' ');
    for (int x = 1; x < n; ++x) {
        for (int r = 2 * x - 1; r <= 2 * x; ++r) {
            const auto& oc = rep.P.one_col[r - 1];
            if (oc)
                out << *oc;
            else
                out << '-';
            out << (r == 2 * x ? '\n' : ' ');
        }
    }
}

UnitMongeRep read_unit_monge_rep(std::istream& in) {
    int n = 0, mc = 0;
    if (!(in >> n >> mc) || n < 1 || mc < 1) throw monge_error("bad matrix dimensions");
    UnitMongeRep rep;
    rep.U.resize(n);
    rep.V.resize(mc);
    for (auto& u : rep.U)
        if (!(in >> u)) throw monge_error("bad row offsets");
    for (auto& v : rep.V)
        if (!(in >> v)) throw monge_error("bad column offsets");
    rep.P.rows = 2 * (n - 1);
    rep.P.cols = mc - 1;
    rep.P.one_col.assign(rep.P.rows, std::nullopt);
    for (int r = 1; r <= rep.P.rows; ++r) {
        std::string tok;
        if (!(in >> tok)) throw monge_error("bad entry line");
        if (tok == "-") continue;
        int y;
        try {
            y = std::stoi(tok);
        } catch (const std::exception&) {
            throw monge_error("bad entry column: " + tok);
        }
        if (y < 1 || y > rep.P.cols) throw monge_error("entry column out of range");
        rep.P.one_col[r - 1] = y;
    }
    return rep;
}

}  // namespace planemu
