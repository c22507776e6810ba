#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "planemu/emulator.hpp"

using namespace planemu;

namespace {

// Diamond over four vertices: two routes from 0 to 3 with different costs.
EmulatorGraph diamond() {
    EmulatorGraph g;
    for (int i = 0; i < 4; ++i) g.add_vertex();
    g.add_edge(0, 1, 1);
    g.add_edge(0, 2, 5);
    g.add_edge(1, 3, 10);
    g.add_edge(2, 3, 2);
    return g;
}

}  // namespace

TEST_CASE("labels print and parse consistently") {
    for (LabelKind kind : {LabelKind::row, LabelKind::col, LabelKind::row_outer,
                           LabelKind::col_outer, LabelKind::terminal, LabelKind::portal}) {
        for (int index : {1, 7, 120, 0, -3}) {
            Label l{kind, index};
            auto back = label_from_string(label_to_string(l));
            REQUIRE(back);
            CHECK(*back == l);
        }
    }
    CHECK(label_to_string({LabelKind::row, 2}) == "r2");
    CHECK(label_to_string({LabelKind::row_outer, 2}) == "r02");
    CHECK(label_to_string({LabelKind::terminal, 0}) == "t0");

    // Two-character kinds win over their one-character prefixes.
    auto outer = label_from_string("r05");
    REQUIRE(outer);
    CHECK(*outer == Label{LabelKind::row_outer, 5});

    CHECK(!label_from_string(""));
    CHECK(!label_from_string("r"));
    CHECK(!label_from_string("x3"));
    CHECK(!label_from_string("r3x"));
    CHECK(!label_from_string("t--1"));
}

TEST_CASE("piece tags print and parse consistently") {
    for (PieceTag t : {PieceTag::monge_core, PieceTag::b2b, PieceTag::t2sep, PieceTag::sep2b,
                       PieceTag::h2b, PieceTag::sep2h, PieceTag::leaf_h2b, PieceTag::leaf_t2b,
                       PieceTag::dense}) {
        auto back = piece_tag_from_name(piece_tag_name(t));
        REQUIRE(back);
        CHECK(*back == t);
    }
    CHECK(!piece_tag_from_name("unknown"));
    CHECK(!piece_tag_from_name(""));
}

TEST_CASE("adjacency groups edges by source") {
    EmulatorGraph g;
    for (int i = 0; i < 4; ++i) g.add_vertex();
    g.add_edge(2, 0, 7);
    g.add_edge(0, 1, 1);
    g.add_edge(2, 3, 9);
    g.add_edge(2, 0, 4);  // parallel edge

    EmulatorGraph::Adjacency adj = g.build_adjacency();
    REQUIRE(adj.head.size() == 5);
    CHECK(adj.head[0] == 0);
    CHECK(adj.head[1] - adj.head[0] == 1);  // vertex 0
    CHECK(adj.head[2] - adj.head[1] == 0);  // vertex 1
    CHECK(adj.head[3] - adj.head[2] == 3);  // vertex 2
    CHECK(adj.head[4] - adj.head[3] == 0);  // vertex 3
    CHECK(adj.to[adj.head[0]] == 1);
    CHECK(adj.w[adj.head[0]] == 1);
    int64_t sum = 0;
    for (int32_t j = adj.head[2]; j < adj.head[3]; ++j) sum += adj.w[j];
    CHECK(sum == 7 + 9 + 4);
}

TEST_CASE("topological order exists exactly for acyclic graphs") {
    EmulatorGraph g = diamond();
    std::vector<int32_t> order = g.topo_order();
    REQUIRE(order.size() == 4);
    std::vector<int> pos(4);
    for (int i = 0; i < 4; ++i) pos[order[i]] = i;
    for (const auto& e : g.edges) CHECK(pos[e.src] < pos[e.dst]);

    g.add_edge(3, 0, 1);  // close a cycle
    CHECK_THROWS_AS(g.topo_order(), emulator_error);

    EmulatorGraph loop;
    loop.add_vertex();
    loop.add_edge(0, 0, 1);
    CHECK_THROWS_AS(loop.topo_order(), emulator_error);

    EmulatorGraph empty;
    CHECK(empty.topo_order().empty());
}

TEST_CASE("dag distances take the cheaper route and mark unreachable") {
    EmulatorGraph g = diamond();
    int32_t extra = g.add_vertex();  // no incoming edges
    auto dist = g.dag_distances_from(0);
    REQUIRE(dist[3]);
    CHECK(*dist[3] == 7);  // 0 -> 2 -> 3 beats 0 -> 1 -> 3
    CHECK(*dist[1] == 1);
    CHECK(*dist[2] == 5);
    CHECK(!dist[extra]);

    // Negative weights are fine along a DAG.
    EmulatorGraph neg;
    for (int i = 0; i < 3; ++i) neg.add_vertex();
    neg.add_edge(0, 1, -4);
    neg.add_edge(1, 2, 3);
    neg.add_edge(0, 2, 0);
    auto nd = neg.dag_distances_from(0);
    CHECK(*nd[2] == -1);
}

TEST_CASE("splice appends vertices with a fresh tag and returns the offset") {
    EmulatorGraph base = diamond();
    base.set_label({LabelKind::terminal, 1}, 0);

    EmulatorGraph piece;
    piece.add_vertex();
    piece.add_vertex();
    piece.add_edge(0, 1, 6, PieceTag::monge_core);
    piece.set_label({LabelKind::row, 1}, 0);

    int32_t offset = base.splice(piece, PieceTag::sep2b);
    CHECK(offset == 4);
    CHECK(base.vertex_count == 6);
    REQUIRE(base.edges.size() == 5);
    CHECK(base.edges.back().src == 4);
    CHECK(base.edges.back().dst == 5);
    CHECK(base.edges.back().weight == 6);
    CHECK(base.edges.back().tag == PieceTag::sep2b);
    // Labels stay with the host graph; the piece's labels are not imported.
    CHECK(base.labels.size() == 1);
    CHECK(base.vertex_of({LabelKind::terminal, 1}));
    CHECK(!base.vertex_of({LabelKind::row, 1}));
}

TEST_CASE("pruning drops edges unreachable from the sources but keeps labels") {
    EmulatorGraph g = diamond();
    // An island: 4 -> 5, unreachable from vertex 0.
    int32_t a = g.add_vertex();
    int32_t b = g.add_vertex();
    g.add_edge(a, b, 1);
    // A labeled but unreachable vertex must survive with its label.
    int32_t c = g.add_vertex();
    g.set_label({LabelKind::terminal, 9}, c);
    g.set_label({LabelKind::terminal, 1}, 0);
    g.set_label({LabelKind::terminal, 3}, 3);

    g.prune_unreachable({0});
    // Kept: the four diamond vertices and the labeled island vertex.
    CHECK(g.vertex_count == 5);
    CHECK(g.edges.size() == 4);
    auto s = g.vertex_of({LabelKind::terminal, 1});
    auto t = g.vertex_of({LabelKind::terminal, 3});
    auto lone = g.vertex_of({LabelKind::terminal, 9});
    REQUIRE(s);
    REQUIRE(t);
    REQUIRE(lone);
    auto dist = g.dag_distances_from(*s);
    REQUIRE(dist[*t]);
    CHECK(*dist[*t] == 7);
    CHECK(!dist[*lone]);
}

TEST_CASE("size cost counts vertices plus edges") {
    EmulatorGraph g = diamond();
    CHECK(g.size_cost() == 4 + 4);
    g.add_vertex();
    CHECK(g.size_cost() == 9);
}

TEST_CASE("emulator files round-trip and serialize deterministically") {
    EmulatorFile f;
    f.n = 12;
    f.k = 3;
    f.mode = "monge";
    f.fallback = true;
    f.stats_json = "{\"schema\":1}";
    f.graph = diamond();
    f.graph.weights_normalized = true;
    f.graph.set_label({LabelKind::terminal, 4}, 0);
    f.graph.set_label({LabelKind::portal, 2}, 3);
    f.graph.edges[1].tag = PieceTag::t2sep;
    f.graph.edges[2].tag = PieceTag::dense;

    std::ostringstream first, second;
    write_emulator(first, f);
    write_emulator(second, f);
    CHECK(first.str() == second.str());

    std::istringstream in(first.str());
    EmulatorFile back = read_emulator(in);
    CHECK(back.n == f.n);
    CHECK(back.k == f.k);
    CHECK(back.mode == f.mode);
    CHECK(back.fallback == f.fallback);
    CHECK(back.stats_json == f.stats_json);
    CHECK(back.graph.vertex_count == f.graph.vertex_count);
    CHECK(back.graph.weights_normalized);
    REQUIRE(back.graph.labels.size() == 2);
    CHECK(back.graph.vertex_of({LabelKind::terminal, 4}) == 0);
    CHECK(back.graph.vertex_of({LabelKind::portal, 2}) == 3);

    // Writing the parsed file again reproduces the bytes.
    std::ostringstream third;
    write_emulator(third, back);
    CHECK(third.str() == first.str());

    // Shuffled edge order serializes to the same bytes.
    EmulatorFile shuffled = f;
    std::swap(shuffled.graph.edges[0], shuffled.graph.edges[3]);
    std::ostringstream fourth;
    write_emulator(fourth, shuffled);
    CHECK(fourth.str() == first.str());
}

TEST_CASE("a tiny emulator file has the expected bytes") {
    EmulatorFile f;
    f.n = 2;
    f.k = 1;
    f.mode = "dense";
    f.graph.add_vertex();
    f.graph.add_vertex();
    f.graph.add_edge(0, 1, 3, PieceTag::dense);
    f.graph.set_label({LabelKind::terminal, 0}, 0);
    std::ostringstream out;
    write_emulator(out, f);
    CHECK(out.str() ==
          "emulator 1\n"
          "2 1 dense 0\n"
          "stats {}\n"
          "2 1\n"
          "1\n"
          "0 t0\n"
          "0 1 3 dense\n");
}

TEST_CASE("emulator reader flags negative weights and rejects malformed input") {
    std::istringstream neg(
        "emulator 1\n"
        "2 1 matrix 0\n"
        "stats {}\n"
        "2 1\n"
        "0\n"
        "0 1 -5 monge_core\n");
    EmulatorFile f = read_emulator(neg);
    CHECK(!f.graph.weights_normalized);
    REQUIRE(f.graph.edges.size() == 1);
    CHECK(f.graph.edges[0].weight == -5);

    auto rejects = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_emulator(in), emulator_error);
    };
    rejects("");
    rejects("notemulator 1\n");
    rejects("emulator 2\n");
    rejects("emulator 1\n5 2 monge\n");             // truncated header
    rejects("emulator 1\n5 2 monge 0\nnope {}\n");  // missing stats line
    rejects(
        "emulator 1\n5 2 monge 0\nstats {}\n"
        "2 0\n1\n9 t1\n");  // label vertex out of range
    rejects(
        "emulator 1\n5 2 monge 0\nstats {}\n"
        "2 0\n1\n0 z1\n");  // unknown label kind
    rejects(
        "emulator 1\n5 2 monge 0\nstats {}\n"
        "2 1\n0\n0 7 1 dense\n");  // edge endpoint out of range
    rejects(
        "emulator 1\n5 2 monge 0\nstats {}\n"
        "2 1\n0\n0 1 1 nosuchtag\n");
    rejects(
        "emulator 1\n5 2 monge 0\nstats {}\n"
        "2 1\n0\n0 1\n");  // truncated edge line
}
