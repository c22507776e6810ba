// Command-line front end: instance generators, emulator construction,
// verification against BFS, and queries over emulator files.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "planemu/builder.hpp"
#include "planemu/generators.hpp"
#include "planemu/oracle.hpp"
#include "planemu/plane_graph.hpp"
#include "planemu/query.hpp"

using namespace planemu;

namespace {

bool log_enabled() {
    const char* v = std::getenv("EMULATOR_LOG");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void log_line(const std::string& msg) {
    if (log_enabled()) std::cerr << "[planemu] " << msg << "\n";
}

struct InstanceOpts {
    std::vector<std::string> gen;
    std::string graph_file;
    std::vector<std::string> terminals;
    uint64_t seed = 1;
};

void add_instance_options(CLI::App* cmd, InstanceOpts& io, bool with_terminals) {
    cmd->add_option("--gen", io.gen,
                    "instance generator: grid A B | cylinder A B | "
                    "random-triangulation N | file PATH")
        ->expected(2, 3);
    cmd->add_option("--graph", io.graph_file, "plane graph file to read");
    cmd->add_option("--seed", io.seed, "seed for random generation and selection");
    if (with_terminals)
        cmd->add_option("--terminals", io.terminals,
                        "terminal selection: corners | random K | file PATH")
            ->expected(1, 2);
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw CLI::ValidationError(what + ": not an integer: " + s);
    }
}

PlaneGraph make_instance(const InstanceOpts& io) {
    if (!io.graph_file.empty()) {
        if (!io.gen.empty())
            throw CLI::ValidationError("--gen and --graph are mutually exclusive");
        return parse_plane_graph_file(io.graph_file);
    }
    if (io.gen.empty()) throw CLI::ValidationError("need --gen or --graph");
    const std::string& kind = io.gen[0];
    auto want = [&](size_t c) {
        if (io.gen.size() != c)
            throw CLI::ValidationError("--gen " + kind + ": wrong argument count");
    };
    if (kind == "grid") {
        want(3);
        return make_grid(parse_int(io.gen[1], "grid"), parse_int(io.gen[2], "grid"));
    }
    if (kind == "cylinder") {
        want(3);
        return make_cylinder(parse_int(io.gen[1], "cylinder"),
                             parse_int(io.gen[2], "cylinder"));
    }
    if (kind == "random-triangulation") {
        want(2);
        return make_random_triangulation(parse_int(io.gen[1], "random-triangulation"),
                                         io.seed);
    }
    if (kind == "file") {
        want(2);
        return parse_plane_graph_file(io.gen[1]);
    }
    throw CLI::ValidationError("unknown generator: " + kind);
}

std::vector<int> make_terminals(const InstanceOpts& io, const PlaneGraph& g) {
    if (io.terminals.empty()) throw CLI::ValidationError("need --terminals");
    const std::string& kind = io.terminals[0];
    auto want = [&](size_t c) {
        if (io.terminals.size() != c)
            throw CLI::ValidationError("--terminals " + kind + ": wrong argument count");
    };
    if (kind == "corners") {
        want(1);
        return terminals_corners(g);
    }
    if (kind == "random") {
        want(2);
        // Offset so the same --seed drives independent streams for the
        // graph and the terminal choice.
        return terminals_random(g, parse_int(io.terminals[1], "--terminals random"),
                                io.seed + 1);
    }
    if (kind == "file") {
        want(2);
        std::ifstream in(io.terminals[1]);
        if (!in) throw CLI::ValidationError("cannot open " + io.terminals[1]);
        std::vector<int> terms;
        int t;
        while (in >> t) terms.push_back(t);
        return terms;
    }
    throw CLI::ValidationError("unknown terminal selection: " + kind);
}

std::vector<std::vector<int>> adjacency_of(const PlaneGraph& g) {
    std::vector<std::vector<int>> adj(g.nv);
    for (int v = 0; v < g.nv; ++v) adj[v] = g.neighbors(v);
    return adj;
}

EmulatorFile read_emulator_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_emulator(in);
}

// Terminal ids recorded in an emulator, sorted.
std::vector<int> emulator_terminals(const EmulatorGraph& g) {
    std::vector<int> terms;
    for (const auto& [label, v] : g.labels)
        if (label.kind == LabelKind::terminal) terms.push_back(label.index);
    std::sort(terms.begin(), terms.end());
    return terms;
}

struct BuildArgs {
    InstanceOpts io;
    std::string mode = "auto";
    int width = 0;
    bool strict = false;
    std::string out;
    std::string stats_out;
};

int run_build(const BuildArgs& a) {
    PlaneGraph g = make_instance(a.io);
    std::vector<int> terms = make_terminals(a.io, g);
    auto mode = build_mode_from_name(a.mode);
    if (!mode) throw CLI::ValidationError("unknown mode: " + a.mode);
    BuildOptions opts;
    opts.mode = *mode;
    opts.width = a.width;
    log_line("building emulator: n=" + std::to_string(g.nv) +
             " k=" + std::to_string(terms.size()) + " mode=" + a.mode);
    BuildResult r = build_emulator(g, terms, opts);
    log_line("built: " + std::to_string(r.stats.total_vertices) + " vertices, " +
             std::to_string(r.stats.total_edges) + " edges, mode_used=" +
             r.stats.mode_used);
    std::string stats = r.stats.to_json();

    if (!a.out.empty()) {
        EmulatorFile f;
        f.n = r.stats.n;
        f.k = r.stats.k;
        f.mode = r.stats.mode_used;
        f.fallback = r.stats.fallback;
        f.stats_json = stats;
        f.graph = std::move(r.graph);
        std::ofstream out(a.out);
        if (!out) throw std::runtime_error("cannot write " + a.out);
        write_emulator(out, f);
    }
    if (!a.stats_out.empty()) {
        std::ofstream out(a.stats_out);
        if (!out) throw std::runtime_error("cannot write " + a.stats_out);
        out << stats << "\n";
    }
    std::cout << stats << "\n";
    if (a.strict && r.stats.fallback) {
        std::cerr << "strict: structural fallback: " << r.stats.fallback_reason << "\n";
        return 3;
    }
    return 0;
}

struct VerifyArgs {
    InstanceOpts io;
    std::string emulator_file;
    std::string mode = "auto";
    int width = 0;
    bool strict = false;
};

int run_verify(const VerifyArgs& a) {
    PlaneGraph g = make_instance(a.io);
    EmulatorGraph em;
    std::vector<int> terms;
    if (!a.emulator_file.empty()) {
        EmulatorFile f = read_emulator_file(a.emulator_file);
        em = std::move(f.graph);
        terms = emulator_terminals(em);
        if (f.n != g.nv)
            std::cerr << "note: emulator built for n=" << f.n << ", instance has n="
                      << g.nv << "\n";
        if (a.strict && f.fallback) {
            std::cerr << "strict: emulator was built through a structural fallback\n";
            return 3;
        }
    } else {
        terms = make_terminals(a.io, g);
        auto mode = build_mode_from_name(a.mode);
        if (!mode) throw CLI::ValidationError("unknown mode: " + a.mode);
        BuildOptions opts;
        opts.mode = *mode;
        opts.width = a.width;
        BuildResult r = build_emulator(g, terms, opts);
        if (a.strict && r.stats.fallback) {
            std::cerr << "strict: structural fallback: " << r.stats.fallback_reason
                      << "\n";
            return 3;
        }
        em = std::move(r.graph);
    }
    if (terms.empty()) throw std::runtime_error("no terminals to verify");

    log_line("verifying " + std::to_string(terms.size()) + " terminals");
    auto got = apsp_terminals(em, terms);
    auto want = bfs_apsp(adjacency_of(g), terms);
    int mismatches = 0;
    const int kMaxListed = 20;
    for (size_t i = 0; i < terms.size(); ++i)
        for (size_t j = 0; j < terms.size(); ++j) {
            std::optional<int64_t> gv = got[i][j];
            std::optional<int64_t> wv = want[i][terms[j]];
            if (gv == wv) continue;
            if (++mismatches <= kMaxListed) {
                auto txt = [](const std::optional<int64_t>& x) {
                    return x ? std::to_string(*x) : std::string("inf");
                };
                std::cout << "mismatch " << terms[i] << " " << terms[j] << ": emulator "
                          << txt(gv) << ", graph " << txt(wv) << "\n";
            }
        }
    if (mismatches > kMaxListed)
        std::cout << "... " << (mismatches - kMaxListed) << " more mismatches\n";
    int64_t pairs = int64_t(terms.size()) * (int64_t(terms.size()) - 1);
    if (mismatches == 0) {
        std::cout << "verify: PASS (k=" << terms.size() << ", pairs=" << pairs << ")\n";
        return 0;
    }
    std::cout << "verify: FAIL (" << mismatches << " of " << pairs << " pairs)\n";
    return 1;
}

int run_query(const std::string& emulator_file, int s, int t) {
    EmulatorFile f = read_emulator_file(emulator_file);
    if (!f.graph.vertex_of({LabelKind::terminal, s})) {
        std::cerr << "unknown terminal: " << s << "\n";
        return 2;
    }
    if (!f.graph.vertex_of({LabelKind::terminal, t})) {
        std::cerr << "unknown terminal: " << t << "\n";
        return 2;
    }
    std::optional<int64_t> d = query_distance(f.graph, s, t);
    if (d)
        std::cout << *d << "\n";
    else
        std::cout << "inf\n";
    return 0;
}

int run_apsp(const std::string& emulator_file, const std::string& out_path) {
    EmulatorFile f = read_emulator_file(emulator_file);
    std::vector<int> terms = emulator_terminals(f.graph);
    if (terms.empty()) throw std::runtime_error("emulator has no terminals");
    auto dist = apsp_terminals(f.graph, terms);
    if (out_path.empty()) {
        write_apsp_csv(std::cout, terms, dist);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        write_apsp_csv(out, terms, dist);
    }
    return 0;
}

int run_stats(const std::string& emulator_file) {
    EmulatorFile f = read_emulator_file(emulator_file);
    std::cout << f.stats_json << "\n";
    return 0;
}

struct GenArgs {
    InstanceOpts io;
    std::string out;
    std::string terminals_out;
};

int run_gen(const GenArgs& a) {
    PlaneGraph g = make_instance(a.io);
    if (a.out.empty()) {
        write_plane_graph(std::cout, g);
    } else {
        std::ofstream out(a.out);
        if (!out) throw std::runtime_error("cannot write " + a.out);
        write_plane_graph(out, g);
    }
    if (!a.terminals_out.empty()) {
        std::vector<int> terms = make_terminals(a.io, g);
        std::ofstream out(a.terminals_out);
        if (!out) throw std::runtime_error("cannot write " + a.terminals_out);
        for (int t : terms) out << t << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact distance emulators for unweighted planar graphs"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker cap (the pipeline is single-threaded)")
        ->check(CLI::PositiveNumber);

    BuildArgs build_args;
    CLI::App* build = app.add_subcommand("build", "construct an emulator");
    add_instance_options(build, build_args.io, true);
    build->add_option("--mode", build_args.mode, "auto | dense | monge");
    build->add_option("--width", build_args.width, "level-slab width (0 = automatic)");
    build->add_flag("--strict", build_args.strict,
                    "exit nonzero if the structural fallback fires");
    build->add_option("-o,--output", build_args.out, "emulator file to write");
    build->add_option("--stats-out", build_args.stats_out, "also write stats JSON here");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "compare emulator distances against BFS on the instance");
    add_instance_options(verify, verify_args.io, true);
    verify->add_option("--emulator", verify_args.emulator_file,
                       "emulator file (else an emulator is built in-process)");
    verify->add_option("--mode", verify_args.mode, "auto | dense | monge");
    verify->add_option("--width", verify_args.width, "level-slab width (0 = automatic)");
    verify->add_flag("--strict", verify_args.strict,
                     "exit 3 if the build needed a structural fallback");

    std::string query_file;
    int query_s = 0, query_t = 0;
    CLI::App* query = app.add_subcommand("query", "distance between two terminals");
    query->add_option("--emulator", query_file, "emulator file")->required();
    query->add_option("s", query_s, "source terminal (graph vertex id)")->required();
    query->add_option("t", query_t, "target terminal (graph vertex id)")->required();

    std::string apsp_file, apsp_out;
    CLI::App* apsp = app.add_subcommand("apsp", "all terminal pairs, CSV");
    apsp->add_option("--emulator", apsp_file, "emulator file")->required();
    apsp->add_option("-o,--output", apsp_out, "CSV file (default stdout)");

    std::string stats_file;
    CLI::App* stats = app.add_subcommand("stats", "print an emulator's build stats");
    stats->add_option("--emulator", stats_file, "emulator file")->required();

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "write a generated instance");
    add_instance_options(gen, gen_args.io, true);
    gen->add_option("-o,--output", gen_args.out, "graph file (default stdout)");
    gen->add_option("--terminals-out", gen_args.terminals_out,
                    "write the selected terminals here, one per line");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return run_build(build_args);
        if (verify->parsed()) return run_verify(verify_args);
        if (query->parsed()) return run_query(query_file, query_s, query_t);
        if (apsp->parsed()) return run_apsp(apsp_file, apsp_out);
        if (stats->parsed()) return run_stats(stats_file);
        if (gen->parsed()) return run_gen(gen_args);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
