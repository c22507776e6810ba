#include "planemu/emulator.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>

namespace planemu {

namespace {

constexpr const char* kTagNames[] = {
    "monge_core", "b2b", "t2sep", "sep2b", "h2b", "sep2h", "leaf_h2b", "leaf_t2b", "dense",
};
constexpr int kNumTags = int(sizeof(kTagNames) / sizeof(kTagNames[0]));

constexpr const char* kKindNames[] = {"r", "c", "r0", "c0", "t", "p"};

}  // namespace

const char* piece_tag_name(PieceTag t) {
    int i = int(t);
    assert(i >= 0 && i < kNumTags);
    return kTagNames[i];
}

std::optional<PieceTag> piece_tag_from_name(const std::string& s) {
    for (int i = 0; i < kNumTags; ++i)
        if (s == kTagNames[i]) return PieceTag(i);
    return std::nullopt;
}

std::string label_to_string(const Label& l) {
    return std::string(kKindNames[int(l.kind)]) + std::to_string(l.index);
}

std::optional<Label> label_from_string(const std::string& s) {
    auto try_prefix = [&s](const char* p) -> std::optional<int> {
        size_t n = std::string(p).size();
        if (s.size() <= n || s.compare(0, n, p) != 0) return std::nullopt;
        for (size_t i = n; i < s.size(); ++i) {
            char c = s[i];
            if (c == '-' && i == n) continue;
            if (c < '0' || c > '9') return std::nullopt;
        }
        return std::stoi(s.substr(n));
    };
    // Two-character kinds must win over their one-character prefixes.
    if (auto v = try_prefix("r0")) return Label{LabelKind::row_outer, *v};
    if (auto v = try_prefix("c0")) return Label{LabelKind::col_outer, *v};
    if (auto v = try_prefix("r")) return Label{LabelKind::row, *v};
    if (auto v = try_prefix("c")) return Label{LabelKind::col, *v};
    if (auto v = try_prefix("t")) return Label{LabelKind::terminal, *v};
    if (auto v = try_prefix("p")) return Label{LabelKind::portal, *v};
    return std::nullopt;
}

EmulatorGraph::Adjacency EmulatorGraph::build_adjacency() const {
    Adjacency a;
    a.head.assign(vertex_count + 1, 0);
    for (const auto& e : edges) a.head[e.src + 1]++;
    for (int32_t v = 0; v < vertex_count; ++v) a.head[v + 1] += a.head[v];
    a.to.resize(edges.size());
    a.w.resize(edges.size());
    std::vector<int32_t> cursor(a.head.begin(), a.head.end() - 1);
    for (const auto& e : edges) {
        int32_t slot = cursor[e.src]++;
        a.to[slot] = e.dst;
        a.w[slot] = e.weight;
    }
    return a;
}

std::vector<int32_t> EmulatorGraph::topo_order() const {
    std::vector<int32_t> indeg(vertex_count, 0);
    for (const auto& e : edges) indeg[e.dst]++;
    Adjacency adj = build_adjacency();
    std::vector<int32_t> order;
    order.reserve(vertex_count);
    for (int32_t v = 0; v < vertex_count; ++v)
        if (indeg[v] == 0) order.push_back(v);
    for (size_t i = 0; i < order.size(); ++i) {
        int32_t u = order[i];
        for (int32_t j = adj.head[u]; j < adj.head[u + 1]; ++j) {
            if (--indeg[adj.to[j]] == 0) order.push_back(adj.to[j]);
        }
    }
    if (int32_t(order.size()) != vertex_count)
        throw emulator_error("topological order requested on a graph with a cycle");
    return order;
}

std::vector<std::optional<int64_t>> EmulatorGraph::dag_distances_from(int32_t src) const {
    std::vector<int32_t> order = topo_order();
    Adjacency adj = build_adjacency();
    std::vector<std::optional<int64_t>> dist(vertex_count);
    dist[src] = 0;
    for (int32_t u : order) {
        if (!dist[u]) continue;
        for (int32_t j = adj.head[u]; j < adj.head[u + 1]; ++j) {
            int64_t cand = *dist[u] + adj.w[j];
            if (!dist[adj.to[j]] || cand < *dist[adj.to[j]]) dist[adj.to[j]] = cand;
        }
    }
    return dist;
}

int32_t EmulatorGraph::splice(const EmulatorGraph& other, PieceTag retag) {
    int32_t offset = vertex_count;
    vertex_count += other.vertex_count;
    edges.reserve(edges.size() + other.edges.size());
    for (const auto& e : other.edges)
        edges.push_back({e.src + offset, e.dst + offset, e.weight, retag});
    return offset;
}

void EmulatorGraph::prune_unreachable(const std::vector<int32_t>& sources) {
    Adjacency adj = build_adjacency();
    std::vector<char> seen(vertex_count, 0);
    std::vector<int32_t> stack;
    for (int32_t s : sources)
        if (!seen[s]) {
            seen[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        int32_t u = stack.back();
        stack.pop_back();
        for (int32_t j = adj.head[u]; j < adj.head[u + 1]; ++j)
            if (!seen[adj.to[j]]) {
                seen[adj.to[j]] = 1;
                stack.push_back(adj.to[j]);
            }
    }
    // Labeled vertices stay addressable even when unreachable.
    for (const auto& [label, v] : labels) {
        (void)label;
        seen[v] = 1;
    }
    std::vector<int32_t> remap(vertex_count, -1);
    int32_t next = 0;
    for (int32_t v = 0; v < vertex_count; ++v)
        if (seen[v]) remap[v] = next++;
    std::vector<EmulatorEdge> kept;
    kept.reserve(edges.size());
    for (const auto& e : edges)
        if (remap[e.src] >= 0 && remap[e.dst] >= 0)
            kept.push_back({remap[e.src], remap[e.dst], e.weight, e.tag});
    edges = std::move(kept);
    for (auto& [label, v] : labels) {
        (void)label;
        v = remap[v];
    }
    vertex_count = next;
}

void write_emulator(std::ostream& out, const EmulatorFile& f) {
    out << "emulator 1\n";
    out << f.n << ' ' << f.k << ' ' << f.mode << ' ' << (f.fallback ? 1 : 0) << '\n';
    out << "stats " << (f.stats_json.empty() ? "{}" : f.stats_json) << '\n';
    out << f.graph.vertex_count << ' ' << f.graph.edges.size() << '\n';

    // Vertex labels, ordered by vertex id then label text.
    std::vector<std::pair<int32_t, std::string>> labeled;
    labeled.reserve(f.graph.labels.size());
    for (const auto& [label, v] : f.graph.labels)
        labeled.emplace_back(v, label_to_string(label));
    std::sort(labeled.begin(), labeled.end());
    out << labeled.size() << '\n';
    for (const auto& [v, text] : labeled) out << v << ' ' << text << '\n';

    std::vector<EmulatorEdge> sorted = f.graph.edges;
    std::sort(sorted.begin(), sorted.end(), [](const EmulatorEdge& a, const EmulatorEdge& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.dst != b.dst) return a.dst < b.dst;
        if (a.weight != b.weight) return a.weight < b.weight;
        return int(a.tag) < int(b.tag);
    });
    for (const auto& e : sorted)
        out << e.src << ' ' << e.dst << ' ' << e.weight << ' ' << piece_tag_name(e.tag) << '\n';
}

EmulatorFile read_emulator(std::istream& in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "emulator" || version != 1)
        throw emulator_error("not an emulator file");
    EmulatorFile f;
    int fallback = 0;
    if (!(in >> f.n >> f.k >> f.mode >> fallback))
        throw emulator_error("bad emulator header");
    f.fallback = fallback != 0;
    std::string word;
    if (!(in >> word) || word != "stats") throw emulator_error("missing stats line");
    std::getline(in, f.stats_json);
    if (!f.stats_json.empty() && f.stats_json.front() == ' ') f.stats_json.erase(0, 1);
    size_t num_edges = 0;
    if (!(in >> f.graph.vertex_count >> num_edges))
        throw emulator_error("bad emulator size line");
    size_t num_labels = 0;
    if (!(in >> num_labels)) throw emulator_error("bad label count");
    for (size_t i = 0; i < num_labels; ++i) {
        int32_t v;
        std::string text;
        if (!(in >> v >> text)) throw emulator_error("bad label line");
        auto label = label_from_string(text);
        if (!label || v < 0 || v >= f.graph.vertex_count)
            throw emulator_error("bad label entry: " + text);
        f.graph.set_label(*label, v);
    }
    f.graph.edges.reserve(num_edges);
    int64_t min_weight = 0;
    for (size_t i = 0; i < num_edges; ++i) {
        int32_t s, d;
        int64_t w;
        std::string tag_text;
        if (!(in >> s >> d >> w >> tag_text)) throw emulator_error("bad edge line");
        auto tag = piece_tag_from_name(tag_text);
        if (!tag || s < 0 || s >= f.graph.vertex_count || d < 0 || d >= f.graph.vertex_count)
            throw emulator_error("bad edge entry");
        min_weight = std::min(min_weight, w);
        f.graph.add_edge(s, d, w, *tag);
    }
    f.graph.weights_normalized = min_weight >= 0;
    return f;
}

}  // namespace planemu
