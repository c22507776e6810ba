#include "planemu/query.hpp"

#include <ostream>
#include <queue>

namespace planemu {

std::vector<std::optional<int64_t>> dijkstra(const EmulatorGraph& g, int32_t src) {
    auto adj = g.build_adjacency();
    std::vector<std::optional<int64_t>> dist(g.vertex_count);
    using Item = std::pair<int64_t, int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[src] = 0;
    heap.emplace(0, src);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (*dist[u] != d) continue;  // stale entry
        for (int32_t i = adj.head[u]; i < adj.head[u + 1]; ++i) {
            if (adj.w[i] < 0) throw emulator_error("negative edge weight in dijkstra");
            int64_t nd = d + adj.w[i];
            int32_t v = adj.to[i];
            if (!dist[v] || nd < *dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return dist;
}

std::optional<int64_t> query_distance(const EmulatorGraph& g, int terminal_a,
                                      int terminal_b) {
    auto a = g.vertex_of({LabelKind::terminal, terminal_a});
    auto b = g.vertex_of({LabelKind::terminal, terminal_b});
    if (!a || !b) throw emulator_error("unknown terminal label");
    if (terminal_a == terminal_b) return 0;
    return dijkstra(g, *a)[*b];
}

std::vector<std::vector<std::optional<int64_t>>> apsp_terminals(
    const EmulatorGraph& g, const std::vector<int>& terminals) {
    size_t k = terminals.size();
    std::vector<int32_t> ids(k);
    for (size_t i = 0; i < k; ++i) {
        auto v = g.vertex_of({LabelKind::terminal, terminals[i]});
        if (!v) throw emulator_error("unknown terminal label");
        ids[i] = *v;
    }
    std::vector<std::vector<std::optional<int64_t>>> out(k);
    for (size_t i = 0; i < k; ++i) {
        auto dist = dijkstra(g, ids[i]);
        out[i].resize(k);
        for (size_t j = 0; j < k; ++j) out[i][j] = dist[ids[j]];
    }
    for (size_t i = 0; i < k; ++i) {
        if (!out[i][i] || *out[i][i] != 0)
            throw emulator_error("terminal self-distance is not zero");
        for (size_t j = i + 1; j < k; ++j) {
            bool same = out[i][j].has_value() == out[j][i].has_value() &&
                        (!out[i][j] || *out[i][j] == *out[j][i]);
            if (!same) throw emulator_error("terminal distance matrix is asymmetric");
        }
    }
    return out;
}

void write_apsp_csv(std::ostream& out, const std::vector<int>& terminals,
                    const std::vector<std::vector<std::optional<int64_t>>>& dist) {
    out << "terminal";
    for (int t : terminals) out << ',' << t;
    out << '\n';
    for (size_t i = 0; i < terminals.size(); ++i) {
        out << terminals[i];
        for (size_t j = 0; j < terminals.size(); ++j) {
            out << ',';
            if (dist[i][j])
                out << *dist[i][j];
            else
                out << "inf";
        }
        out << '\n';
    }
}

}  // namespace planemu
