#include "planemu/oracle.hpp"

#include <queue>

namespace planemu {

std::vector<std::vector<std::optional<int64_t>>> bfs_apsp(
    const std::vector<std::vector<int>>& adj, const std::vector<int>& sources) {
    std::vector<std::vector<std::optional<int64_t>>> out;
    out.reserve(sources.size());
    for (int s : sources) {
        std::vector<int64_t> d = bfs_from(adj, s);
        std::vector<std::optional<int64_t>> row(d.size());
        for (size_t v = 0; v < d.size(); ++v)
            if (d[v] >= 0) row[v] = d[v];
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<int64_t> bfs_from(const std::vector<std::vector<int>>& adj, int src,
                              const std::vector<char>& allowed) {
    std::vector<int64_t> dist(adj.size(), -1);
    if (!allowed.empty() && !allowed[src]) return dist;
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u]) {
            if (!allowed.empty() && !allowed[v]) continue;
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

int64_t dominance_count(const std::vector<int>& one_col, int cols, int x, int y) {
    int64_t total = 0;
    for (size_t i = 0; i < one_col.size(); ++i) {
        if (static_cast<int>(i) + 1 < x) continue;
        int c = one_col[i];
        if (c >= y && c <= cols) ++total;
    }
    return total;
}

}  // namespace planemu
