#pragma once

#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "rgs/graph.hpp"

namespace rgs {

/// Capacitated digraph over {gamma, Id, beta_1..beta_k}. Node 0 is the source
/// gamma, node 1 the sink Id, node 2+i is beta_i. Three edge types:
///   c(gamma, beta_i) = s_i,  c(beta_i, Id) = t_i,  c(beta_i, beta_j) = e_{i,j}
/// in both directions.
struct FlowNetwork {
    static constexpr int source = 0;
    static constexpr int sink = 1;
    int k = 0;
    std::vector<std::vector<int>> capacity;  // (k+2) x (k+2)

    static int beta_node(int i) { return 2 + i; }
    int nodes() const { return k + 2; }
};

struct FlowPath {
    std::vector<int> nodes;  // gamma ... Id
    int units = 0;
};

struct FlowResult {
    int value = 0;
    std::vector<FlowPath> paths;             // augmenting paths in discovery order
    std::vector<std::vector<int>> flow;      // f(u,v), skew-symmetric
    std::vector<std::vector<int>> residual;  // c(u,v) - f(u,v)
};

inline FlowNetwork build_network(const FattenedGraph& g) {
    FlowNetwork net;
    net.k = g.k;
    net.capacity.assign(net.nodes(), std::vector<int>(net.nodes(), 0));
    for (int i = 0; i < g.k; ++i) {
        net.capacity[FlowNetwork::source][FlowNetwork::beta_node(i)] = g.s[i];
        net.capacity[FlowNetwork::beta_node(i)][FlowNetwork::sink] = g.t[i];
        for (int j = 0; j < g.k; ++j)
            if (j != i)
                net.capacity[FlowNetwork::beta_node(i)][FlowNetwork::beta_node(j)] = g.mult[i][j];
    }

    // every beta node must lie on some gamma -> Id path
    auto reach = [&](int from, bool forward) {
        std::vector<bool> seen(net.nodes(), false);
        seen[from] = true;
        std::queue<int> q;
        q.push(from);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v = 0; v < net.nodes(); ++v) {
                const int cap = forward ? net.capacity[u][v] : net.capacity[v][u];
                if (cap > 0 && !seen[v]) {
                    seen[v] = true;
                    q.push(v);
                }
            }
        }
        return seen;
    };
    const auto from_source = reach(FlowNetwork::source, true);
    const auto to_sink = reach(FlowNetwork::sink, false);
    for (int i = 0; i < g.k; ++i) {
        const int b = FlowNetwork::beta_node(i);
        if (!from_source[b] || !to_sink[b])
            throw std::invalid_argument("build_network: vertex " + g.vertex_names[i] +
                                        " lies on no source-sink path");
    }
    return net;
}

/// Edmonds-Karp: repeatedly augment along a shortest residual path. The BFS
/// scans neighbors in node-index order, so the decomposition is deterministic.
inline FlowResult max_flow(const FlowNetwork& net) {
    const int n = net.nodes();
    FlowResult res;
    res.flow.assign(n, std::vector<int>(n, 0));
    res.residual = net.capacity;

    for (;;) {
        std::vector<int> parent(n, -1);
        parent[FlowNetwork::source] = FlowNetwork::source;
        std::queue<int> q;
        q.push(FlowNetwork::source);
        while (!q.empty() && parent[FlowNetwork::sink] < 0) {
            const int u = q.front();
            q.pop();
            for (int v = 0; v < n; ++v)
                if (parent[v] < 0 && res.residual[u][v] > 0) {
                    parent[v] = u;
                    q.push(v);
                }
        }
        if (parent[FlowNetwork::sink] < 0) break;

        std::vector<int> path;
        int bottleneck = INT32_MAX;
        for (int v = FlowNetwork::sink; v != FlowNetwork::source; v = parent[v]) {
            path.push_back(v);
            bottleneck = std::min(bottleneck, res.residual[parent[v]][v]);
        }
        path.push_back(FlowNetwork::source);
        std::reverse(path.begin(), path.end());

        for (size_t i = 0; i + 1 < path.size(); ++i) {
            const int u = path[i], v = path[i + 1];
            res.flow[u][v] += bottleneck;
            res.flow[v][u] -= bottleneck;
            res.residual[u][v] -= bottleneck;
            res.residual[v][u] += bottleneck;
        }
        res.paths.push_back({std::move(path), bottleneck});
        res.value += bottleneck;
    }
    return res;
}

inline int max_flow_value(const FattenedGraph& g) { return max_flow(build_network(g)).value; }

} // namespace rgs
