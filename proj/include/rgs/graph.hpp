#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rgs/errors.hpp"

namespace rgs {

/// Fattened graph data for a base graph G: per-vertex degrees d_i, edge
/// multiplicities e_{i,j}, and the half-edge split counts (s_i, t_i) that fix
/// the marginal {S, T}. Immutable after loading.
///
/// Loops are rejected: the flow network has no self-edges, so the flow/area
/// equivalence is not established for them here.
struct FattenedGraph {
    std::string name;
    std::vector<std::string> vertex_names;
    int k = 0;                           // vertex count
    int m = 0;                           // edge count (multiplicities summed)
    std::vector<int> degree;             // d_i = sum_j e_{i,j}
    std::vector<std::vector<int>> mult;  // e_{i,j}, symmetric, zero diagonal
    std::vector<int> s;                  // kept half-edges per vertex
    std::vector<int> t;                  // traced half-edges, t_i = d_i - s_i

    int total_s() const {
        int x = 0;
        for (int v : s) x += v;
        return x;
    }
    int total_t() const {
        int x = 0;
        for (int v : t) x += v;
        return x;
    }

    /// Edge list with parallel edges expanded, (i, j) with i < j, sorted.
    std::vector<std::pair<int, int>> edge_list() const {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                for (int r = 0; r < mult[i][j]; ++r) edges.emplace_back(i, j);
        return edges;
    }
};

inline FattenedGraph make_graph(std::string name, std::vector<std::string> vertices,
                                const std::vector<std::pair<int, int>>& edges,
                                const std::vector<int>& s) {
    FattenedGraph g;
    g.name = std::move(name);
    g.vertex_names = std::move(vertices);
    g.k = static_cast<int>(g.vertex_names.size());
    if (g.k < 1) throw std::invalid_argument("graph: no vertices");
    g.mult.assign(g.k, std::vector<int>(g.k, 0));
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= g.k || b >= g.k)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (a == b) throw std::invalid_argument("graph: loops are not supported");
        ++g.mult[a][b];
        ++g.mult[b][a];
        ++g.m;
    }
    g.degree.assign(g.k, 0);
    for (int i = 0; i < g.k; ++i)
        for (int j = 0; j < g.k; ++j) g.degree[i] += g.mult[i][j];
    int degree_sum = 0;
    for (int d : g.degree) degree_sum += d;
    if (degree_sum != 2 * g.m) throw std::invalid_argument("graph: degree sum != 2m");

    if (static_cast<int>(s.size()) != g.k)
        throw std::invalid_argument("graph: s has wrong length");
    g.s = s;
    g.t.resize(g.k);
    for (int i = 0; i < g.k; ++i) {
        if (g.s[i] < 0 || g.s[i] > g.degree[i])
            throw std::invalid_argument("graph: s_i outside [0, d_i] at vertex " +
                                        g.vertex_names[i]);
        g.t[i] = g.degree[i] - g.s[i];
        if (g.s[i] + g.t[i] == 0)
            throw std::invalid_argument("graph: isolated vertex " + g.vertex_names[i]);
    }
    return g;
}

/// Parses a graph-spec document:
///   {"name": str, "vertices": [str], "edges": [[a, b], ...], "s": {vertex: int}}
/// Repeated edges merge into multiplicities; vertices absent from "s" get s_i = 0.
inline FattenedGraph load_graph(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("graph spec: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges") ||
        !doc.contains("s"))
        throw std::invalid_argument("graph spec: need fields vertices, edges, s");

    std::vector<std::string> vertices = doc["vertices"].get<std::vector<std::string>>();
    std::map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
        if (!index.emplace(vertices[i], i).second)
            throw std::invalid_argument("graph spec: duplicate vertex " + vertices[i]);
    }
    auto vertex_id = [&](const std::string& v) {
        auto it = index.find(v);
        if (it == index.end())
            throw std::invalid_argument("graph spec: unknown vertex " + v);
        return it->second;
    };

    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("graph spec: edges must be [a, b] pairs");
        edges.emplace_back(vertex_id(e[0].get<std::string>()), vertex_id(e[1].get<std::string>()));
    }

    std::vector<int> s(vertices.size(), 0);
    for (const auto& [v, val] : doc["s"].items()) s[vertex_id(v)] = val.get<int>();

    return make_graph(doc.value("name", std::string("unnamed")), std::move(vertices), edges, s);
}

/// Maximum number of crossing edges over all half-edge assignments in the
/// class [s_i, t_i], by exhaustive scan. An edge crosses when its two
/// half-edges land on opposite sides of the {S, T} split.
inline int brute_force_area(const FattenedGraph& g, std::int64_t cap = 10'000'000) {
    // choose, per vertex, which incident edge slots carry its s_i kept half-edges
    std::int64_t combos = 1;
    auto choose = [](int n, int r) {
        std::int64_t c = 1;
        for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
        return c;
    };
    for (int i = 0; i < g.k; ++i) {
        combos *= choose(g.degree[i], g.s[i]);
        if (combos > cap)
            throw cap_exceeded("brute_force_area: assignment count exceeds cap");
    }

    const auto edges = g.edge_list();
    // slots[i] lists the edge indices incident to vertex i, one per half-edge
    std::vector<std::vector<int>> slots(g.k);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        slots[edges[e].first].push_back(e);
        slots[edges[e].second].push_back(e);
    }

    // side[e][0/1]: whether the half-edge of the lower/higher endpoint is in S
    std::vector<std::array<bool, 2>> side(edges.size());
    int best = 0;
    auto count_crossings = [&] {
        int c = 0;
        for (const auto& sd : side) c += sd[0] != sd[1];
        return c;
    };

    std::function<void(int)> per_vertex = [&](int v) {
        if (v == g.k) {
            best = std::max(best, count_crossings());
            return;
        }
        const int d = g.degree[v];
        std::vector<int> pick(g.s[v]);
        // iterate all (d choose s_v) subsets of this vertex's slots
        std::function<void(int, int)> rec = [&](int from, int depth) {
            if (depth == g.s[v]) {
                std::vector<bool> in_s(d, false);
                for (int p : pick) in_s[p] = true;
                for (int slot = 0; slot < d; ++slot) {
                    const int e = slots[v][slot];
                    side[e][edges[e].first == v ? 0 : 1] = in_s[slot];
                }
                per_vertex(v + 1);
                return;
            }
            for (int p = from; p < d; ++p) {
                pick[depth] = p;
                rec(p + 1, depth + 1);
            }
        };
        rec(0, 0);
        return;
    };
    per_vertex(0);
    return best;
}

} // namespace rgs
