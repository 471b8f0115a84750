#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "rgs/flow.hpp"

using namespace rgs;

namespace {

FattenedGraph load_spec(const std::string& file) {
    std::ifstream in(std::string(RGS_SPEC_DIR) + "/" + file);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_graph(ss.str());
}

// Independent oracle: minimum gamma/Id cut, by scanning all beta-node sides.
int min_cut(const FlowNetwork& net) {
    REQUIRE(net.k <= 20);
    int best = INT32_MAX;
    for (unsigned mask = 0; mask < (1u << net.k); ++mask) {
        auto on_source_side = [&](int node) {
            if (node == FlowNetwork::source) return true;
            if (node == FlowNetwork::sink) return false;
            return (mask >> (node - 2) & 1u) != 0;
        };
        int cut = 0;
        for (int u = 0; u < net.nodes(); ++u)
            for (int v = 0; v < net.nodes(); ++v)
                if (on_source_side(u) && !on_source_side(v)) cut += net.capacity[u][v];
        best = std::min(best, cut);
    }
    return best;
}

// Random valid graph: k vertices, degrees <= max_degree, s_i uniform in [0, d_i],
// resampled until the flow network validates.
FattenedGraph random_graph(std::mt19937& rng, int max_k = 5, int max_degree = 4) {
    for (;;) {
        const int k = std::uniform_int_distribution<int>(2, max_k)(rng);
        std::vector<std::string> names;
        for (int i = 0; i < k; ++i) names.push_back("v" + std::to_string(i + 1));
        std::vector<int> deg(k, 0);
        std::vector<std::pair<int, int>> edges;
        const int tries = std::uniform_int_distribution<int>(k - 1, 3 * k)(rng);
        for (int e = 0; e < tries; ++e) {
            const int a = std::uniform_int_distribution<int>(0, k - 1)(rng);
            const int b = std::uniform_int_distribution<int>(0, k - 1)(rng);
            if (a == b || deg[a] >= max_degree || deg[b] >= max_degree) continue;
            edges.emplace_back(a, b);
            ++deg[a];
            ++deg[b];
        }
        std::vector<int> s(k);
        bool any_s = false, any_t = false;
        for (int i = 0; i < k; ++i) {
            s[i] = std::uniform_int_distribution<int>(0, deg[i])(rng);
            any_s |= s[i] > 0;
            any_t |= s[i] < deg[i];
        }
        if (!any_s || !any_t) continue;
        try {
            FattenedGraph g = make_graph("random", names, edges, s);
            build_network(g);
            return g;
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
}

} // namespace

TEST_CASE("chain network matches the worked figure") {
    const FlowNetwork net = build_network(load_spec("chain.json"));
    REQUIRE(net.nodes() == 6);
    const int src = FlowNetwork::source, id = FlowNetwork::sink;
    CHECK(net.capacity[src][FlowNetwork::beta_node(1)] == 2);
    CHECK(net.capacity[src][FlowNetwork::beta_node(2)] == 1);
    CHECK(net.capacity[src][FlowNetwork::beta_node(0)] == 0);
    CHECK(net.capacity[FlowNetwork::beta_node(0)][id] == 1);
    CHECK(net.capacity[FlowNetwork::beta_node(2)][id] == 1);
    CHECK(net.capacity[FlowNetwork::beta_node(3)][id] == 1);
    CHECK(net.capacity[FlowNetwork::beta_node(0)][FlowNetwork::beta_node(1)] == 1);
    CHECK(net.capacity[FlowNetwork::beta_node(1)][FlowNetwork::beta_node(0)] == 1);
    CHECK(max_flow(net).value == 3);
}

TEST_CASE("lattice network matches the worked figure") {
    const FlowNetwork net = build_network(load_spec("lattice.json"));
    REQUIRE(net.nodes() == 11);
    CHECK(net.capacity[FlowNetwork::source][FlowNetwork::beta_node(4)] == 4);
    CHECK(net.capacity[FlowNetwork::source][FlowNetwork::beta_node(3)] == 1);
    CHECK(net.capacity[FlowNetwork::source][FlowNetwork::beta_node(5)] == 1);
    CHECK(max_flow(net).value == 6);
}

TEST_CASE("single edge gives a unit chain") {
    const FlowNetwork net = build_network(load_spec("single-edge.json"));
    const FlowResult res = max_flow(net);
    CHECK(res.value == 1);
    REQUIRE(res.paths.size() == 1);
    CHECK(res.paths[0].nodes ==
          std::vector<int>{FlowNetwork::source, FlowNetwork::beta_node(0),
                           FlowNetwork::beta_node(1), FlowNetwork::sink});
    CHECK(res.paths[0].units == 1);
}

TEST_CASE("all-zero source capacities are rejected at build time") {
    // with every s_i = 0 no beta node is reachable from gamma
    CHECK_THROWS_AS(
        build_network(load_graph(R"({"vertices":["a","b"],"edges":[["a","b"]],"s":{}})")),
        std::invalid_argument);
}

TEST_CASE("flow result invariants") {
    for (const char* file : {"chain.json", "lattice.json", "double-edge.json"}) {
        const FattenedGraph g = load_spec(file);
        const FlowNetwork net = build_network(g);
        const FlowResult res = max_flow(net);

        int path_total = 0;
        for (const auto& p : res.paths) path_total += p.units;
        CHECK(path_total == res.value);

        // conservation at every beta node, residual = capacity - flow >= 0
        for (int u = 0; u < net.nodes(); ++u) {
            if (u != FlowNetwork::source && u != FlowNetwork::sink) {
                int net_out = 0;
                for (int v = 0; v < net.nodes(); ++v) net_out += res.flow[u][v];
                CHECK(net_out == 0);
            }
            for (int v = 0; v < net.nodes(); ++v) {
                CHECK(res.residual[u][v] == net.capacity[u][v] - res.flow[u][v]);
                CHECK(res.flow[u][v] == -res.flow[v][u]);
                CHECK(res.flow[u][v] <= net.capacity[u][v]);
            }
        }

        CHECK(res.value <= std::min(g.total_s(), g.total_t()));
    }
}

TEST_CASE("max flow equals min cut and the crossing oracle") {
    CHECK(max_flow_value(load_spec("chain.json")) == 3);
    CHECK(max_flow_value(load_spec("lattice.json")) == 6);

    std::mt19937 rng(20250809);
    for (int trial = 0; trial < 60; ++trial) {
        const FattenedGraph g = random_graph(rng);
        const FlowNetwork net = build_network(g);
        const int flow_value = max_flow(net).value;
        CHECK(flow_value == min_cut(net));
        CHECK(flow_value == brute_force_area(g));
    }
}

TEST_CASE("decomposition is deterministic") {
    const FattenedGraph g = load_spec("lattice.json");
    const FlowResult a = max_flow(build_network(g));
    const FlowResult b = max_flow(build_network(g));
    REQUIRE(a.paths.size() == b.paths.size());
    for (size_t i = 0; i < a.paths.size(); ++i) {
        CHECK(a.paths[i].nodes == b.paths[i].nodes);
        CHECK(a.paths[i].units == b.paths[i].units);
    }
}
