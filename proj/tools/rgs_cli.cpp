// Command-line laboratory for random graph states: boundary area via max-flow
// against the crossing oracle, limit moments of the rescaled spectrum, exact
// finite-N Weingarten moments, seeded Monte Carlo runs, and the combined
// invariant verification suite.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rgs/flow.hpp"
#include "rgs/graph.hpp"
#include "rgs/mc.hpp"
#include "rgs/moment_engine.hpp"
#include "rgs/verify.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_oracle_disagreement = 2;
constexpr int exit_input_error = 3;

using nlohmann::json;

rgs::FattenedGraph load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::invalid_argument("cannot open graph spec " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return rgs::load_graph(ss.str());
}

std::string node_name(const rgs::FattenedGraph& g, int node) {
    if (node == rgs::FlowNetwork::source) return "gamma";
    if (node == rgs::FlowNetwork::sink) return "Id";
    return g.vertex_names[node - 2];
}

int cmd_area(const std::string& spec_path, std::int64_t max_tuples) {
    const rgs::FattenedGraph g = load_spec_file(spec_path);
    const rgs::FlowResult flow = rgs::max_flow(rgs::build_network(g));

    json report;
    report["graph"] = g.name;
    report["max_flow"] = flow.value;
    report["paths"] = json::array();
    for (const rgs::FlowPath& p : flow.paths) {
        json path;
        path["units"] = p.units;
        path["nodes"] = json::array();
        for (int node : p.nodes) path["nodes"].push_back(node_name(g, node));
        report["paths"].push_back(path);
    }

    bool agree = true;
    try {
        const int area = rgs::brute_force_area(g, max_tuples);
        report["brute_force_area"] = area;
        agree = area == flow.value;
    } catch (const rgs::cap_exceeded&) {
        report["brute_force_area"] = nullptr;
    }
    report["area"] = flow.value;
    report["agree"] = agree;

    std::cout << report.dump(2) << "\n";
    return agree ? exit_ok : exit_oracle_disagreement;
}

int cmd_moments(const std::string& spec_path, int n_max,
                const std::vector<std::int64_t>& exact_N, std::int64_t max_tuples) {
    const rgs::FattenedGraph g = load_spec_file(spec_path);
    const rgs::MomentReport report = rgs::build_moment_report(g, n_max, exact_N, max_tuples);

    json doc;
    doc["graph"] = report.graph;
    doc["area"] = report.area;
    doc["orders"] = json::array();
    for (const rgs::MomentOrder& order : report.orders) {
        json o;
        o["n"] = order.n;
        o["limit_moment"] = order.limit;
        o["minimizing_beta_tuples"] = order.minimizing_beta_tuples;
        if (order.gap_exponent) o["gap_exponent"] = *order.gap_exponent;
        if (!order.exact_by_N.empty()) {
            json exact = json::object();
            for (const auto& [N, value] : order.exact_by_N) {
                exact[std::to_string(N)] = {{"rational", rgs::to_string(value)},
                                            {"value", rgs::to_double(value)}};
            }
            o["exact_first_moment"] = exact;
        }
        doc["orders"].push_back(o);
    }
    std::cout << doc.dump(2) << "\n";
    return exit_ok;
}

int cmd_mc(const std::string& spec_path, std::vector<std::int64_t> N_list, int trials, int n_max,
           std::uint64_t seed, const std::string& out_dir, int threads,
           std::int64_t max_amplitudes) {
    const rgs::FattenedGraph g = load_spec_file(spec_path);
    const rgs::ExperimentResult result =
        rgs::run_experiment(g, N_list, trials, n_max, seed, threads, max_amplitudes);

    std::filesystem::create_directories(out_dir);
    const std::string csv_path = out_dir + "/" + g.name + "-mc.csv";
    {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv.good()) throw std::invalid_argument("cannot write " + csv_path);
        csv << rgs::write_csv(result);
    }

    json doc;
    doc["graph"] = result.graph;
    doc["area"] = result.area;
    doc["seed"] = result.master_seed;
    doc["trials"] = trials;
    doc["csv"] = csv_path;
    doc["per_N"] = json::array();
    for (const rgs::ExperimentSummary& s : result.summaries) {
        json entry;
        entry["N"] = s.N;
        entry["entropy_offset_mean"] = s.entropy_offset.mean;
        entry["entropy_offset_variance"] = s.entropy_offset.variance;
        entry["flagged_samples"] = s.flagged_samples;
        entry["moments"] = json::array();
        for (std::size_t order = 0; order < s.moments.size(); ++order)
            entry["moments"].push_back({{"order", order + 1},
                                        {"mean", s.moments[order].mean},
                                        {"variance", s.moments[order].variance}});
        doc["per_N"].push_back(entry);
    }

    // log-log least-squares slope of each moment's variance against N
    if (result.summaries.size() >= 2) {
        json slopes = json::object();
        for (int order = 2; order <= n_max; ++order) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int points = 0;
            for (const rgs::ExperimentSummary& s : result.summaries) {
                const double var = s.moments[order - 1].variance;
                if (var <= 0) continue;
                const double x = std::log(static_cast<double>(s.N)), y = std::log(var);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                ++points;
            }
            if (points >= 2)
                slopes["m" + std::to_string(order)] =
                    (points * sxy - sx * sy) / (points * sxx - sx * sx);
        }
        doc["variance_slopes"] = slopes;
    }

    const std::string summary_path = out_dir + "/" + g.name + "-mc-summary.json";
    {
        std::ofstream summary(summary_path);
        summary << doc.dump(2) << "\n";
    }
    std::cout << doc.dump(2) << "\n";
    return exit_ok;
}

int cmd_verify(const std::string& spec_path, std::int64_t max_tuples, std::uint64_t seed) {
    const rgs::FattenedGraph g = load_spec_file(spec_path);
    const std::vector<rgs::CheckResult> results = rgs::run_verification(g, max_tuples, seed);

    json doc;
    doc["graph"] = g.name;
    doc["checks"] = json::array();
    for (const rgs::CheckResult& r : results) {
        const char* status = r.status == rgs::CheckResult::Status::pass      ? "pass"
                             : r.status == rgs::CheckResult::Status::skipped ? "skipped"
                                                                             : "fail";
        doc["checks"].push_back({{"name", r.name}, {"status", status}, {"detail", r.detail}});
    }
    const bool ok = rgs::all_passed(results);
    doc["all_passed"] = ok;
    std::cout << doc.dump(2) << "\n";
    return ok ? exit_ok : exit_verify_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification laboratory for the area law of random graph states"};
    app.require_subcommand(1);

    std::string spec_path;
    std::int64_t max_tuples = 100'000'000;
    std::int64_t max_amplitudes = std::int64_t(1) << 22;
    int n_max = 5;
    std::vector<std::int64_t> N_list;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int threads = 1;

    CLI::App* area = app.add_subcommand("area", "boundary area via max-flow and crossing oracle");
    area->add_option("spec", spec_path, "graph spec JSON")->required();
    area->add_option("--max-tuples", max_tuples, "exhaustive-scan budget");

    CLI::App* moments = app.add_subcommand("moments", "limit moments and gap exponents");
    moments->add_option("spec", spec_path, "graph spec JSON")->required();
    moments->add_option("--n-max", n_max, "highest moment order");
    moments->add_option("--N", N_list, "dimensions for exact finite-N moments")->delimiter(',');
    moments->add_option("--max-tuples", max_tuples, "exhaustive-scan budget");

    CLI::App* mc = app.add_subcommand("mc", "seeded Monte Carlo sampling of graph states");
    mc->add_option("spec", spec_path, "graph spec JSON")->required();
    mc->add_option("--N", N_list, "local dimensions")->delimiter(',');
    mc->add_option("--trials", trials, "trials per dimension");
    mc->add_option("--n-max", n_max, "highest rescaled moment order");
    mc->add_option("--seed", seed, "master seed");
    mc->add_option("--out", out_dir, "output directory for CSV and summary");
    mc->add_option("--threads", threads, "worker threads (does not change results)");
    mc->add_option("--max-amplitudes", max_amplitudes, "state-vector size guard");

    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_option("spec", spec_path, "graph spec JSON")->required();
    verify->add_option("--max-tuples", max_tuples, "exhaustive-scan budget");
    verify->add_option("--seed", seed, "seed for the randomized checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (area->parsed()) return cmd_area(spec_path, max_tuples);
        if (moments->parsed()) {
            if (n_max < 1) throw std::invalid_argument("--n-max must be positive");
            return cmd_moments(spec_path, n_max, N_list, max_tuples);
        }
        if (mc->parsed()) {
            if (N_list.empty()) N_list = {2, 3, 4};
            if (mc->count("--n-max") == 0) n_max = 3;
            if (trials < 1 || n_max < 1 || threads < 1)
                throw std::invalid_argument("--trials, --n-max and --threads must be positive");
            return cmd_mc(spec_path, N_list, trials, n_max, seed, out_dir, threads,
                          max_amplitudes);
        }
        if (verify->parsed()) return cmd_verify(spec_path, max_tuples, seed);
    } catch (const rgs::cap_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_verify_failed;
    }
    return exit_input_error;
}
