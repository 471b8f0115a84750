#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "rgs/mc.hpp"
#include "rgs/weingarten.hpp"

using namespace rgs;
using Catch::Matchers::WithinAbs;

namespace {

FattenedGraph load_spec(const std::string& file) {
    std::ifstream in(std::string(RGS_SPEC_DIR) + "/" + file);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_graph(ss.str());
}

double unitarity_defect(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("haar unitaries are unitary") {
    SplitMix64 rng(123);
    const Matrix u1 = sample_haar_unitary(1, rng);
    CHECK_THAT(std::abs(u1(0, 0)), WithinAbs(1.0, 1e-12));
    for (int dim : {2, 4, 16, 64}) {
        const Matrix u = sample_haar_unitary(dim, rng);
        CHECK(unitarity_defect(u) < 1e-10);
    }
    CHECK_THROWS_AS(sample_haar_unitary(0, rng), std::invalid_argument);
}

TEST_CASE("haar first moment E|u11|^2 = 1/dim") {
    const int dim = 2, draws = 10000;
    SplitMix64 rng(2024);
    double sum = 0;
    for (int d = 0; d < draws; ++d) sum += std::norm(sample_haar_unitary(dim, rng)(0, 0));
    // |u11|^2 is uniform on [0,1] at dim 2, so sigma = sqrt(1/12/draws)
    const double se = std::sqrt(1.0 / 12 / draws);
    CHECK_THAT(sum / draws, WithinAbs(0.5, 3 * se));
}

TEST_CASE("identity-overridden single edge is a Bell state") {
    const FattenedGraph g = load_spec("single-edge.json");
    SplitMix64 rng(1);
    const std::map<int, Matrix> ids = {{0, Matrix::Identity(2, 2)}, {1, Matrix::Identity(2, 2)}};
    const StateVector state = build_graph_state(g, 2, rng, ids);
    REQUIRE(state.amplitudes.size() == 4);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK_THAT(std::abs(state.amplitudes[0] - Complex(r, 0)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(state.amplitudes[3] - Complex(r, 0)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(state.amplitudes[1]), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(state.amplitudes[2]), WithinAbs(0.0, 1e-15));
}

TEST_CASE("graph states are normalized and the amplitude cap is enforced") {
    SplitMix64 rng(7);
    const StateVector chain = build_graph_state(load_spec("chain.json"), 2, rng);
    CHECK(chain.amplitudes.size() == 64);  // N^{2m} = 2^6
    CHECK_THAT(chain.norm_squared(), WithinAbs(1.0, 1e-10));

    // the lattice has 24 subsystems: 2^24 amplitudes only with a raised cap
    const StateVector lattice =
        build_graph_state(load_spec("lattice.json"), 2, rng, {}, std::int64_t(1) << 25);
    CHECK(lattice.amplitudes.size() == std::size_t(1) << 24);
    CHECK_THAT(lattice.norm_squared(), WithinAbs(1.0, 1e-8));
    CHECK_THROWS_AS(build_graph_state(load_spec("lattice.json"), 2, rng), cap_exceeded);
}

TEST_CASE("single edge marginal is maximally mixed") {
    const FattenedGraph g = load_spec("single-edge.json");
    for (std::int64_t N : {2, 5}) {
        SplitMix64 rng(11 + N);
        const Matrix rho = partial_trace(build_graph_state(g, N, rng), g);
        REQUIRE(rho.rows() == N);
        CHECK_THAT(std::abs(rho.trace() - Complex(1, 0)), WithinAbs(0.0, 1e-10));
        CHECK((rho - Matrix::Identity(N, N) / double(N)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("overriding one unitary leaves the single-edge spectrum flat") {
    const FattenedGraph g = load_spec("single-edge.json");
    SplitMix64 fixed_rng(99);
    const Matrix fixed = sample_haar_unitary(3, fixed_rng);
    for (int vertex : {0, 1}) {
        SplitMix64 rng(31 + vertex);
        const Matrix rho = partial_trace(build_graph_state(g, 3, rng, {{vertex, fixed}}), g);
        const auto [eig, entropy] = spectrum_and_entropy(rho);
        for (double lambda : eig) CHECK_THAT(lambda, WithinAbs(1.0 / 3, 1e-12));
        CHECK_THAT(entropy, WithinAbs(std::log(3.0), 1e-12));
    }
}

TEST_CASE("chain marginal bookkeeping") {
    const FattenedGraph g = load_spec("chain.json");
    SplitMix64 rng(5);
    const Matrix rho = partial_trace(build_graph_state(g, 2, rng), g);
    REQUIRE(rho.rows() == 8);  // N^{sum s} = 2^3
    CHECK_THAT(std::abs(rho.trace() - Complex(1, 0)), WithinAbs(0.0, 1e-10));
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectrum and entropy closed forms") {
    const int d = 6;
    const auto [flat, hmax] = spectrum_and_entropy(Matrix::Identity(d, d) / double(d));
    CHECK_THAT(hmax, WithinAbs(std::log(double(d)), 1e-12));
    for (double lambda : flat) CHECK_THAT(lambda, WithinAbs(1.0 / d, 1e-14));

    Matrix proj = Matrix::Zero(4, 4);
    proj(2, 2) = 1;  // rank-1 projector
    const auto [pe, hzero] = spectrum_and_entropy(proj);
    CHECK(hzero == 0.0);
    CHECK_THAT(pe[0], WithinAbs(1.0, 1e-14));

    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 0.5;
    diag(1, 1) = 0.25;
    diag(2, 2) = 0.25;
    const auto [de, h] = spectrum_and_entropy(diag);
    CHECK_THAT(h, WithinAbs(1.5 * std::log(2.0), 1e-12));

    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1;  // not Hermitian
    CHECK_THROWS_AS(spectrum_and_entropy(bad), std::invalid_argument);
}

TEST_CASE("single edge experiment: H = log N exactly, zero variance") {
    const FattenedGraph g = load_spec("single-edge.json");
    const ExperimentResult result = run_experiment(g, {2, 4}, 25, 3, 999);
    REQUIRE(result.area == 1);
    for (const SpectralSample& s : result.samples) {
        CHECK_THAT(s.entropy, WithinAbs(std::log(double(s.N)), 1e-9));
        CHECK_THAT(s.entropy_offset, WithinAbs(0.0, 1e-9));
        for (double m : s.rescaled_moments) CHECK_THAT(m, WithinAbs(1.0, 1e-9));
        CHECK_FALSE(s.flagged);
    }
    for (const ExperimentSummary& summary : result.summaries) {
        CHECK_THAT(summary.entropy_offset.mean, WithinAbs(0.0, 1e-10));
        CHECK_THAT(summary.entropy_offset.variance, WithinAbs(0.0, 1e-20));
    }
}

TEST_CASE("sample invariants on the chain") {
    const FattenedGraph g = load_spec("chain.json");
    const ExperimentResult result = run_experiment(g, {2, 3}, 40, 3, 31337);
    for (const SpectralSample& s : result.samples) {
        double total = 0;
        int positive = 0;
        for (double lambda : s.eigenvalues) {
            CHECK(lambda >= -1e-10);
            total += lambda;
            positive += lambda > 1e-10;
        }
        CHECK_THAT(total, WithinAbs(1.0, 1e-9));
        CHECK(s.entropy >= 0.0);
        CHECK_THAT(s.rescaled_moments[0], WithinAbs(1.0, 1e-9));  // order 1 is the trace
        // rank bound: min(N^sum_s, N^sum_t)
        const double bound = std::pow(double(s.N), std::min(g.total_s(), g.total_t()));
        CHECK(positive <= bound + 0.5);
        CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
    }
}

TEST_CASE("kept side larger than the rescaling dimension still has tiny discards") {
    // path with s = [1, 2, 0]: dim rho_S = N^3 while X = 1, rank <= N
    const FattenedGraph g = make_graph("path3", {"a", "b", "c"}, {{0, 1}, {1, 2}}, {1, 2, 0});
    REQUIRE(max_flow_value(g) == 1);
    const ExperimentResult result = run_experiment(g, {2, 3}, 20, 2, 4242);
    for (const SpectralSample& s : result.samples) {
        CHECK(s.eigenvalues.size() == std::size_t(std::pow(double(s.N), 3) + 0.5));
        CHECK(s.discarded_mass < 1e-10);
        CHECK_FALSE(s.flagged);
        double total = 0;
        for (double lambda : s.eigenvalues) total += lambda;
        CHECK_THAT(total, WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("monte carlo mean matches the exact Weingarten moment within 3 SE") {
    const FattenedGraph g = load_spec("chain.json");
    const int trials = 800;
    const ExperimentResult result = run_experiment(g, {4}, trials, 2, 20250810, 2);
    const MomentStats m2 = result.summaries[0].moments[1];
    const double exact = to_double(exact_first_moment(g, 2, 4));  // 32/17
    const double se = std::sqrt(m2.variance / trials);
    CHECK_THAT(m2.mean, WithinAbs(exact, 3 * se));

    // the sample variance is consistent with the exact variance
    const double exact_var = to_double(exact_second_moment(g, 2, 4) -
                                       exact_first_moment(g, 2, 4) * exact_first_moment(g, 2, 4));
    CHECK_THAT(m2.variance, WithinAbs(exact_var, 0.35 * exact_var));
}

TEST_CASE("experiments are deterministic and thread-count independent") {
    const FattenedGraph g = load_spec("chain.json");
    const ExperimentResult one = run_experiment(g, {2, 3}, 12, 2, 777, 1);
    const ExperimentResult two = run_experiment(g, {3, 2}, 12, 2, 777, 2);
    CHECK(write_csv(one) == write_csv(two));

    const ExperimentResult other_seed = run_experiment(g, {2, 3}, 12, 2, 778, 1);
    CHECK(write_csv(one) != write_csv(other_seed));

    // spot-check the CSV surface
    const std::string csv = write_csv(one);
    CHECK(csv.rfind("graph,N,trial,entropy,entropy_minus_XlogN,m1,m2,discarded_mass,seed\n", 0) ==
          0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 12);
    CHECK(csv.find("chain,2,0,") != std::string::npos);
}

TEST_CASE("derived streams differ across N and trial") {
    CHECK(derive_stream(1, 2, 3) != derive_stream(1, 2, 4));
    CHECK(derive_stream(1, 2, 3) != derive_stream(1, 3, 3));
    CHECK(derive_stream(1, 2, 3) != derive_stream(2, 2, 3));
    CHECK(derive_stream(1, 2, 3) == derive_stream(1, 2, 3));
}
