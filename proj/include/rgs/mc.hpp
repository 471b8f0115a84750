#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "rgs/errors.hpp"
#include "rgs/flow.hpp"
#include "rgs/graph.hpp"
#include "rgs/rng.hpp"

namespace rgs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Haar-distributed unitary: a Ginibre draw orthonormalized column by column
/// (with one re-orthogonalization sweep). Dividing each column by its positive
/// residual norm is exactly the phase normalization that makes the triangular
/// factor's diagonal positive.
inline Matrix sample_haar_unitary(int dim, SplitMix64& rng) {
    if (dim < 1) throw std::invalid_argument("sample_haar_unitary: dimension must be >= 1");
    Matrix u(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) u(i, j) = rng.complex_normal();
    for (int j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < j; ++i) u.col(j) -= u.col(i).dot(u.col(j)) * u.col(i);
        const double norm = u.col(j).norm();
        if (!(norm > 0)) throw std::runtime_error("sample_haar_unitary: degenerate draw");
        u.col(j) /= norm;
    }
    return u;
}

/// Dense amplitudes of the random graph state: 2m subsystems of dimension N,
/// one per half-edge, grouped contiguously by vertex. The first s_i slots of
/// vertex i form its kept (S) share.
struct StateVector {
    std::int64_t N = 0;
    int subsystems = 0;                     // 2m
    std::vector<Complex> amplitudes;        // length N^{2m}, slot 0 most significant
    std::vector<int> vertex_offset;         // first slot of each vertex
    std::vector<std::pair<int, int>> edge_slots;  // the two slots of each edge

    double norm_squared() const {
        double s = 0;
        for (const Complex& a : amplitudes) s += std::norm(a);
        return s;
    }
};

/// Tensor of maximally entangled pairs acted on by one independent Haar
/// unitary per vertex. `overrides` pins chosen vertices to fixed matrices
/// (those vertices consume no randomness).
inline StateVector build_graph_state(const FattenedGraph& g, std::int64_t N, SplitMix64& rng,
                                     const std::map<int, Matrix>& overrides = {},
                                     std::int64_t max_amplitudes = std::int64_t(1) << 22) {
    if (N < 1) throw std::invalid_argument("build_graph_state: N must be >= 1");
    StateVector state;
    state.N = N;
    state.subsystems = 2 * g.m;

    std::int64_t total = 1;
    for (int h = 0; h < state.subsystems; ++h) {
        total *= N;
        if (total > max_amplitudes)
            throw cap_exceeded("build_graph_state: amplitude count exceeds cap");
    }

    state.vertex_offset.resize(g.k);
    int slot = 0;
    for (int i = 0; i < g.k; ++i) {
        state.vertex_offset[i] = slot;
        slot += g.degree[i];
    }
    std::vector<int> next_free = state.vertex_offset;
    for (auto [a, b] : g.edge_list()) state.edge_slots.push_back({next_free[a]++, next_free[b]++});

    // slot strides, slot 0 most significant
    std::vector<std::int64_t> stride(state.subsystems);
    std::int64_t acc = 1;
    for (int h = state.subsystems - 1; h >= 0; --h) {
        stride[h] = acc;
        acc *= N;
    }

    // product of maximally entangled pairs: equal indices across each edge
    state.amplitudes.assign(total, Complex(0, 0));
    const double amp = std::pow(static_cast<double>(N), -0.5 * g.m);
    std::vector<int> digit(g.m, 0);
    for (;;) {
        std::int64_t idx = 0;
        for (int l = 0; l < g.m; ++l)
            idx += digit[l] * (stride[state.edge_slots[l].first] +
                               stride[state.edge_slots[l].second]);
        state.amplitudes[idx] = amp;
        int pos = g.m - 1;
        while (pos >= 0 && ++digit[pos] == N) digit[pos--] = 0;
        if (pos < 0) break;
    }

    // apply the vertex unitaries; vertex slots are contiguous digit blocks
    for (int i = 0; i < g.k; ++i) {
        std::int64_t dim = 1;
        for (int r = 0; r < g.degree[i]; ++r) dim *= N;
        Matrix u;
        if (auto it = overrides.find(i); it != overrides.end()) {
            if (it->second.rows() != dim || it->second.cols() != dim)
                throw std::invalid_argument("build_graph_state: override has wrong dimension");
            u = it->second;
        } else {
            u = sample_haar_unitary(static_cast<int>(dim), rng);
        }

        const std::int64_t right = stride[state.vertex_offset[i] + g.degree[i] - 1];
        const std::int64_t left = total / (dim * right);
        using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Matrix tmp(dim, right);
        for (std::int64_t l = 0; l < left; ++l) {
            Eigen::Map<RowMajor> block(state.amplitudes.data() + l * dim * right, dim, right);
            tmp.noalias() = u * block;
            block = tmp;
        }
    }
    return state;
}

namespace detail {

/// Amplitudes reshaped to a dim_S x dim_T matrix, S indices from the kept
/// half-edge slots in slot order.
inline Matrix marginal_matrix(const StateVector& state, const FattenedGraph& g) {
    std::vector<bool> kept(state.subsystems, false);
    for (int i = 0; i < g.k; ++i)
        for (int r = 0; r < g.s[i]; ++r) kept[state.vertex_offset[i] + r] = true;

    const std::int64_t N = state.N;
    std::int64_t dim_s = 1, dim_t = 1;
    for (int h = 0; h < state.subsystems; ++h) (kept[h] ? dim_s : dim_t) *= N;

    // base offsets into the full amplitude index per S (row) and T (column)
    // multi-index, built slot by slot from the least significant end
    std::vector<std::int64_t> full(state.subsystems);
    std::int64_t full_stride = 1;
    for (int h = state.subsystems - 1; h >= 0; --h) {
        full[h] = full_stride;
        full_stride *= N;
    }
    std::vector<std::int64_t> row_base(dim_s, 0), col_base(dim_t, 0);
    std::int64_t rows_filled = 1, cols_filled = 1;
    for (int h = state.subsystems - 1; h >= 0; --h) {
        auto& base = kept[h] ? row_base : col_base;
        auto& filled = kept[h] ? rows_filled : cols_filled;
        for (std::int64_t d = 1; d < N; ++d)
            for (std::int64_t lo = 0; lo < filled; ++lo)
                base[d * filled + lo] = base[lo] + d * full[h];
        filled *= N;
    }

    Matrix m(dim_s, dim_t);
    for (std::int64_t a = 0; a < dim_s; ++a)
        for (std::int64_t b = 0; b < dim_t; ++b)
            m(a, b) = state.amplitudes[row_base[a] + col_base[b]];
    return m;
}

} // namespace detail

/// rho_S = Tr_T |psi><psi| as a dense Hermitian matrix of dimension N^(sum s_i).
inline Matrix partial_trace(const StateVector& state, const FattenedGraph& g) {
    const Matrix m = detail::marginal_matrix(state, g);
    Matrix rho(m.rows(), m.rows());
    rho.noalias() = m * m.adjoint();
    return rho;
}

/// Eigenvalues (descending) and von Neumann entropy in nats. Eigenvalues at
/// or below 1e-14 contribute nothing to the entropy.
inline std::pair<std::vector<double>, double> spectrum_and_entropy(const Matrix& rho,
                                                                   double herm_tol = 1e-8) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("spectrum_and_entropy: matrix must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        throw std::invalid_argument("spectrum_and_entropy: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
    std::vector<double> eig(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + rho.rows());
    std::sort(eig.rbegin(), eig.rend());
    double entropy = 0;
    for (double lambda : eig)
        if (lambda > 1e-14) entropy -= lambda * std::log(lambda);
    return {std::move(eig), entropy};
}

// ---------------------------------------------------------------------------
// Experiment harness
// ---------------------------------------------------------------------------

struct SpectralSample {
    std::int64_t N = 0;
    int trial = 0;
    std::vector<double> eigenvalues;       // descending
    double entropy = 0;                    // nats
    double entropy_offset = 0;             // H - X log N
    std::vector<double> rescaled_moments;  // N^{X(j-1)} Tr rho^j, j = 1..n_max
    double discarded_mass = 0;             // eigenvalue mass beyond the top N^X
    bool flagged = false;                  // discarded mass above 1e-8
    std::uint64_t stream_seed = 0;
};

struct MomentStats {
    double mean = 0;
    double variance = 0;  // unbiased, over trials
};

struct ExperimentSummary {
    std::int64_t N = 0;
    int trials = 0;
    MomentStats entropy_offset;
    std::vector<MomentStats> moments;  // per order 1..n_max
    int flagged_samples = 0;
};

struct ExperimentResult {
    std::string graph;
    int area = 0;  // X
    int n_max = 0;
    std::uint64_t master_seed = 0;
    std::vector<SpectralSample> samples;      // N ascending, trial ascending
    std::vector<ExperimentSummary> summaries;  // one per N
};

namespace detail {

inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline MomentStats stats_of(const std::vector<double>& v) {
    MomentStats out;
    if (v.empty()) return out;
    out.mean = pairwise_sum(v, 0, v.size()) / static_cast<double>(v.size());
    if (v.size() > 1) {
        std::vector<double> sq(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - out.mean) * (v[i] - out.mean);
        out.variance = pairwise_sum(sq, 0, sq.size()) / static_cast<double>(v.size() - 1);
    }
    return out;
}

inline SpectralSample run_trial(const FattenedGraph& g, std::int64_t N, int trial, int area,
                                int n_max, std::uint64_t master_seed,
                                std::int64_t max_amplitudes) {
    SpectralSample sample;
    sample.N = N;
    sample.trial = trial;
    sample.stream_seed = derive_stream(master_seed, static_cast<std::uint64_t>(N),
                                       static_cast<std::uint64_t>(trial));
    SplitMix64 rng(sample.stream_seed);
    const StateVector state = build_graph_state(g, N, rng, {}, max_amplitudes);

    const Matrix m = marginal_matrix(state, g);
    // eigenvalues of rho_S = M M^dagger from the smaller Gram side, padded
    const bool s_side = m.rows() <= m.cols();
    Matrix gram(std::min(m.rows(), m.cols()), std::min(m.rows(), m.cols()));
    if (s_side)
        gram.noalias() = m * m.adjoint();
    else
        gram.noalias() = m.adjoint() * m;
    auto [eig, entropy] = spectrum_and_entropy(gram);
    eig.resize(static_cast<std::size_t>(m.rows()), 0.0);  // rho_S dimension

    sample.eigenvalues = std::move(eig);
    sample.entropy = entropy;
    sample.entropy_offset = entropy - area * std::log(static_cast<double>(N));

    double top = 1;
    for (int r = 0; r < area; ++r) top *= static_cast<double>(N);
    double discarded = 0;
    for (std::size_t i = static_cast<std::size_t>(std::min<double>(top, 1e18));
         i < sample.eigenvalues.size(); ++i)
        discarded += std::max(sample.eigenvalues[i], 0.0);
    sample.discarded_mass = discarded;
    sample.flagged = discarded > 1e-8;

    sample.rescaled_moments.resize(n_max);
    for (int order = 1; order <= n_max; ++order) {
        double trace_power = 0;
        for (double lambda : sample.eigenvalues)
            trace_power += std::pow(std::max(lambda, 0.0), order);
        double scale = 1;
        for (int r = 0; r < area * (order - 1); ++r) scale *= static_cast<double>(N);
        sample.rescaled_moments[order - 1] = scale * trace_power;
    }
    return sample;
}

} // namespace detail

/// One SpectralSample per (N, trial), plus per-N mean/variance summaries.
/// Fully deterministic in (graph, N_list, trials, n_max, master_seed),
/// independent of the thread count.
inline ExperimentResult run_experiment(const FattenedGraph& g, std::vector<std::int64_t> N_list,
                                       int trials, int n_max, std::uint64_t master_seed,
                                       int threads = 1,
                                       std::int64_t max_amplitudes = std::int64_t(1) << 22) {
    if (trials < 1 || n_max < 1)
        throw std::invalid_argument("run_experiment: trials and n_max must be positive");
    std::sort(N_list.begin(), N_list.end());
    N_list.erase(std::unique(N_list.begin(), N_list.end()), N_list.end());

    ExperimentResult result;
    result.graph = g.name;
    result.area = max_flow_value(g);
    result.n_max = n_max;
    result.master_seed = master_seed;
    result.samples.resize(N_list.size() * static_cast<std::size_t>(trials));

    const int worker_count =
        std::max(1, std::min<int>(threads, static_cast<int>(std::thread::hardware_concurrency())));
    std::atomic<std::size_t> cursor{0};
    const std::size_t total = result.samples.size();
    auto worker = [&] {
        for (;;) {
            const std::size_t job = cursor.fetch_add(1);
            if (job >= total) break;
            const std::int64_t N = N_list[job / trials];
            const int trial = static_cast<int>(job % trials);
            result.samples[job] = detail::run_trial(g, N, trial, result.area, n_max,
                                                    master_seed, max_amplitudes);
        }
    };
    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t block = 0; block < N_list.size(); ++block) {
        ExperimentSummary summary;
        summary.N = N_list[block];
        summary.trials = trials;
        std::vector<double> offsets(trials);
        for (int t = 0; t < trials; ++t) {
            const SpectralSample& s = result.samples[block * trials + t];
            offsets[t] = s.entropy_offset;
            summary.flagged_samples += s.flagged;
        }
        summary.entropy_offset = detail::stats_of(offsets);
        for (int order = 1; order <= n_max; ++order) {
            std::vector<double> vals(trials);
            for (int t = 0; t < trials; ++t)
                vals[t] = result.samples[block * trials + t].rescaled_moments[order - 1];
            summary.moments.push_back(detail::stats_of(vals));
        }
        result.summaries.push_back(std::move(summary));
    }
    return result;
}

/// CSV per sample: graph,N,trial,entropy,entropy_minus_XlogN,m1..m{n_max},
/// discarded_mass,seed. Deterministic bytes for a given experiment.
inline std::string write_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << "graph,N,trial,entropy,entropy_minus_XlogN";
    for (int order = 1; order <= result.n_max; ++order) out << ",m" << order;
    out << ",discarded_mass,seed\n";
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << ',' << buf;
    };
    for (const SpectralSample& s : result.samples) {
        out << result.graph << ',' << s.N << ',' << s.trial;
        num(s.entropy);
        num(s.entropy_offset);
        for (double m : s.rescaled_moments) num(m);
        num(s.discarded_mass);
        out << ',' << s.stream_seed << '\n';
    }
    return out.str();
}

} // namespace rgs
