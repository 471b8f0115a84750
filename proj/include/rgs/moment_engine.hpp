#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rgs/bigrational.hpp"
#include "rgs/errors.hpp"
#include "rgs/flow.hpp"
#include "rgs/graph.hpp"
#include "rgs/permutation.hpp"
#include "rgs/sn_table.hpp"
#include "rgs/weingarten.hpp"

namespace rgs {

// ---------------------------------------------------------------------------
// Cost functionals
//
// F(alpha, beta) = sum_i (s_i |gamma^-1 a_i| + t_i |a_i|)
//                + sum_{i<j} e_ij |b_i^-1 b_j| + sum_i d_i |b_i a_i^-1|
// with gamma = gamma_n on n points or gamma_{n,n} on 2n points. The beta-only
// form replaces a_i by b_i and drops the last sum.
// ---------------------------------------------------------------------------

namespace detail {

inline void check_tuples(const FattenedGraph& g, int degree,
                         const std::vector<Permutation>* alphas,
                         const std::vector<Permutation>& betas) {
    if (static_cast<int>(betas.size()) != g.k ||
        (alphas && static_cast<int>(alphas->size()) != g.k))
        throw std::invalid_argument("F functional: tuple length must equal the vertex count");
    for (const Permutation& b : betas)
        if (b.degree() != degree)
            throw std::invalid_argument("F functional: degree mismatch in beta tuple");
    if (alphas)
        for (const Permutation& a : *alphas)
            if (a.degree() != degree)
                throw std::invalid_argument("F functional: degree mismatch in alpha tuple");
}

inline std::int64_t eval_F(const FattenedGraph& g, const Permutation& gamma,
                           const std::vector<Permutation>& alphas,
                           const std::vector<Permutation>& betas) {
    std::int64_t f = 0;
    for (int i = 0; i < g.k; ++i) {
        f += static_cast<std::int64_t>(g.s[i]) * distance(alphas[i], gamma);
        f += static_cast<std::int64_t>(g.t[i]) * alphas[i].length();
        f += static_cast<std::int64_t>(g.degree[i]) * distance(alphas[i], betas[i]);
        for (int j = i + 1; j < g.k; ++j)
            if (g.mult[i][j] > 0)
                f += static_cast<std::int64_t>(g.mult[i][j]) * distance(betas[i], betas[j]);
    }
    return f;
}

inline std::int64_t eval_F_beta(const FattenedGraph& g, const Permutation& gamma,
                                const std::vector<Permutation>& betas) {
    std::int64_t f = 0;
    for (int i = 0; i < g.k; ++i) {
        f += static_cast<std::int64_t>(g.s[i]) * distance(betas[i], gamma);
        f += static_cast<std::int64_t>(g.t[i]) * betas[i].length();
        for (int j = i + 1; j < g.k; ++j)
            if (g.mult[i][j] > 0)
                f += static_cast<std::int64_t>(g.mult[i][j]) * distance(betas[i], betas[j]);
    }
    return f;
}

} // namespace detail

/// F_{n,n} on 2n points (gamma = gamma_{n,n}).
inline std::int64_t eval_F_nn(const FattenedGraph& g, const std::vector<Permutation>& alphas,
                              const std::vector<Permutation>& betas) {
    const int degree = betas.empty() ? 0 : betas.front().degree();
    if (degree % 2 != 0) throw std::invalid_argument("eval_F_nn: degree must be even");
    detail::check_tuples(g, degree, &alphas, betas);
    return detail::eval_F(g, Permutation::double_cycle(degree / 2), alphas, betas);
}

inline std::int64_t eval_F_nn_beta(const FattenedGraph& g, const std::vector<Permutation>& betas) {
    const int degree = betas.empty() ? 0 : betas.front().degree();
    if (degree % 2 != 0) throw std::invalid_argument("eval_F_nn_beta: degree must be even");
    detail::check_tuples(g, degree, nullptr, betas);
    return detail::eval_F_beta(g, Permutation::double_cycle(degree / 2), betas);
}

/// F_n on n points (gamma = gamma_n).
inline std::int64_t eval_F_n(const FattenedGraph& g, const std::vector<Permutation>& alphas,
                             const std::vector<Permutation>& betas) {
    const int degree = betas.empty() ? 0 : betas.front().degree();
    detail::check_tuples(g, degree, &alphas, betas);
    return detail::eval_F(g, Permutation::full_cycle(degree), alphas, betas);
}

inline std::int64_t eval_F_n_beta(const FattenedGraph& g, const std::vector<Permutation>& betas) {
    const int degree = betas.empty() ? 0 : betas.front().degree();
    detail::check_tuples(g, degree, nullptr, betas);
    return detail::eval_F_beta(g, Permutation::full_cycle(degree), betas);
}

// ---------------------------------------------------------------------------
// Enumeration helpers
// ---------------------------------------------------------------------------

/// Indices of the permutations on a geodesic from Id to gamma:
/// |p| + |p^-1 gamma| = |gamma|.
inline std::vector<int> geodesic_set(const SnTable& tab, const Permutation& gamma) {
    const int gamma_idx = tab.index_of(gamma);
    const int glen = tab.length(gamma_idx);
    std::vector<int> out;
    for (int i = 0; i < tab.size(); ++i)
        if (tab.length(i) + tab.dist(i, gamma_idx) == glen) out.push_back(i);
    return out;
}

inline std::vector<int> connected_set(const SnTable& tab) {
    std::vector<int> out;
    for (int i = 0; i < tab.size(); ++i)
        if (is_connected(tab.perm(i))) out.push_back(i);
    return out;
}

enum class ScanMode { full, geodesic };

struct MinScan {
    std::int64_t min_value = 0;                      // min of the beta-only functional
    std::vector<std::vector<Permutation>> argmins;   // attaining beta tuples
    std::int64_t tuples_scanned = 0;
    // full mode also verifies min over (alpha, beta) of F equals min_value
    std::optional<std::int64_t> min_alpha_beta;
};

namespace detail {

// odometer scan over per-vertex candidate index sets
template <typename Fn>
void scan_tuples(const std::vector<std::vector<int>>& candidates, Fn&& fn) {
    const int k = static_cast<int>(candidates.size());
    std::vector<int> pos(k, 0), current(k);
    for (int i = 0; i < k; ++i) {
        if (candidates[i].empty()) return;
        current[i] = candidates[i][0];
    }
    for (;;) {
        fn(current);
        int p = k - 1;
        while (p >= 0) {
            if (++pos[p] < static_cast<int>(candidates[p].size())) {
                current[p] = candidates[p][pos[p]];
                break;
            }
            pos[p] = 0;
            current[p] = candidates[p][0];
            --p;
        }
        if (p < 0) break;
    }
}

inline double tuple_count(const std::vector<std::vector<int>>& candidates) {
    double c = 1;
    for (const auto& set : candidates) c *= static_cast<double>(set.size());
    return c;
}

// beta-only functional on table indices
inline std::int64_t eval_F_beta_idx(const FattenedGraph& g, const SnTable& tab, int gamma_idx,
                                    const std::vector<int>& b) {
    std::int64_t f = 0;
    for (int i = 0; i < g.k; ++i) {
        f += static_cast<std::int64_t>(g.s[i]) * tab.dist(b[i], gamma_idx);
        f += static_cast<std::int64_t>(g.t[i]) * tab.length(b[i]);
        for (int j = i + 1; j < g.k; ++j)
            if (g.mult[i][j] > 0)
                f += static_cast<std::int64_t>(g.mult[i][j]) * tab.dist(b[i], b[j]);
    }
    return f;
}

inline std::int64_t eval_F_idx(const FattenedGraph& g, const SnTable& tab, int gamma_idx,
                               const std::vector<int>& a, const std::vector<int>& b) {
    std::int64_t f = 0;
    for (int i = 0; i < g.k; ++i) {
        f += static_cast<std::int64_t>(g.s[i]) * tab.dist(a[i], gamma_idx);
        f += static_cast<std::int64_t>(g.t[i]) * tab.length(a[i]);
        f += static_cast<std::int64_t>(g.degree[i]) * tab.dist(a[i], b[i]);
        for (int j = i + 1; j < g.k; ++j)
            if (g.mult[i][j] > 0)
                f += static_cast<std::int64_t>(g.mult[i][j]) * tab.dist(b[i], b[j]);
    }
    return f;
}

inline MinScan brute_min(const FattenedGraph& g, int degree, const Permutation& gamma,
                         ScanMode mode, std::int64_t max_tuples) {
    const SnTable& tab = SnTable::cached(degree);
    const int gamma_idx = tab.index_of(gamma);

    std::vector<int> base;
    if (mode == ScanMode::geodesic) {
        base = geodesic_set(tab, gamma);
    } else {
        base.resize(tab.size());
        for (int i = 0; i < tab.size(); ++i) base[i] = i;
    }
    std::vector<std::vector<int>> candidates(g.k, base);
    if (tuple_count(candidates) > static_cast<double>(max_tuples))
        throw cap_exceeded("brute_min_F: tuple count exceeds cap");

    MinScan scan;
    scan.min_value = INT64_MAX;
    std::vector<std::vector<int>> argmin_idx;
    scan_tuples(candidates, [&](const std::vector<int>& b) {
        ++scan.tuples_scanned;
        const std::int64_t f = eval_F_beta_idx(g, tab, gamma_idx, b);
        if (f < scan.min_value) {
            scan.min_value = f;
            argmin_idx.clear();
        }
        if (f == scan.min_value) argmin_idx.push_back(b);
    });
    for (const auto& b : argmin_idx) {
        std::vector<Permutation> tuple;
        for (int idx : b) tuple.push_back(tab.perm(idx));
        scan.argmins.push_back(std::move(tuple));
    }

    if (mode == ScanMode::full) {
        // confirm the chained bound: the (alpha, beta) minimum equals the
        // beta-only minimum
        std::vector<std::vector<int>> both(2 * g.k, base);
        if (tuple_count(both) > static_cast<double>(max_tuples))
            throw cap_exceeded("brute_min_F: (alpha, beta) tuple count exceeds cap");
        std::int64_t best = INT64_MAX;
        std::vector<int> a(g.k), b(g.k);
        scan_tuples(both, [&](const std::vector<int>& ab) {
            std::copy(ab.begin(), ab.begin() + g.k, a.begin());
            std::copy(ab.begin() + g.k, ab.end(), b.begin());
            best = std::min(best, eval_F_idx(g, tab, gamma_idx, a, b));
        });
        scan.min_alpha_beta = best;
    }
    return scan;
}

} // namespace detail

/// Minimum of F_n(beta) over beta tuples (all of S_n^k in full mode, geodesic
/// tuples otherwise) together with every attaining tuple. Full mode also
/// rescans (alpha, beta) pairs to confirm the chained minimum.
inline MinScan brute_min_F_n(const FattenedGraph& g, int n, ScanMode mode,
                             std::int64_t max_tuples = 100'000'000) {
    return detail::brute_min(g, n, Permutation::full_cycle(n), mode, max_tuples);
}

/// Same for F_{n,n} on 2n points.
inline MinScan brute_min_F_nn(const FattenedGraph& g, int n, ScanMode mode,
                              std::int64_t max_tuples = 100'000'000) {
    return detail::brute_min(g, 2 * n, Permutation::double_cycle(n), mode, max_tuples);
}

// ---------------------------------------------------------------------------
// Limit moments
// ---------------------------------------------------------------------------

/// n-th limit moment of the rescaled marginal spectrum: the number of
/// minimizing beta tuples that survive the per-vertex alpha sums. Each alpha
/// sum carries the leading Weingarten coefficients phi, and telescopes to
///   s_i = 0            -> beta_i = Id
///   t_i = 0            -> beta_i = gamma_n
///   s_i > 0 and t_i > 0 -> alpha_i = beta_i, weight 1,
/// so the moment is the count of constrained geodesic tuples with
/// F_n(beta) = X(n-1).
inline std::int64_t limit_moment(const FattenedGraph& g, int n,
                                 std::int64_t max_tuples = 100'000'000) {
    if (n < 1) throw std::invalid_argument("limit_moment: order must be >= 1");
    if (n == 1) return 1;  // S_1 is trivial and Tr rho_S = 1
    const SnTable& tab = SnTable::cached(n);
    const Permutation gamma = Permutation::full_cycle(n);
    const int gamma_idx = tab.index_of(gamma);
    const int id_idx = tab.index_of(Permutation::identity(n));
    const std::vector<int> geo = geodesic_set(tab, gamma);

    std::vector<std::vector<int>> candidates(g.k);
    for (int i = 0; i < g.k; ++i) {
        if (g.s[i] == 0)
            candidates[i] = {id_idx};
        else if (g.t[i] == 0)
            candidates[i] = {gamma_idx};
        else
            candidates[i] = geo;
    }
    if (detail::tuple_count(candidates) > static_cast<double>(max_tuples))
        throw cap_exceeded("limit_moment: tuple count exceeds cap");

    const std::int64_t target =
        static_cast<std::int64_t>(max_flow_value(g)) * (n - 1);
    std::int64_t count = 0;
    detail::scan_tuples(candidates, [&](const std::vector<int>& b) {
        if (detail::eval_F_beta_idx(g, tab, gamma_idx, b) == target) ++count;
    });
    return count;
}

// ---------------------------------------------------------------------------
// Gap theorem scans
// ---------------------------------------------------------------------------

struct GapScan {
    std::int64_t max_gap = INT64_MIN;  // max of X(2n-2) - F over the family
    std::int64_t tuples_scanned = 0;
    bool exhaustive = false;           // whole of S_2n^k vs the constrained family
};

/// Max of X(2n-2) - F_{n,n}(beta) over beta tuples containing at least one
/// connected permutation. Exhaustive over S_2n^k when that fits the cap;
/// otherwise over the constrained family with one entry forced to run over
/// every connected permutation and the rest over the geodesic set.
inline GapScan check_gap(const FattenedGraph& g, int n,
                         std::int64_t max_tuples = 100'000'000) {
    const int degree = 2 * n;
    const SnTable& tab = SnTable::cached(degree);
    const Permutation gamma = Permutation::double_cycle(n);
    const int gamma_idx = tab.index_of(gamma);
    const std::int64_t bound = static_cast<std::int64_t>(max_flow_value(g)) * (degree - 2);

    const std::vector<int> connected = connected_set(tab);
    std::vector<bool> is_conn(tab.size(), false);
    for (int c : connected) is_conn[c] = true;

    GapScan scan;
    std::vector<int> all(tab.size());
    for (int i = 0; i < tab.size(); ++i) all[i] = i;

    if (detail::tuple_count(std::vector<std::vector<int>>(g.k, all)) <=
        static_cast<double>(max_tuples)) {
        scan.exhaustive = true;
        detail::scan_tuples(std::vector<std::vector<int>>(g.k, all),
                            [&](const std::vector<int>& b) {
                                bool any = false;
                                for (int idx : b) any |= is_conn[idx];
                                if (!any) return;
                                ++scan.tuples_scanned;
                                scan.max_gap = std::max(
                                    scan.max_gap,
                                    bound - detail::eval_F_beta_idx(g, tab, gamma_idx, b));
                            });
        return scan;
    }

    const std::vector<int> geo = geodesic_set(tab, gamma);
    for (int forced = 0; forced < g.k; ++forced) {
        std::vector<std::vector<int>> candidates(g.k, geo);
        candidates[forced] = connected;
        if (detail::tuple_count(candidates) > static_cast<double>(max_tuples))
            throw cap_exceeded("check_gap: constrained family exceeds cap");
        detail::scan_tuples(candidates, [&](const std::vector<int>& b) {
            ++scan.tuples_scanned;
            scan.max_gap = std::max(
                scan.max_gap, bound - detail::eval_F_beta_idx(g, tab, gamma_idx, b));
        });
    }
    return scan;
}

/// Max of X(2n-2) - F_{n,n}(alpha, beta) over tuples with a connected entry
/// among all 2k positions; certifies the variance decay exponent at order n.
/// Exhaustive over S_2n^(2k) when feasible, otherwise over two constrained
/// families: a connected beta with alphas tied to betas elsewhere, and a
/// connected alpha against geodesic betas.
inline GapScan variance_gap_exponent(const FattenedGraph& g, int n,
                                     std::int64_t max_tuples = 100'000'000) {
    const int degree = 2 * n;
    const SnTable& tab = SnTable::cached(degree);
    const Permutation gamma = Permutation::double_cycle(n);
    const int gamma_idx = tab.index_of(gamma);
    const std::int64_t bound = static_cast<std::int64_t>(max_flow_value(g)) * (degree - 2);

    const std::vector<int> connected = connected_set(tab);
    std::vector<bool> is_conn(tab.size(), false);
    for (int c : connected) is_conn[c] = true;

    GapScan scan;
    std::vector<int> all(tab.size());
    for (int i = 0; i < tab.size(); ++i) all[i] = i;

    std::vector<int> a(g.k), b(g.k);
    if (detail::tuple_count(std::vector<std::vector<int>>(2 * g.k, all)) <=
        static_cast<double>(max_tuples)) {
        scan.exhaustive = true;
        detail::scan_tuples(std::vector<std::vector<int>>(2 * g.k, all),
                            [&](const std::vector<int>& ab) {
                                bool any = false;
                                for (int idx : ab) any |= is_conn[idx];
                                if (!any) return;
                                ++scan.tuples_scanned;
                                std::copy(ab.begin(), ab.begin() + g.k, a.begin());
                                std::copy(ab.begin() + g.k, ab.end(), b.begin());
                                scan.max_gap = std::max(
                                    scan.max_gap,
                                    bound - detail::eval_F_idx(g, tab, gamma_idx, a, b));
                            });
        return scan;
    }

    const std::vector<int> geo = geodesic_set(tab, gamma);
    for (int forced = 0; forced < g.k; ++forced) {
        // family A: beta_forced connected, alpha_i = beta_i everywhere else
        {
            std::vector<std::vector<int>> candidates(g.k, geo);
            candidates[forced] = connected;
            if (detail::tuple_count(candidates) > static_cast<double>(max_tuples))
                throw cap_exceeded("variance_gap_exponent: constrained family exceeds cap");
            detail::scan_tuples(candidates, [&](const std::vector<int>& bt) {
                ++scan.tuples_scanned;
                scan.max_gap = std::max(
                    scan.max_gap, bound - detail::eval_F_idx(g, tab, gamma_idx, bt, bt));
            });
        }
        // family B: alpha_forced connected, betas geodesic, other alphas tied
        {
            std::vector<std::vector<int>> candidates(g.k + 1, geo);
            candidates[g.k] = connected;
            if (detail::tuple_count(candidates) > static_cast<double>(max_tuples))
                throw cap_exceeded("variance_gap_exponent: constrained family exceeds cap");
            detail::scan_tuples(candidates, [&](const std::vector<int>& bt) {
                ++scan.tuples_scanned;
                std::copy(bt.begin(), bt.begin() + g.k, b.begin());
                a = b;
                a[forced] = bt[g.k];
                scan.max_gap = std::max(
                    scan.max_gap, bound - detail::eval_F_idx(g, tab, gamma_idx, a, b));
            });
        }
    }
    return scan;
}

// ---------------------------------------------------------------------------
// Disconnected additivity
// ---------------------------------------------------------------------------

/// For tuples with every entry non-connected, F_{n,n}(alpha, beta) splits as
/// F_n(alpha^(1), beta^(1)) + F_n(alpha^(2), beta^(2)). Checks the stated
/// number of seeded random non-connected tuples.
inline bool check_disconnect_additivity(const FattenedGraph& g, int n, int samples = 1000,
                                        std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    const SnTable& tab = SnTable::cached(n);
    auto random_half = [&] { return tab.perm(std::uniform_int_distribution<int>(
                                 0, tab.size() - 1)(rng)); };
    for (int trial = 0; trial < samples; ++trial) {
        std::vector<Permutation> alphas, betas, a1, a2, b1, b2;
        for (int i = 0; i < g.k; ++i) {
            const Permutation alo = random_half(), ahi = random_half();
            const Permutation blo = random_half(), bhi = random_half();
            alphas.push_back(combine_halves(alo, ahi));
            betas.push_back(combine_halves(blo, bhi));
            a1.push_back(alo);
            a2.push_back(ahi);
            b1.push_back(blo);
            b2.push_back(bhi);
        }
        if (eval_F_nn(g, alphas, betas) != eval_F_n(g, a1, b1) + eval_F_n(g, a2, b2))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Moment report
// ---------------------------------------------------------------------------

struct MomentOrder {
    int n = 0;
    std::int64_t limit = 0;
    std::int64_t minimizing_beta_tuples = 0;  // geodesic argmin count, unconstrained
    std::optional<std::int64_t> gap_exponent;
    std::vector<std::pair<std::int64_t, Rational>> exact_by_N;
};

struct MomentReport {
    std::string graph;
    int area = 0;
    std::vector<MomentOrder> orders;
};

inline MomentReport build_moment_report(const FattenedGraph& g, int n_max,
                                        const std::vector<std::int64_t>& exact_N = {},
                                        std::int64_t max_tuples = 100'000'000) {
    MomentReport report;
    report.graph = g.name;
    report.area = max_flow_value(g);
    for (int n = 1; n <= n_max; ++n) {
        MomentOrder order;
        order.n = n;
        order.limit = limit_moment(g, n, max_tuples);
        if (n > 1) {
            try {
                order.minimizing_beta_tuples =
                    brute_min_F_n(g, n, ScanMode::geodesic, max_tuples).argmins.size();
            } catch (const cap_exceeded&) {
                order.minimizing_beta_tuples = -1;
            }
            try {
                const GapScan gap = check_gap(g, n, max_tuples);
                order.gap_exponent = gap.max_gap;
            } catch (const cap_exceeded&) {
            }
        } else {
            order.minimizing_beta_tuples = 1;
        }
        for (std::int64_t N : exact_N) {
            try {
                order.exact_by_N.emplace_back(N, exact_first_moment(g, n, N, max_tuples));
            } catch (const std::exception&) {
                // skip infeasible (N, n) combinations
            }
        }
        report.orders.push_back(std::move(order));
    }
    return report;
}

} // namespace rgs
