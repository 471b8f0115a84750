#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rgs/bigrational.hpp"
#include "rgs/errors.hpp"
#include "rgs/flow.hpp"
#include "rgs/graph.hpp"
#include "rgs/sn_table.hpp"

namespace rgs {

/// Exact Weingarten function of the unitary group at dimension N and degree n,
/// one rational value per cycle type. Wg is a class function, so the Gram
/// system N^{#(alpha beta^-1)} is solved per conjugacy class instead of per
/// permutation.
struct WeingartenTable {
    std::int64_t dimension = 0;
    int degree = 0;
    std::map<std::vector<int>, Rational> by_type;

    const Rational& value(const Permutation& p) const { return by_type.at(p.cycle_type()); }
    const Rational& value_of_type(const std::vector<int>& type) const { return by_type.at(type); }
};

/// Solves G w = e_Id exactly, where G_{alpha beta} = N^{#(alpha beta^-1)}.
/// Requires N >= n, where the Gram matrix is nonsingular.
inline WeingartenTable wg_table(std::int64_t N, int n, int degree_cap = 6) {
    if (n < 1) throw std::invalid_argument("wg_table: degree must be >= 1");
    if (n > degree_cap)
        throw cap_exceeded("wg_table: degree " + std::to_string(n) + " exceeds cap");
    if (N < n)
        throw std::invalid_argument("wg_table: need dimension >= degree (Gram matrix may be singular)");

    const SnTable& tab = SnTable::cached(n);
    std::map<std::vector<int>, std::vector<int>> classes;
    for (int i = 0; i < tab.size(); ++i) classes[tab.perm(i).cycle_type()].push_back(i);

    std::vector<std::vector<int>> types;
    std::vector<int> reps;
    for (const auto& [type, members] : classes) {
        types.push_back(type);
        reps.push_back(members.front());
    }
    const int P = static_cast<int>(types.size());

    // class-reduced Gram system, augmented with the right-hand side
    std::vector<std::vector<Rational>> a(P, std::vector<Rational>(P + 1, Rational(0)));
    for (int r = 0; r < P; ++r)
        for (int c = 0; c < P; ++c) {
            BigInt sum = 0;
            for (int b : classes.at(types[c]))
                sum += bigint_pow(N, tab.cycles_of_quotient(reps[r], b));
            a[r][c] = Rational(sum);
        }
    const std::vector<int> id_type(n, 1);
    for (int r = 0; r < P; ++r) a[r][P] = Rational(types[r] == id_type ? 1 : 0);

    // Gaussian elimination with exact pivots
    for (int col = 0; col < P; ++col) {
        int pivot = -1;
        for (int r = col; r < P; ++r)
            if (a[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw std::runtime_error("wg_table: singular Gram matrix");
        std::swap(a[col], a[pivot]);
        const Rational inv = Rational(1) / a[col][col];
        for (int c = col; c <= P; ++c) a[col][c] *= inv;
        for (int r = 0; r < P; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational factor = a[r][col];
            for (int c = col; c <= P; ++c) a[r][c] -= factor * a[col][c];
        }
    }

    WeingartenTable out;
    out.dimension = N;
    out.degree = n;
    for (int c = 0; c < P; ++c) out.by_type[types[c]] = a[c][P];
    return out;
}

/// Leading large-N coefficient of Wg: the signed Catalan product over cycles,
/// phi(p) = prod (-1)^(len-1) Catalan(len-1). Satisfies
/// Wg(N, p) = phi(p) N^(-|p|-n) + O(N^(-|p|-n-2)).
inline std::int64_t moebius_phi(const Permutation& p) {
    std::int64_t phi = 1;
    for (const auto& cycle : p.cycles()) {
        const int len = static_cast<int>(cycle.size());
        const auto cat = static_cast<std::int64_t>(catalan(len - 1));
        phi *= (len % 2 == 0) ? -cat : cat;
    }
    return phi;
}

namespace detail {

/// Common engine behind the exact moment formulas: the Weingarten sum
///   N^prefactor_exp * sum over (alpha, beta) in S_degree^(2k) of
///     prod_i N^(#(gamma^-1 alpha_i) s_i + #(alpha_i) t_i)
///     prod_{i<j} N^((#(beta_i beta_j^-1)) - degree) e_ij)
///     prod_i Wg(N^(d_i), beta_i alpha_i^-1).
/// The alpha sums factor per vertex given beta_i, so the scan is over beta
/// tuples only; max_work caps that factored cost.
inline Rational weingarten_moment_sum(const FattenedGraph& g, int degree,
                                      const Permutation& gamma, std::int64_t N,
                                      std::int64_t prefactor_exp, std::int64_t max_work) {
    if (N < 1) throw std::invalid_argument("weingarten moment: N must be >= 1");
    const SnTable& tab = SnTable::cached(degree);
    const int sz = tab.size();

    double work = static_cast<double>(g.k) * sz * sz;
    double tuples = 1.0;
    for (int i = 0; i < g.k; ++i) tuples *= sz;
    work += tuples * g.k * g.k;
    if (work > static_cast<double>(max_work))
        throw cap_exceeded("weingarten moment: factored work exceeds cap");

    // per-vertex dimensions N^(d_i), with the N >= degree requirement
    std::vector<std::int64_t> dims(g.k);
    std::map<std::int64_t, WeingartenTable> wg_cache;
    for (int i = 0; i < g.k; ++i) {
        std::int64_t dim = 1;
        for (int r = 0; r < g.degree[i]; ++r) {
            dim *= N;
            if (dim > (std::int64_t(1) << 40))
                throw std::invalid_argument("weingarten moment: vertex dimension overflows");
        }
        if (dim < degree)
            throw std::invalid_argument("weingarten moment: N^d_i < degree at vertex " +
                                        g.vertex_names[i]);
        dims[i] = dim;
        if (!wg_cache.count(dim)) wg_cache.emplace(dim, wg_table(dim, degree));
    }

    const int gamma_inv = tab.inverse(tab.index_of(gamma));
    std::vector<int> cycles_gamma_inv(sz), cycles_plain(sz);
    for (int a = 0; a < sz; ++a) {
        cycles_gamma_inv[a] = tab.cycles(tab.product(gamma_inv, a));
        cycles_plain[a] = tab.cycles(a);
    }

    // h_i(b) = sum_a N^(#(gamma^-1 a) s_i + #(a) t_i) Wg(N^(d_i), b a^-1)
    std::vector<std::vector<Rational>> h(g.k, std::vector<Rational>(sz, Rational(0)));
    for (int i = 0; i < g.k; ++i) {
        const WeingartenTable& wg = wg_cache.at(dims[i]);
        std::vector<Rational> wg_of(sz);
        for (int q = 0; q < sz; ++q) wg_of[q] = wg.value(tab.perm(q));
        for (int b = 0; b < sz; ++b) {
            Rational acc = 0;
            for (int a = 0; a < sz; ++a) {
                const std::int64_t exp = static_cast<std::int64_t>(cycles_gamma_inv[a]) * g.s[i] +
                                         static_cast<std::int64_t>(cycles_plain[a]) * g.t[i];
                acc += Rational(bigint_pow(N, exp)) * wg_of[tab.product(b, tab.inverse(a))];
            }
            h[i][b] = acc;
        }
    }

    // edge factors N^((cc - degree) e_ij) for every cycle count cc
    std::vector<std::pair<std::pair<int, int>, std::vector<Rational>>> edge_factors;
    for (int i = 0; i < g.k; ++i)
        for (int j = i + 1; j < g.k; ++j)
            if (g.mult[i][j] > 0) {
                std::vector<Rational> by_cc(degree + 1);
                for (int cc = 1; cc <= degree; ++cc)
                    by_cc[cc] = rational_pow(
                        N, static_cast<std::int64_t>(cc - degree) * g.mult[i][j]);
                edge_factors.push_back({{i, j}, std::move(by_cc)});
            }

    Rational total = 0;
    std::vector<int> b(g.k, 0);
    for (;;) {
        Rational term = h[0][b[0]];
        for (int i = 1; i < g.k; ++i) term *= h[i][b[i]];
        for (const auto& [edge, by_cc] : edge_factors)
            term *= by_cc[tab.cycles_of_quotient(b[edge.first], b[edge.second])];
        total += term;

        int pos = g.k - 1;
        while (pos >= 0 && ++b[pos] == sz) b[pos--] = 0;
        if (pos < 0) break;
    }
    return rational_pow(N, prefactor_exp) * total;
}

} // namespace detail

/// E[(1/N^X) Tr(N^X rho_S)^n] as an exact rational, X the max-flow value.
inline Rational exact_first_moment(const FattenedGraph& g, int n, std::int64_t N,
                                   std::int64_t max_work = 100'000'000) {
    const int X = max_flow_value(g);
    return detail::weingarten_moment_sum(g, n, Permutation::full_cycle(n), N,
                                         static_cast<std::int64_t>(X) * (n - 1), max_work);
}

/// E[((1/N^X) Tr(N^X rho_S)^n)^2] as an exact rational, via the S_2n sum.
inline Rational exact_second_moment(const FattenedGraph& g, int n, std::int64_t N,
                                    std::int64_t max_work = 100'000'000) {
    const int X = max_flow_value(g);
    return detail::weingarten_moment_sum(g, 2 * n, Permutation::double_cycle(n), N,
                                         static_cast<std::int64_t>(X) * (2 * n - 2), max_work);
}

} // namespace rgs
