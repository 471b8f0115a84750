#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rgs/errors.hpp"

namespace rgs {

/// Free Poisson (Marchenko-Pastur) law with rate c > 0:
///   d pi_c(t) = max(1-c, 0) delta_0
///             + sqrt(4c - (t-1-c)^2) / (2 pi t) dt  on [(1-sqrt c)^2, (1+sqrt c)^2].
struct FreePoissonLaw {
    double c;

    explicit FreePoissonLaw(double rate) : c(rate) {
        if (!(c > 0)) throw std::invalid_argument("FreePoissonLaw: rate must be positive");
    }

    double atom() const { return std::max(1.0 - c, 0.0); }
    double support_lo() const { return (1 - std::sqrt(c)) * (1 - std::sqrt(c)); }
    double support_hi() const { return (1 + std::sqrt(c)) * (1 + std::sqrt(c)); }

    double density(double t) const {
        if (t < support_lo() || t > support_hi() || t == 0) return 0.0;
        const double disc = 4 * c - (t - 1 - c) * (t - 1 - c);
        return disc <= 0 ? 0.0 : std::sqrt(disc) / (2 * M_PI * t);
    }
};

/// Visits every non-crossing partition of {0,...,n-1} exactly once. Blocks are
/// built by recursive interval splitting: the block of a segment's first
/// element cuts the rest into independent sub-segments.
inline void for_each_noncrossing_partition(
    int n, const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
    if (n < 0) throw std::invalid_argument("for_each_noncrossing_partition: negative size");
    std::vector<std::vector<int>> blocks;
    std::vector<std::pair<int, int>> segments;  // pending [lo, hi) ranges
    if (n > 0) segments.push_back({0, n});

    std::function<void()> next_segment = [&] {
        if (segments.empty()) {
            fn(blocks);
            return;
        }
        const auto [lo, hi] = segments.back();
        segments.pop_back();
        if (lo == hi) {
            next_segment();
            segments.push_back({lo, hi});
            return;
        }
        std::vector<int> block = {lo};
        std::function<void(int)> walk = [&](int prev) {
            // close the block here; the tail (prev, hi) is a fresh segment
            segments.push_back({prev + 1, hi});
            blocks.push_back(block);
            next_segment();
            blocks.pop_back();
            segments.pop_back();
            // or extend the block with q, leaving the gap (prev, q) inside
            for (int q = prev + 1; q < hi; ++q) {
                segments.push_back({prev + 1, q});
                block.push_back(q);
                walk(q);
                block.pop_back();
                segments.pop_back();
            }
        };
        walk(lo);
        segments.push_back({lo, hi});
    };
    next_segment();
}

/// n-th moment of pi_c: sum over non-crossing partitions of [n] of c^#blocks.
/// Exact (within double) for the small integer rates used here.
inline double fp_moment(double c, int n, int n_cap = 12) {
    if (!(c > 0)) throw std::invalid_argument("fp_moment: rate must be positive");
    if (n < 1) throw std::invalid_argument("fp_moment: order must be >= 1");
    if (n > n_cap) throw cap_exceeded("fp_moment: order exceeds cap");
    double total = 0;
    for_each_noncrossing_partition(n, [&](const std::vector<std::vector<int>>& blocks) {
        total += std::pow(c, static_cast<double>(blocks.size()));
    });
    return total;
}

/// Mean entropy -int t log t d pi_c: -1/2 - c log c for c >= 1, -c^2/2 below.
inline double fp_entropy(double c) {
    if (!(c > 0)) throw std::invalid_argument("fp_entropy: rate must be positive");
    return c >= 1 ? -0.5 - c * std::log(c) : -c * c / 2;
}

namespace detail {

// `force` demands that many further bisections before the error estimate is
// trusted; symmetric integrands can make the halved sum agree with the whole
// estimate spuriously at coarse levels.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth, int force) {
    const double m = (a + b) / 2;
    const double lm = (a + m) / 2, rm = (m + b) / 2;
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || (force <= 0 && std::abs(left + right - whole) < 15 * tol))
        return left + right + (left + right - whole) / 15;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1, force - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1, force - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
    const int panels = 16;
    const double h = (b - a) / panels;
    double total = 0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h, hi = lo + h;
        const double flo = f(lo), fhi = f(hi), fm = f((lo + hi) / 2);
        const double whole = h / 6 * (flo + 4 * fm + fhi);
        total += adaptive_simpson(f, lo, hi, flo, fm, fhi, whole, tol / panels, 40, 2);
    }
    return total;
}

/// Bulk integral of g against the density, after the substitution
/// t(u) = (1 - sqrt c)^2 + 4 sqrt(c) sin^2 u, u in [0, pi/2], which removes
/// the square-root edge singularities:
///   int g(t) rho(t) dt = (4c/pi) int_0^{pi/2} g(t(u)) sin^2 u cos^2 u / t(u) du.
inline double fp_bulk_integral(double c, const std::function<double(double)>& g) {
    const double rc = std::sqrt(c);
    const double base = (1 - rc) * (1 - rc);
    auto integrand = [&](double u) {
        const double su = std::sin(u), cu = std::cos(u);
        const double w = 4 * su * su * cu * cu;
        const double t = base + 4 * rc * su * su;
        if (t == 0) return g(0.0) == 0 ? 0.0 : cu * cu * g(0.0);  // c = 1 endpoint
        if (w == 0) return 0.0;
        return w * g(t) / t;
    };
    return 4 * c / M_PI * integrate(integrand, 0.0, M_PI / 2);
}

} // namespace detail

/// Quadrature validators for the combinatorial and closed-form routes.
inline double fp_bulk_mass_quadrature(double c) {
    return detail::fp_bulk_integral(c, [](double) { return 1.0; });
}

inline double fp_moment_quadrature(double c, int n) {
    return detail::fp_bulk_integral(c, [n](double t) { return std::pow(t, n); });
}

inline double fp_entropy_quadrature(double c) {
    // the atom contributes 0 to -int t log t
    return -detail::fp_bulk_integral(c, [](double t) { return t <= 0 ? 0.0 : t * std::log(t); });
}

} // namespace rgs
