#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "rgs/moment_engine.hpp"

namespace rgs {

struct CheckResult {
    std::string name;
    enum class Status { pass, fail, skipped } status = Status::pass;
    std::string detail;
};

namespace detail {

inline CheckResult pass(std::string name, std::string detail = "") {
    return {std::move(name), CheckResult::Status::pass, std::move(detail)};
}
inline CheckResult fail(std::string name, std::string detail) {
    return {std::move(name), CheckResult::Status::fail, std::move(detail)};
}
inline CheckResult skipped(std::string name, std::string detail) {
    return {std::move(name), CheckResult::Status::skipped, std::move(detail)};
}

inline int min_cut_value(const FlowNetwork& net) {
    int best = INT32_MAX;
    for (unsigned mask = 0; mask < (1u << net.k); ++mask) {
        int cut = 0;
        auto source_side = [&](int node) {
            if (node == FlowNetwork::source) return true;
            if (node == FlowNetwork::sink) return false;
            return (mask >> (node - 2) & 1u) != 0;
        };
        for (int u = 0; u < net.nodes(); ++u)
            for (int v = 0; v < net.nodes(); ++v)
                if (source_side(u) && !source_side(v)) cut += net.capacity[u][v];
        best = std::min(best, cut);
    }
    return best;
}

} // namespace detail

/// The invariant suite behind `verify`: flow/oracle agreement, the F
/// minimization bounds, the connected-permutation gap theorem, disconnected
/// additivity, and the Weingarten identities, each at sizes that fit the
/// tuple budget.
inline std::vector<CheckResult> run_verification(const FattenedGraph& g,
                                                 std::int64_t max_tuples = 100'000'000,
                                                 std::uint64_t seed = 1) {
    using detail::fail;
    using detail::pass;
    using detail::skipped;

    std::vector<CheckResult> out;
    const FlowNetwork net = build_network(g);
    const int X = max_flow(net).value;

    {
        std::ostringstream detail;
        try {
            const int area = brute_force_area(g);
            detail << "max flow " << X << ", crossing maximum " << area;
            out.push_back(area == X ? pass("flow equals crossing oracle", detail.str())
                                    : fail("flow equals crossing oracle", detail.str()));
        } catch (const cap_exceeded&) {
            out.push_back(skipped("flow equals crossing oracle", "assignment count above cap"));
        }
    }

    if (g.k <= 10) {
        const int cut = detail::min_cut_value(net);
        std::ostringstream detail;
        detail << "max flow " << X << ", min cut " << cut;
        out.push_back(cut == X ? pass("max flow equals min cut", detail.str())
                               : fail("max flow equals min cut", detail.str()));
    } else {
        out.push_back(skipped("max flow equals min cut", "k above exhaustive cut cap"));
    }

    for (int n : {2, 3}) {
        const std::string name = "F_n minimum at order " + std::to_string(n);
        const double full_cost = std::pow(static_cast<double>(factorial(n)), 2 * g.k);
        try {
            if (full_cost <= static_cast<double>(max_tuples)) {
                const MinScan scan = brute_min_F_n(g, n, ScanMode::full, max_tuples);
                const bool ok = scan.min_value == std::int64_t(X) * (n - 1) &&
                                scan.min_alpha_beta == scan.min_value;
                std::ostringstream detail;
                detail << "full scan: min " << scan.min_value << " over "
                       << scan.tuples_scanned << " beta tuples, expected " << X * (n - 1);
                out.push_back(ok ? pass(name, detail.str()) : fail(name, detail.str()));
            } else {
                const MinScan scan = brute_min_F_n(g, n, ScanMode::geodesic, max_tuples);
                const bool ok = scan.min_value == std::int64_t(X) * (n - 1);
                std::ostringstream detail;
                detail << "geodesic scan: min " << scan.min_value << ", expected "
                       << X * (n - 1);
                out.push_back(ok ? pass(name, detail.str()) : fail(name, detail.str()));
            }
        } catch (const cap_exceeded& e) {
            out.push_back(skipped(name, e.what()));
        }
    }

    {
        const std::string name = "F_nn minimum at order 2";
        try {
            const double full_cost = std::pow(24.0, 2 * g.k);
            const ScanMode mode = full_cost <= static_cast<double>(max_tuples)
                                      ? ScanMode::full
                                      : ScanMode::geodesic;
            const MinScan scan = brute_min_F_nn(g, 2, mode, max_tuples);
            const bool ok = scan.min_value == std::int64_t(X) * 2 &&
                            (!scan.min_alpha_beta || *scan.min_alpha_beta == scan.min_value);
            std::ostringstream detail;
            detail << (mode == ScanMode::full ? "full" : "geodesic") << " scan: min "
                   << scan.min_value << ", expected " << 2 * X;
            out.push_back(ok ? pass(name, detail.str()) : fail(name, detail.str()));
        } catch (const cap_exceeded& e) {
            out.push_back(skipped(name, e.what()));
        }
    }

    {
        const std::string name = "gap theorem (beta tuples)";
        try {
            const GapScan scan = check_gap(g, 2, max_tuples);
            std::ostringstream detail;
            detail << "max gap " << scan.max_gap << " over " << scan.tuples_scanned
                   << (scan.exhaustive ? " tuples (exhaustive)" : " tuples (constrained)");
            out.push_back(scan.max_gap <= -2 ? pass(name, detail.str())
                                             : fail(name, detail.str()));
        } catch (const cap_exceeded& e) {
            out.push_back(skipped(name, e.what()));
        }
    }

    {
        const std::string name = "variance gap exponent (alpha, beta tuples)";
        try {
            const GapScan scan = variance_gap_exponent(g, 2, max_tuples);
            std::ostringstream detail;
            detail << "max gap " << scan.max_gap << " over " << scan.tuples_scanned
                   << (scan.exhaustive ? " tuples (exhaustive)" : " tuples (constrained)");
            out.push_back(scan.max_gap <= -2 ? pass(name, detail.str())
                                             : fail(name, detail.str()));
        } catch (const cap_exceeded& e) {
            out.push_back(skipped(name, e.what()));
        }
    }

    {
        const bool ok = check_disconnect_additivity(g, 2, 500, seed);
        out.push_back(ok ? pass("disconnected additivity", "500 random non-connected tuples")
                         : fail("disconnected additivity", "split additivity violated"));
    }

    {
        bool ok = true;
        std::ostringstream detail;
        for (int n = 1; n <= 3 && ok; ++n)
            for (std::int64_t N = n; N <= n + 2 && ok; ++N) {
                const WeingartenTable wg = wg_table(N, n);
                const SnTable& tab = SnTable::cached(n);
                Rational sum = 0;
                for (int i = 0; i < tab.size(); ++i)
                    sum += wg.value(tab.perm(i)) * Rational(bigint_pow(N, tab.cycles(i)));
                if (sum != Rational(1)) {
                    ok = false;
                    detail << "violated at n=" << n << " N=" << N;
                }
            }
        out.push_back(ok ? pass("weingarten row-sum identity", "n <= 3, N <= n+2")
                         : fail("weingarten row-sum identity", detail.str()));
    }

    {
        const std::string name = "exact first moment of order 1";
        try {
            bool ok = true;
            for (std::int64_t N : {2, 3})
                ok = ok && exact_first_moment(g, 1, N, max_tuples) == Rational(1);
            out.push_back(ok ? pass(name, "equals 1 at N = 2, 3")
                             : fail(name, "trace normalization violated"));
        } catch (const std::exception& e) {
            out.push_back(skipped(name, e.what()));
        }
    }

    {
        const std::int64_t m1 = limit_moment(g, 1, max_tuples);
        out.push_back(m1 == 1 ? pass("limit moment of order 1")
                              : fail("limit moment of order 1", std::to_string(m1)));
    }

    return out;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (r.status == CheckResult::Status::fail) return false;
    return true;
}

} // namespace rgs
