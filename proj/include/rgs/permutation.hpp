#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rgs/errors.hpp"

namespace rgs {

/// Element of the symmetric group on {0,...,n-1} in one-line notation.
///
/// The transposition length |p| is degree() - cycle_count(); the geodesic
/// order a <= b means |a| + |a^-1 b| = |b|.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<int> mapping) : map_(std::move(mapping)) {
        const int n = degree();
        std::vector<bool> seen(n, false);
        for (int v : map_) {
            if (v < 0 || v >= n || seen[v])
                throw std::invalid_argument("Permutation: mapping is not a bijection on {0,...,n-1}");
            seen[v] = true;
        }
    }

    static Permutation identity(int n) {
        require_degree(n);
        std::vector<int> m(n);
        std::iota(m.begin(), m.end(), 0);
        return Permutation(std::move(m));
    }

    // gamma_n: the cycle (0,1,...,n-1)
    static Permutation full_cycle(int n) {
        require_degree(n);
        std::vector<int> m(n);
        for (int i = 0; i < n; ++i) m[i] = (i + 1) % n;
        return Permutation(std::move(m));
    }

    // gamma_{n,n} on 2n points: the product of the full cycles on each half
    static Permutation double_cycle(int n) {
        require_degree(n);
        std::vector<int> m(2 * n);
        for (int i = 0; i < n; ++i) {
            m[i] = (i + 1) % n;
            m[n + i] = n + (i + 1) % n;
        }
        return Permutation(std::move(m));
    }

    static Permutation transposition(int n, int a, int b) {
        require_degree(n);
        if (a < 0 || b < 0 || a >= n || b >= n || a == b)
            throw std::invalid_argument("Permutation::transposition: bad points");
        std::vector<int> m(n);
        std::iota(m.begin(), m.end(), 0);
        std::swap(m[a], m[b]);
        return Permutation(std::move(m));
    }

    int degree() const { return static_cast<int>(map_.size()); }
    int operator()(int i) const { return map_[i]; }
    const std::vector<int>& mapping() const { return map_; }

    Permutation inverse() const {
        std::vector<int> m(map_.size());
        for (int i = 0; i < degree(); ++i) m[map_[i]] = i;
        Permutation r;
        r.map_ = std::move(m);
        return r;
    }

    std::vector<std::vector<int>> cycles() const {
        std::vector<std::vector<int>> out;
        std::vector<bool> seen(map_.size(), false);
        for (int i = 0; i < degree(); ++i) {
            if (seen[i]) continue;
            std::vector<int> cyc;
            for (int j = i; !seen[j]; j = map_[j]) {
                seen[j] = true;
                cyc.push_back(j);
            }
            out.push_back(std::move(cyc));
        }
        return out;
    }

    int cycle_count() const {
        int count = 0;
        std::vector<bool> seen(map_.size(), false);
        for (int i = 0; i < degree(); ++i) {
            if (seen[i]) continue;
            ++count;
            for (int j = i; !seen[j]; j = map_[j]) seen[j] = true;
        }
        return count;
    }

    // Minimal number of transpositions whose product is this permutation.
    int length() const { return degree() - cycle_count(); }

    bool is_identity() const {
        for (int i = 0; i < degree(); ++i)
            if (map_[i] != i) return false;
        return true;
    }

    // Cycle lengths in decreasing order; equal for conjugate permutations.
    std::vector<int> cycle_type() const {
        std::vector<int> t;
        for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
        std::sort(t.rbegin(), t.rend());
        return t;
    }

    std::string to_cycle_string() const {
        std::ostringstream os;
        bool any = false;
        for (const auto& c : cycles()) {
            if (c.size() < 2) continue;
            any = true;
            os << '(';
            for (size_t i = 0; i < c.size(); ++i) os << c[i] << (i + 1 < c.size() ? " " : "");
            os << ')';
        }
        if (!any) os << "id";
        return os.str();
    }

    bool operator==(const Permutation&) const = default;
    auto operator<=>(const Permutation&) const = default;

private:
    static void require_degree(int n) {
        if (n < 1) throw std::invalid_argument("Permutation: degree must be >= 1");
    }

    std::vector<int> map_;
};

// r(i) = p(q(i))
inline Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree())
        throw std::invalid_argument("compose: degree mismatch");
    std::vector<int> m(p.degree());
    for (int i = 0; i < p.degree(); ++i) m[i] = p(q(i));
    return Permutation(std::move(m));
}

// |a^-1 b|, the transposition distance between a and b.
inline int distance(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree())
        throw std::invalid_argument("distance: degree mismatch");
    // cycle count of a^-1 b without materializing the product
    const int n = a.degree();
    const Permutation ainv = a.inverse();
    std::vector<bool> seen(n, false);
    int cycles = 0;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (int j = i; !seen[j]; j = ainv(b(j))) seen[j] = true;
    }
    return n - cycles;
}

// a <= b in the geodesic order: |a| + |a^-1 b| = |b|
inline bool geodesic_le(const Permutation& a, const Permutation& b) {
    return a.length() + distance(a, b) == b.length();
}

// |p| + |p^-1 gamma_n| = n - 1, i.e. p lies on a geodesic from Id to gamma_n
inline bool is_noncrossing(const Permutation& p) {
    const int n = p.degree();
    return p.length() + distance(p, Permutation::full_cycle(n)) == n - 1;
}

// Visits all of S_n in lexicographic one-line order.
inline void for_each_in_sn(int n, const std::function<void(const Permutation&)>& fn) {
    if (n < 1) throw std::invalid_argument("for_each_in_sn: degree must be >= 1");
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    do {
        fn(Permutation(m));
    } while (std::next_permutation(m.begin(), m.end()));
}

inline std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

inline std::uint64_t catalan(int n) {
    // C(2n, n) / (n + 1), exact in 64 bits for the degrees used here
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

/// All non-crossing permutations of S_n, lexicographic in one-line notation.
/// Scans S_n, so it is capped (the count itself is Catalan(n)).
inline std::vector<Permutation> enumerate_noncrossing(int n, int cap = 8) {
    if (n > cap)
        throw cap_exceeded("enumerate_noncrossing: n exceeds cap " + std::to_string(cap));
    std::vector<Permutation> out;
    const Permutation gamma = Permutation::full_cycle(n);
    for_each_in_sn(n, [&](const Permutation& p) {
        if (p.length() + distance(p, gamma) == n - 1) out.push_back(p);
    });
    return out;
}

/// Permutations c with a <= c <= b on a geodesic, found by exhaustive scan.
inline std::vector<Permutation> enumerate_interval(const Permutation& a, const Permutation& b,
                                                   int cap = 7) {
    if (!geodesic_le(a, b))
        throw std::invalid_argument("enumerate_interval: a <= b does not hold");
    if (a.degree() > cap)
        throw cap_exceeded("enumerate_interval: degree exceeds cap " + std::to_string(cap));
    std::vector<Permutation> out;
    for_each_in_sn(a.degree(), [&](const Permutation& c) {
        if (geodesic_le(a, c) && geodesic_le(c, b)) out.push_back(c);
    });
    return out;
}

inline std::int64_t interval_count(const Permutation& a, const Permutation& b, int cap = 7) {
    return static_cast<std::int64_t>(enumerate_interval(a, b, cap).size());
}

/// True iff some cycle of p meets both {0,...,n-1} and {n,...,2n-1}.
inline bool is_connected(const Permutation& p) {
    if (p.degree() % 2 != 0)
        throw std::invalid_argument("is_connected: degree must be even");
    const int half = p.degree() / 2;
    for (const auto& c : p.cycles()) {
        bool low = false, high = false;
        for (int x : c) (x < half ? low : high) = true;
        if (low && high) return true;
    }
    return false;
}

/// Restrictions of a non-connected permutation on 2n points to each half,
/// the second reindexed to {0,...,n-1}.
inline std::pair<Permutation, Permutation> split_halves(const Permutation& p) {
    if (is_connected(p))
        throw std::invalid_argument("split_halves: permutation is connected");
    const int half = p.degree() / 2;
    std::vector<int> lo(half), hi(half);
    for (int i = 0; i < half; ++i) {
        lo[i] = p(i);
        hi[i] = p(half + i) - half;
    }
    return {Permutation(std::move(lo)), Permutation(std::move(hi))};
}

inline Permutation combine_halves(const Permutation& lo, const Permutation& hi) {
    if (lo.degree() != hi.degree())
        throw std::invalid_argument("combine_halves: degree mismatch");
    const int half = lo.degree();
    std::vector<int> m(2 * half);
    for (int i = 0; i < half; ++i) {
        m[i] = lo(i);
        m[half + i] = half + hi(i);
    }
    return Permutation(std::move(m));
}

} // namespace rgs
