#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace rgs {

/// Counter-based 64-bit generator: a strided counter pushed through an
/// avalanche mixer. Cheap to seed, no warm-up, and streams derived from
/// (master, N, trial) are independent of execution order, so experiment
/// results do not depend on the thread count.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform in (0, 1]; never 0, so log() is safe.
    double uniform01() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

    /// Standard normal by Box-Muller; the second value of each pair is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cached_ = r * std::sin(angle);
        have_cached_ = true;
        return r * std::cos(angle);
    }

    /// Standard complex normal: E|z|^2 = 1.
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0;
};

/// Per-trial stream seed from (master seed, N, trial) by avalanche chaining.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t n, std::uint64_t trial) {
    std::uint64_t h = SplitMix64::mix(master ^ 0x9E3779B97F4A7C15ull);
    h = SplitMix64::mix(h ^ (n * 0xBF58476D1CE4E5B9ull));
    h = SplitMix64::mix(h ^ (trial * 0x94D049BB133111EBull));
    return h;
}

} // namespace rgs
