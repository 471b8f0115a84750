#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace rgs {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt bigint_pow(std::int64_t base, std::int64_t exp) {
    BigInt r = 1;
    BigInt b = base;
    for (; exp > 0; exp >>= 1) {
        if (exp & 1) r *= b;
        b *= b;
    }
    return r;
}

// base^exp with exp of either sign
inline Rational rational_pow(std::int64_t base, std::int64_t exp) {
    if (exp >= 0) return Rational(bigint_pow(base, exp));
    return Rational(BigInt(1), bigint_pow(base, -exp));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

} // namespace rgs
