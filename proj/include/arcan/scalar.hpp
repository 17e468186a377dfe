#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

#include <boost/multiprecision/gmp.hpp>

#include <arcan/errors.hpp>

namespace arcan {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

/// Coefficient scalars: exact rationals or binary64.
///
/// Float arithmetic flushes results that are within a small multiple of the
/// rounding error of their operands to an exact zero, so that cancellations
/// which are exact in real arithmetic (a denominator vanishing at a point)
/// are recognised as such by the jet valuation logic.
template <typename S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";

    /// Relative threshold below which a computed value is treated as rounding noise.
    static constexpr double flush_threshold = 64.0 * std::numeric_limits<double>::epsilon();

    static double from_rational(const Rational& q) { return q.convert_to<double>(); }
    static double from_double(double x) { return x; }
    static double to_double(double x) { return x; }
    static double abs(double x) { return std::fabs(x); }
    static bool is_zero(double x) { return x == 0.0; }

    static double flush(double value, double magnitude)
    {
        return std::fabs(value) <= flush_threshold * magnitude ? 0.0 : value;
    }

    /// Nonnegative square root; nullopt for negative input.
    static std::optional<double> sqrt(double x)
    {
        if (x < 0.0) {
            return std::nullopt;
        }
        return std::sqrt(x);
    }

    static std::string to_string(double x)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "rational";

    static Rational from_rational(const Rational& q) { return q; }
    static Rational from_double(double x) { return Rational(x); }
    static double to_double(const Rational& x) { return x.convert_to<double>(); }
    static Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }
    static bool is_zero(const Rational& x) { return x.is_zero(); }
    static Rational flush(const Rational& value, const Rational&) { return value; }

    /// Exact square root; throws IrrationalRoot when the input is not the square of a rational.
    static std::optional<Rational> sqrt(const Rational& x)
    {
        if (x < 0) {
            return std::nullopt;
        }
        const Integer num = boost::multiprecision::numerator(x);
        const Integer den = boost::multiprecision::denominator(x);
        const Integer rn = boost::multiprecision::sqrt(num);
        const Integer rd = boost::multiprecision::sqrt(den);
        if (rn * rn != num || rd * rd != den) {
            throw IrrationalRoot();
        }
        return Rational(rn, rd);
    }

    static std::string to_string(const Rational& x)
    {
        const Integer den = boost::multiprecision::denominator(x);
        if (den == 1) {
            return boost::multiprecision::numerator(x).str();
        }
        return boost::multiprecision::numerator(x).str() + "/" + den.str();
    }
};

template <typename S>
concept Scalar = requires { scalar_traits<S>::exact; };

template <Scalar S>
S scalar_from_double(double x)
{
    return scalar_traits<S>::from_double(x);
}

template <Scalar S>
double to_double(const S& x)
{
    return scalar_traits<S>::to_double(x);
}

template <Scalar S>
S scalar_abs(const S& x)
{
    return scalar_traits<S>::abs(x);
}

/// Rational nearest to x with the given power-of-two denominator.
inline Rational round_to_dyadic(double x, int bits)
{
    const double scale = std::ldexp(1.0, bits);
    return Rational(Integer(static_cast<long long>(std::llround(x * scale))), Integer(1) << bits);
}

/// SplitMix64 finaliser, used to derive independent seeds from (base, index) pairs.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept
{
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rational binomial(int n, int k)
{
    if (k < 0 || k > n) {
        return Rational(0);
    }
    Integer r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return Rational(r);
}

inline Rational factorial(int n)
{
    Integer r = 1;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return Rational(r);
}

} // namespace arcan
