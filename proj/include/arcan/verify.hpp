#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <arcan/classify.hpp>
#include <arcan/homog.hpp>
#include <arcan/parse.hpp>

namespace arcan {

/// Outcome of a randomized identity check. Residuals are absolute in
/// rational mode (and must be exactly zero) and relative in float mode.
struct VerifyReport {
    std::string identity;
    std::string mode;
    int trials = 0;
    std::uint64_t seed = 0;
    int failures = 0;
    double worst_residual = 0.0;
    /// Exact worst residual in rational mode.
    Rational worst_exact{0};
    bool pass() const { return failures == 0; }
};

inline const std::vector<std::string>& verify_identities()
{
    static const std::vector<std::string> names{"binoms", "alibaba", "euler", "interp-roundtrip", "loja"};
    return names;
}

namespace detail {

inline double unit_uniform(std::mt19937_64& rng) { return std::ldexp(static_cast<double>(rng() >> 11), -52) - 1.0; }

template <Scalar S>
S random_coeff(std::mt19937_64& rng)
{
    if constexpr (scalar_traits<S>::exact) {
        const long long p = static_cast<long long>(rng() % 19) - 9;
        const long long q = static_cast<long long>(rng() % 8) + 1;
        return Rational(p, q);
    } else {
        return unit_uniform(rng);
    }
}

template <Scalar S>
HomoPoly<S> random_homo(std::mt19937_64& rng, int n, int k)
{
    std::vector<S> cs;
    for (std::size_t j = 0; j < dim_homog(n, k); ++j) {
        cs.push_back(random_coeff<S>(rng));
    }
    return HomoPoly<S>(n, k, std::move(cs));
}

template <Scalar S>
std::vector<S> random_point(std::mt19937_64& rng, int n)
{
    std::vector<S> v;
    for (int i = 0; i < n; ++i) {
        v.push_back(random_coeff<S>(rng));
    }
    return v;
}

template <Scalar S>
void record(VerifyReport& r, const S& residual, double scale, double tol)
{
    using traits = scalar_traits<S>;
    const double rel = traits::to_double(traits::abs(residual)) / scale;
    if constexpr (traits::exact) {
        const Rational a = traits::abs(residual);
        r.worst_exact = std::max(r.worst_exact, a);
        r.failures += a != 0;
        r.worst_residual = std::max(r.worst_residual, traits::to_double(a));
    } else {
        r.failures += !(rel <= tol);
        r.worst_residual = std::max(r.worst_residual, rel);
    }
}

} // namespace detail

/// Runs one identity check over `trials` random cases (n <= 4, k <= 6;
/// n <= 3 for the Alibaba bound). Throws Error for an unknown identity.
template <Scalar S>
VerifyReport run_verify(const std::string& identity, int trials, std::uint64_t seed)
{
    using traits = scalar_traits<S>;
    VerifyReport r{identity, traits::name, trials, seed, 0, 0.0, Rational(0)};
    std::mt19937_64 rng(seed);
    const double tol = 1e-9;

    if (identity == "binoms") {
        for (int t = 0; t < trials; ++t) {
            const int n = 1 + static_cast<int>(rng() % 4);
            const int k = static_cast<int>(rng() % 7);
            const auto p = detail::random_homo<S>(rng, n, k);
            const auto a = detail::random_point<S>(rng, n);
            const auto v = detail::random_point<S>(rng, n);
            const S direct = p(v);
            const S fd = fd_reconstruct(p, std::span<const S>(a), std::span<const S>(v));
            // the finite difference sums terms of size |P(a + s v)| C(k, s) / k!
            double scale = 1.0;
            for (int s = 0; s <= k; ++s) {
                std::vector<S> pt(a);
                for (int i = 0; i < n; ++i) {
                    pt[static_cast<std::size_t>(i)] += S(s) * v[static_cast<std::size_t>(i)];
                }
                scale = std::max(scale, traits::to_double(traits::abs(p(pt))) * std::ldexp(1.0, k));
            }
            detail::record<S>(r, fd - direct, scale, tol);
        }
    } else if (identity == "euler") {
        for (int t = 0; t < trials; ++t) {
            const int n = 1 + static_cast<int>(rng() % 4);
            const int k = static_cast<int>(rng() % 7);
            const auto p = detail::random_homo<S>(rng, n, k);
            const auto v = detail::random_point<S>(rng, n);
            const double scale = 1.0 + (k + 1) * traits::to_double(traits::abs(p(v)));
            detail::record<S>(r, euler_check(p, std::span<const S>(v)), scale, tol);
        }
    } else if (identity == "interp-roundtrip") {
        std::map<std::pair<int, int>, NodeSet<S>> nodes;
        for (int t = 0; t < trials; ++t) {
            const int n = 1 + static_cast<int>(rng() % 4);
            const int k = static_cast<int>(rng() % 7);
            auto it = nodes.find({n, k});
            if (it == nodes.end()) {
                it = nodes.emplace(std::make_pair(n, k), sample_nodes<S>(n, k, mix_seed(seed, 16 * n + k), 1e6)).first;
            }
            const auto p = detail::random_homo<S>(rng, n, k);
            const auto q = interp_fit(interp_values(p, it->second), it->second);
            S worst(0);
            double mag = 1.0;
            for (std::size_t j = 0; j < p.coeffs().size(); ++j) {
                worst = std::max(worst, traits::abs(q.coeffs()[j] - p.coeffs()[j]));
                mag = std::max(mag, traits::to_double(traits::abs(p.coeffs()[j])));
            }
            // float tolerance scales with the node condition number
            detail::record<S>(r, worst, mag * std::max(1.0, it->second.condition_estimate * 1e-6), tol);
        }
    } else if (identity == "alibaba") {
        for (int t = 0; t < trials; ++t) {
            const int n = 1 + static_cast<int>(rng() % 3);
            const int k = static_cast<int>(rng() % 7);
            const auto p = detail::random_homo<S>(rng, n, k);
            std::vector<std::vector<S>> ball;
            const auto dirs = sample_directions(n, 256, rng());
            for (std::size_t i = 0; i < dirs.size(); ++i) {
                const double radius = std::pow(static_cast<double>(i % 16 + 1) / 16.0, 1.0 / n);
                std::vector<S> w;
                for (double c : dirs[i]) {
                    if constexpr (traits::exact) {
                        w.push_back(round_to_dyadic(c * radius * 0.99, 10));
                    } else {
                        w.push_back(c * radius);
                    }
                }
                ball.push_back(std::move(w));
            }
            const auto a = detail::random_point<S>(rng, n);
            S sup(0);
            std::vector<S> pt(static_cast<std::size_t>(n));
            for (const auto& w : ball) {
                for (int i = 0; i < n; ++i) {
                    pt[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] + w[static_cast<std::size_t>(i)];
                }
                sup = std::max(sup, traits::abs(p(pt)));
            }
            const auto rep = alibaba_check(p, ball, std::span<const S>(a), sup);
            // residual: how far the scaled sup exceeds L (0 when the bound holds)
            const double excess = std::max(0.0, traits::to_double(rep.scaled_max) - traits::to_double(sup));
            r.worst_residual = std::max(r.worst_residual, excess);
            r.failures += !(rep.scaled_holds && rep.intermediate_holds);
        }
        if constexpr (traits::exact) {
            r.worst_exact = Rational(r.worst_residual);
        }
    } else if (identity == "loja") {
        // N and C for 1/(x^2 + y^2) and x y / (x^2 + y^2) near the origin on a side x side grid
        const int side = std::max(2, 2 * static_cast<int>(std::ceil(std::sqrt(std::max(trials, 4)) / 2.0)));
        std::vector<std::vector<double>> samples;
        for (int i = 0; i < side; ++i) {
            for (int j = 0; j < side; ++j) {
                samples.push_back({-1.0 + 2.0 * i / (side - 1), -1.0 + 2.0 * j / (side - 1)});
            }
        }
        const std::vector<std::vector<double>> origin{{0.0, 0.0}};
        const auto inv = loja_estimate(parse("guard(1/(x^2+y^2), 0)"), origin, samples);
        const auto e4 = loja_estimate(parse("guard(x*y/(x^2+y^2), 0)"), origin, samples);
        r.failures += !(inv.n == 2 && inv.c >= 1.0 && inv.c <= 1.01);
        r.failures += !(e4.n == 0 && e4.c >= 0.5 && e4.c <= 0.51);
        r.worst_residual = std::max(std::fabs(inv.c - 1.0), std::fabs(e4.c - 0.5));
        r.trials = static_cast<int>(samples.size());
    } else {
        throw Error("unknown identity '" + identity + "'");
    }
    return r;
}

} // namespace arcan
