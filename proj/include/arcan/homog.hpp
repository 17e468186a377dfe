#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <arcan/errors.hpp>
#include <arcan/linalg.hpp>
#include <arcan/scalar.hpp>

namespace arcan {

/// Dimension of the space of degree-k homogeneous polynomials in n variables, C(n+k-1, k).
inline std::size_t dim_homog(int n, int k)
{
    return binomial(n + k - 1, k).convert_to<std::size_t>();
}

using Exponent = std::vector<int>;

namespace detail {

inline void build_monomials(int n, int k, Exponent& cur, std::vector<Exponent>& out)
{
    const int i = static_cast<int>(cur.size());
    if (i == n - 1) {
        cur.push_back(k);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int e = k; e >= 0; --e) {
        cur.push_back(e);
        build_monomials(n, k - e, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

/// Exponent vectors of degree k in n variables, graded-lexicographic:
/// x^k first, then x^{k-1}y, ..., last variable^k.
inline const std::vector<Exponent>& monomials(int n, int k)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<Exponent>> cache;
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.try_emplace({n, k});
    if (inserted) {
        Exponent cur;
        detail::build_monomials(n, k, cur, it->second);
    }
    return it->second;
}

/// Homogeneous polynomial of fixed degree on the graded-lex monomial basis.
template <Scalar S>
class HomoPoly {
public:
    HomoPoly(int nvars, int degree) : nvars_(nvars), degree_(degree), coeffs_(dim_homog(nvars, degree), S(0)) {}

    HomoPoly(int nvars, int degree, std::vector<S> coeffs) : nvars_(nvars), degree_(degree), coeffs_(std::move(coeffs))
    {
        if (coeffs_.size() != dim_homog(nvars, degree)) {
            throw Error("coefficient count does not match the homogeneous dimension");
        }
    }

    int nvars() const noexcept { return nvars_; }
    int degree() const noexcept { return degree_; }
    const std::vector<S>& coeffs() const noexcept { return coeffs_; }
    const std::vector<Exponent>& basis() const { return monomials(nvars_, degree_); }

    S operator()(std::span<const S> v) const
    {
        const auto powers = power_table(v);
        const auto& basis = this->basis();
        S acc(0);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (scalar_traits<S>::is_zero(coeffs_[j])) {
                continue;
            }
            acc += coeffs_[j] * monomial_value(powers, basis[j]);
        }
        return acc;
    }

    S operator()(const std::vector<S>& v) const { return (*this)(std::span<const S>(v)); }

    /// Partial derivative in variable i, a homogeneous polynomial of degree k - 1.
    HomoPoly derivative(int i) const
    {
        if (degree_ == 0) {
            return HomoPoly(nvars_, 0);
        }
        HomoPoly d(nvars_, degree_ - 1);
        const auto& lower = monomials(nvars_, degree_ - 1);
        std::map<Exponent, std::size_t> index;
        for (std::size_t j = 0; j < lower.size(); ++j) {
            index.emplace(lower[j], j);
        }
        const auto& basis = this->basis();
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const int e = basis[j][static_cast<std::size_t>(i)];
            if (e == 0) {
                continue;
            }
            Exponent m = basis[j];
            m[static_cast<std::size_t>(i)] -= 1;
            d.coeffs_[index.at(m)] += S(e) * coeffs_[j];
        }
        return d;
    }

    /// Powers v_i^e for e = 0..degree, shared by all monomial evaluations.
    std::vector<std::vector<S>> power_table(std::span<const S> v) const
    {
        std::vector<std::vector<S>> p(static_cast<std::size_t>(nvars_));
        for (int i = 0; i < nvars_; ++i) {
            auto& row = p[static_cast<std::size_t>(i)];
            row.reserve(static_cast<std::size_t>(degree_) + 1);
            row.push_back(S(1));
            for (int e = 1; e <= degree_; ++e) {
                row.push_back(row.back() * v[static_cast<std::size_t>(i)]);
            }
        }
        return p;
    }

    static S monomial_value(const std::vector<std::vector<S>>& powers, const Exponent& m)
    {
        S acc(1);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0) {
                acc *= powers[i][static_cast<std::size_t>(m[i])];
            }
        }
        return acc;
    }

    friend bool operator==(const HomoPoly&, const HomoPoly&) = default;

private:
    int nvars_;
    int degree_;
    std::vector<S> coeffs_;
};

/// Uniformly distributed unit vectors in R^n, reproducible from the seed
/// on every platform (Box-Muller over raw mt19937_64 output).
inline std::vector<std::vector<double>> sample_directions(int n, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    auto uniform = [&gen] { return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53; };
    std::vector<std::vector<double>> out;
    out.reserve(count);
    while (out.size() < count) {
        std::vector<double> v(static_cast<std::size_t>(n));
        double norm2 = 0.0;
        for (int i = 0; i < n; i += 2) {
            const double r = std::sqrt(-2.0 * std::log(uniform()));
            const double th = 2.0 * std::numbers::pi * uniform();
            v[static_cast<std::size_t>(i)] = r * std::cos(th);
            if (i + 1 < n) {
                v[static_cast<std::size_t>(i) + 1] = r * std::sin(th);
            }
        }
        for (double c : v) {
            norm2 += c * c;
        }
        if (norm2 < 1e-20) {
            continue;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& c : v) {
            c *= inv;
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// Evaluation matrix with rows = nodes and columns = graded-lex monomials.
template <Scalar S>
Matrix<S> evaluation_matrix(int n, int k, const std::vector<std::vector<S>>& nodes)
{
    const auto& basis = monomials(n, k);
    Matrix<S> a(nodes.size());
    const HomoPoly<S> shape(n, k);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto powers = shape.power_table(nodes[i]);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            a(i, j) = HomoPoly<S>::monomial_value(powers, basis[j]);
        }
    }
    return a;
}

/// Directions on which degree-k homogeneous interpolation is well posed.
template <Scalar S>
struct NodeSet {
    int nvars = 0;
    int degree = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<S>> nodes;
    double condition_estimate = 0.0;
    /// Factorization of the evaluation matrix, shared by every fit on these nodes.
    std::shared_ptr<const LuDecomposition<S>> lu;
};

/// Number of bits kept when rounding sampled directions to exact dyadic rationals.
inline constexpr int kRationalNodeBits = 6;

/// Rejection-samples d(n,k) generic directions whose evaluation matrix has
/// 1-norm condition at most `condition_cap`. Deterministic in the seed.
template <Scalar S>
NodeSet<S> sample_nodes(int n, int k, std::uint64_t seed, double condition_cap, int attempts = 64)
{
    const std::size_t d = dim_homog(n, k);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        const auto dirs = sample_directions(n, d, mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        std::vector<std::vector<S>> nodes;
        std::vector<std::vector<double>> approx;
        for (const auto& dir : dirs) {
            std::vector<S> node;
            std::vector<double> node_d;
            for (double c : dir) {
                if constexpr (scalar_traits<S>::exact) {
                    node.push_back(round_to_dyadic(c, kRationalNodeBits));
                } else {
                    node.push_back(c);
                }
                node_d.push_back(to_double(node.back()));
            }
            nodes.push_back(std::move(node));
            approx.push_back(std::move(node_d));
        }
        const double cond = condition_1(evaluation_matrix<double>(n, k, approx));
        if (!(cond <= condition_cap)) {
            continue;
        }
        auto lu = LuDecomposition<S>::factor(evaluation_matrix<S>(n, k, nodes));
        if (!lu) {
            continue;
        }
        return NodeSet<S>{n, k, seed, std::move(nodes), cond,
            std::make_shared<const LuDecomposition<S>>(std::move(*lu))};
    }
    throw GenericityFailure("no node set with condition <= " + scalar_traits<double>::to_string(condition_cap)
        + " after " + std::to_string(attempts) + " attempts (n=" + std::to_string(n) + ", k=" + std::to_string(k)
        + ")");
}

/// Psi_V: the values of P at the nodes.
template <Scalar S>
std::vector<S> interp_values(const HomoPoly<S>& p, const NodeSet<S>& v)
{
    std::vector<S> out;
    out.reserve(v.nodes.size());
    for (const auto& node : v.nodes) {
        out.push_back(p(node));
    }
    return out;
}

/// Phi_V = Psi_V^{-1}: the unique homogeneous P with P(v_i) = values[i].
template <Scalar S>
HomoPoly<S> interp_fit(std::span<const S> values, const NodeSet<S>& v)
{
    if (values.size() != v.nodes.size()) {
        throw Error("value count does not match node count");
    }
    std::shared_ptr<const LuDecomposition<S>> lu = v.lu;
    if (!lu) {
        auto f = LuDecomposition<S>::factor(evaluation_matrix<S>(v.nvars, v.degree, v.nodes));
        if (!f) {
            throw SingularSystem();
        }
        lu = std::make_shared<const LuDecomposition<S>>(std::move(*f));
    }
    return HomoPoly<S>(v.nvars, v.degree, lu->solve(values));
}

template <Scalar S>
HomoPoly<S> interp_fit(const std::vector<S>& values, const NodeSet<S>& v)
{
    return interp_fit(std::span<const S>(values), v);
}

/// (1/k!) sum_{s=0}^{k} (-1)^{k-s} C(k,s) P(a + s v), which equals P(v) for every a.
template <Scalar S>
S fd_reconstruct(const HomoPoly<S>& p, std::span<const S> a, std::span<const S> v)
{
    using traits = scalar_traits<S>;
    const int k = p.degree();
    const std::size_t n = a.size();
    S acc(0);
    std::vector<S> point(n);
    for (int s = 0; s <= k; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            point[i] = a[i] + S(s) * v[i];
        }
        const S term = traits::from_rational(binomial(k, s)) * p(point);
        if ((k - s) % 2 == 0) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    return acc / traits::from_rational(factorial(k));
}

/// Euler identity residual sum_i v_i dP/dv_i (v) - k P(v); zero for homogeneous P.
template <Scalar S>
S euler_check(const HomoPoly<S>& p, std::span<const S> v)
{
    S acc(0);
    for (int i = 0; i < p.nvars(); ++i) {
        acc += v[static_cast<std::size_t>(i)] * p.derivative(i)(v);
    }
    return acc - S(p.degree()) * p(v);
}

template <Scalar S>
struct AlibabaReport {
    S premise_max;
    /// Sampled sup of |P| on V / (2e), and whether it stays below L.
    S scaled_max;
    bool scaled_holds;
    /// Sampled sup of |P| on V / k against L 2^k / k! (absent for k = 0).
    std::optional<S> intermediate_max;
    std::optional<S> intermediate_bound;
    bool intermediate_holds = true;
};

/// Checks |P| <= L on V / (2e) given |P| <= L on a + V, for a starlike V
/// described by sample points. Throws PremiseViolated if the hypothesis
/// fails on the samples of a + V.
template <Scalar S>
AlibabaReport<S> alibaba_check(const HomoPoly<S>& p, const std::vector<std::vector<S>>& region,
    std::span<const S> a, const S& bound)
{
    using traits = scalar_traits<S>;
    const std::size_t n = a.size();
    const int k = p.degree();
    S premise(0);
    std::vector<S> point(n);
    for (const auto& w : region) {
        for (std::size_t i = 0; i < n; ++i) {
            point[i] = a[i] + w[i];
        }
        premise = std::max(premise, traits::abs(p(point)));
    }
    if (premise > bound) {
        throw PremiseViolated("|P| exceeds L on the sampled shifted region");
    }
    const S shrink = traits::from_double(1.0 / (2.0 * std::numbers::e));
    auto sup_scaled = [&](const S& factor) {
        S best(0);
        for (const auto& w : region) {
            for (std::size_t i = 0; i < n; ++i) {
                point[i] = factor * w[i];
            }
            best = std::max(best, traits::abs(p(point)));
        }
        return best;
    };
    AlibabaReport<S> report{premise, sup_scaled(shrink), false, std::nullopt, std::nullopt, true};
    report.scaled_holds = report.scaled_max <= bound;
    if (k >= 1) {
        report.intermediate_max = sup_scaled(S(1) / S(k));
        report.intermediate_bound = bound * traits::from_rational(Rational(Integer(1) << k) / factorial(k));
        report.intermediate_holds = *report.intermediate_max <= *report.intermediate_bound;
    }
    return report;
}

} // namespace arcan
