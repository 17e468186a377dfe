#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <arcan/errors.hpp>
#include <arcan/scalar.hpp>

namespace arcan {

/// Dense row-major square matrix.
template <Scalar S>
class Matrix {
public:
    explicit Matrix(std::size_t n) : n_(n), data_(n * n, S(0)) {}

    std::size_t size() const noexcept { return n_; }
    S& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<S> data_;
};

/// LU factorization with row pivoting: largest magnitude for floats, first
/// nonzero entry for exact rationals.
template <Scalar S>
class LuDecomposition {
public:
    /// Returns nullopt when the matrix is singular (exactly, or to working precision for floats).
    static std::optional<LuDecomposition> factor(Matrix<S> a)
    {
        using traits = scalar_traits<S>;
        const std::size_t n = a.size();
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) {
            perm[i] = i;
        }
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = n;
            if constexpr (traits::exact) {
                for (std::size_t r = col; r < n; ++r) {
                    if (!traits::is_zero(a(r, col))) {
                        pivot = r;
                        break;
                    }
                }
            } else {
                double best = 0.0;
                for (std::size_t r = col; r < n; ++r) {
                    const double m = std::fabs(a(r, col));
                    if (m > best) {
                        best = m;
                        pivot = r;
                    }
                }
            }
            if (pivot == n) {
                return std::nullopt;
            }
            if (pivot != col) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(a(pivot, j), a(col, j));
                }
                std::swap(perm[pivot], perm[col]);
            }
            const S inv = S(1) / a(col, col);
            for (std::size_t r = col + 1; r < n; ++r) {
                if (traits::is_zero(a(r, col))) {
                    continue;
                }
                const S f = a(r, col) * inv;
                a(r, col) = f;
                for (std::size_t j = col + 1; j < n; ++j) {
                    a(r, j) -= f * a(col, j);
                }
            }
        }
        return LuDecomposition(std::move(a), std::move(perm));
    }

    std::size_t size() const noexcept { return lu_.size(); }

    std::vector<S> solve(std::span<const S> b) const
    {
        const std::size_t n = lu_.size();
        std::vector<S> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            S acc = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) {
                acc -= lu_(i, j) * y[j];
            }
            y[i] = acc;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            S acc = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) {
                acc -= lu_(ii, j) * y[j];
            }
            y[ii] = acc / lu_(ii, ii);
        }
        return y;
    }

    Matrix<S> inverse() const
    {
        const std::size_t n = lu_.size();
        Matrix<S> inv(n);
        std::vector<S> e(n, S(0));
        for (std::size_t j = 0; j < n; ++j) {
            e[j] = S(1);
            const auto col = solve(e);
            for (std::size_t i = 0; i < n; ++i) {
                inv(i, j) = col[i];
            }
            e[j] = S(0);
        }
        return inv;
    }

private:
    LuDecomposition(Matrix<S> lu, std::vector<std::size_t> perm) : lu_(std::move(lu)), perm_(std::move(perm)) {}

    Matrix<S> lu_;
    std::vector<std::size_t> perm_;
};

inline double norm_1(const Matrix<double>& a)
{
    double best = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            s += std::fabs(a(i, j));
        }
        best = std::max(best, s);
    }
    return best;
}

/// 1-norm condition number; infinity for singular matrices.
inline double condition_1(const Matrix<double>& a)
{
    const auto lu = LuDecomposition<double>::factor(a);
    if (!lu) {
        return std::numeric_limits<double>::infinity();
    }
    const double c = norm_1(a) * norm_1(lu->inverse());
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

} // namespace arcan
