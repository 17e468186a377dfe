#pragma once

#include <algorithm>
#include <cassert>
#include <span>
#include <utility>
#include <vector>

#include <arcan/errors.hpp>
#include <arcan/scalar.hpp>

namespace arcan {

/// Truncated Taylor series c_0 + c_1 t + ... + c_K t^K + O(t^{K+1}).
template <Scalar S>
class Jet {
public:
    explicit Jet(int order) : coeffs_(static_cast<std::size_t>(order) + 1, S(0)) { assert(order >= 0); }

    explicit Jet(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) { assert(!coeffs_.empty()); }

    static Jet constant(const S& c, int order)
    {
        Jet j(order);
        j.coeffs_[0] = c;
        return j;
    }

    /// The identity series t, i.e. the jet of the parameter itself.
    static Jet variable(int order)
    {
        Jet j(order);
        if (order >= 1) {
            j.coeffs_[1] = S(1);
        }
        return j;
    }

    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<S>& coeffs() const noexcept { return coeffs_; }
    const S& operator[](int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }

    /// Evaluates the truncated polynomial at t.
    S evaluate(const S& t) const
    {
        S acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * t + *it;
        }
        return acc;
    }

    Jet truncated(int order) const
    {
        assert(order >= 0 && order <= this->order());
        return Jet(std::vector<S>(coeffs_.begin(), coeffs_.begin() + order + 1));
    }

    friend Jet operator+(const Jet& a, const Jet& b)
    {
        const int k = std::min(a.order(), b.order());
        Jet r(k);
        for (int i = 0; i <= k; ++i) {
            r.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
        }
        return r;
    }

    friend Jet operator-(const Jet& a, const Jet& b)
    {
        const int k = std::min(a.order(), b.order());
        Jet r(k);
        for (int i = 0; i <= k; ++i) {
            r.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
        }
        return r;
    }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        const int k = std::min(a.order(), b.order());
        Jet r(k);
        for (int i = 0; i <= k; ++i) {
            S acc(0);
            for (int j = 0; j <= i; ++j) {
                acc += a.coeffs_[j] * b.coeffs_[i - j];
            }
            r.coeffs_[i] = acc;
        }
        return r;
    }

    friend bool operator==(const Jet&, const Jet&) = default;

private:
    std::vector<S> coeffs_;
};

/// Truncated Laurent series sum_{i=v}^{N} c_i t^i + O(t^{N+1}).
///
/// The valuation v is the exponent of the first stored coefficient and N is
/// the order (highest retained exponent). A nonzero jet is kept normalized so
/// its leading coefficient is nonzero. The zero jet O(t^{N+1}) has no stored
/// coefficients and valuation N + 1.
template <Scalar S>
class LaurentJet {
public:
    using traits = scalar_traits<S>;

    LaurentJet() = default;

    static LaurentJet zero(int order) { return LaurentJet(order + 1, order, {}); }

    static LaurentJet constant(const S& c, int order)
    {
        if (traits::is_zero(c)) {
            return zero(order);
        }
        std::vector<S> cs(static_cast<std::size_t>(order) + 1, S(0));
        cs[0] = c;
        return LaurentJet(0, order, std::move(cs));
    }

    /// Builds c_0 t^valuation + c_1 t^{valuation+1} + ..., normalizing leading zeros away.
    /// The order is valuation + coeffs.size() - 1.
    static LaurentJet from_coeffs(int valuation, std::vector<S> coeffs)
    {
        const int order = valuation + static_cast<int>(coeffs.size()) - 1;
        return normalized(valuation, order, std::move(coeffs));
    }

    static LaurentJet from_jet(const Jet<S>& j) { return from_coeffs(0, j.coeffs()); }

    int valuation() const noexcept { return valuation_; }
    int order() const noexcept { return order_; }

    /// Number of retained orders past the leading term; -1 for the zero jet.
    int relative_precision() const noexcept { return order_ - valuation_; }

    bool is_zero() const noexcept { return coeffs_.empty(); }
    const std::vector<S>& coeffs() const noexcept { return coeffs_; }
    const S& leading() const { return coeffs_.front(); }

    /// Coefficient of t^exponent. Zero below the valuation; throws past the order.
    S coeff(int exponent) const
    {
        if (exponent > order_) {
            throw TruncationError(exponent, order_);
        }
        if (exponent < valuation_) {
            return S(0);
        }
        return coeffs_[static_cast<std::size_t>(exponent - valuation_)];
    }

    /// Evaluates the retained Laurent polynomial at t != 0.
    S evaluate(const S& t) const
    {
        S acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * t + *it;
        }
        if (valuation_ >= 0) {
            for (int i = 0; i < valuation_; ++i) {
                acc *= t;
            }
        } else {
            for (int i = 0; i < -valuation_; ++i) {
                acc /= t;
            }
        }
        return acc;
    }

    friend bool operator==(const LaurentJet&, const LaurentJet&) = default;

    friend LaurentJet operator-(const LaurentJet& a)
    {
        std::vector<S> cs = a.coeffs_;
        for (auto& c : cs) {
            c = -c;
        }
        return LaurentJet(a.valuation_, a.order_, std::move(cs));
    }

    friend LaurentJet operator+(const LaurentJet& a, const LaurentJet& b) { return combine(a, b, false); }
    friend LaurentJet operator-(const LaurentJet& a, const LaurentJet& b) { return combine(a, b, true); }

    friend LaurentJet operator*(const LaurentJet& a, const LaurentJet& b)
    {
        const int v = a.valuation_ + b.valuation_;
        const int r = std::min(a.relative_precision(), b.relative_precision());
        std::vector<S> cs(static_cast<std::size_t>(std::max(r + 1, 0)));
        for (int i = 0; i <= r; ++i) {
            S acc(0);
            S mag(0);
            for (int j = 0; j <= i; ++j) {
                const S term = a.coeffs_[j] * b.coeffs_[i - j];
                if constexpr (!traits::exact) {
                    mag += traits::abs(term);
                }
                acc += term;
            }
            cs[i] = traits::flush(acc, mag);
        }
        return normalized(v, v + r, std::move(cs));
    }

    /// Laurent quotient; throws ZeroDivisor when b has no nonzero retained coefficient.
    friend LaurentJet operator/(const LaurentJet& a, const LaurentJet& b)
    {
        if (b.is_zero()) {
            throw ZeroDivisor();
        }
        const int v = a.valuation_ - b.valuation_;
        const int r = std::min(a.relative_precision(), b.relative_precision());
        std::vector<S> q(static_cast<std::size_t>(std::max(r + 1, 0)));
        const S& b0 = b.coeffs_[0];
        for (int i = 0; i <= r; ++i) {
            S acc = a.coeffs_[i];
            S mag = traits::abs(acc);
            for (int j = 0; j < i; ++j) {
                const S term = q[j] * b.coeffs_[i - j];
                if constexpr (!traits::exact) {
                    mag += traits::abs(term);
                }
                acc -= term;
            }
            q[i] = traits::flush(acc, mag) / b0;
        }
        return normalized(v, v + r, std::move(q));
    }

    LaurentJet truncated(int order) const
    {
        if (order >= order_) {
            return *this;
        }
        if (order < valuation_) {
            return zero(order);
        }
        return LaurentJet(valuation_, order,
            std::vector<S>(coeffs_.begin(), coeffs_.begin() + (order - valuation_ + 1)));
    }

private:
    LaurentJet(int valuation, int order, std::vector<S> coeffs)
        : valuation_(valuation), order_(order), coeffs_(std::move(coeffs))
    {
    }

    static LaurentJet normalized(int valuation, int order, std::vector<S> coeffs)
    {
        std::size_t lead = 0;
        while (lead < coeffs.size() && traits::is_zero(coeffs[lead])) {
            ++lead;
        }
        if (lead == coeffs.size()) {
            return zero(order);
        }
        if (lead > 0) {
            coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(lead));
        }
        return LaurentJet(valuation + static_cast<int>(lead), order, std::move(coeffs));
    }

    static LaurentJet combine(const LaurentJet& a, const LaurentJet& b, bool subtract)
    {
        const int order = std::min(a.order_, b.order_);
        const int v = std::min(a.valuation_, b.valuation_);
        if (order < v) {
            return zero(order);
        }
        std::vector<S> cs(static_cast<std::size_t>(order - v + 1));
        for (int e = v; e <= order; ++e) {
            const S x = a.coeff(e);
            const S y = b.coeff(e);
            S mag(0);
            if constexpr (!traits::exact) {
                mag = traits::abs(x) + traits::abs(y);
            }
            cs[e - v] = traits::flush(subtract ? x - y : x + y, mag);
        }
        return normalized(v, order, std::move(cs));
    }

    int valuation_ = 1;
    int order_ = 0;
    std::vector<S> coeffs_;
};

/// Nonnegative-leading square root of a Laurent jet.
///
/// The zero jet O(t^{N+1}) maps to a zero jet whose window shrinks to the
/// largest order still implied, O(t^{floor((N+1)/2)}).
template <Scalar S>
LaurentJet<S> jet_sqrt(const LaurentJet<S>& a)
{
    using traits = scalar_traits<S>;
    if (a.is_zero()) {
        const int n1 = a.order() + 1;
        const int half = n1 >= 0 ? n1 / 2 : -((-n1 + 1) / 2);
        return LaurentJet<S>::zero(half - 1);
    }
    if (a.valuation() % 2 != 0) {
        throw OddValuation(a.valuation());
    }
    if (a.leading() < 0) {
        throw NegativeLeading();
    }
    const int r = a.relative_precision();
    const auto& c = a.coeffs();
    std::vector<S> out(static_cast<std::size_t>(r) + 1);
    out[0] = *traits::sqrt(c[0]);
    const S two_r0 = out[0] + out[0];
    for (int i = 1; i <= r; ++i) {
        S acc = c[i];
        S mag = traits::abs(acc);
        for (int j = 1; j < i; ++j) {
            const S term = out[j] * out[i - j];
            if constexpr (!traits::exact) {
                mag += traits::abs(term);
            }
            acc -= term;
        }
        out[i] = traits::flush(acc, mag) / two_r0;
    }
    return LaurentJet<S>::from_coeffs(a.valuation() / 2, std::move(out));
}

/// a^e for e >= 1 by binary powering.
template <Scalar S>
LaurentJet<S> jet_pow(const LaurentJet<S>& a, int e)
{
    assert(e >= 1);
    LaurentJet<S> result;
    LaurentJet<S> base = a;
    bool have = false;
    while (e > 0) {
        if (e & 1) {
            result = have ? result * base : base;
            have = true;
        }
        e >>= 1;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

/// Taylor coefficient of t^k, i.e. (1/k!) times the k-th derivative at t = 0.
template <Scalar S>
S jet_derive_coeff(const LaurentJet<S>& a, int k)
{
    if (!a.is_zero() && a.valuation() < 0) {
        throw PoleAtOrigin(a.valuation());
    }
    return a.coeff(k);
}

template <Scalar S>
LaurentJet<S> jet_add(const LaurentJet<S>& a, const LaurentJet<S>& b)
{
    return a + b;
}

template <Scalar S>
LaurentJet<S> jet_sub(const LaurentJet<S>& a, const LaurentJet<S>& b)
{
    return a - b;
}

template <Scalar S>
LaurentJet<S> jet_mul(const LaurentJet<S>& a, const LaurentJet<S>& b)
{
    return a * b;
}

template <Scalar S>
LaurentJet<S> jet_div(const LaurentJet<S>& a, const LaurentJet<S>& b)
{
    return a / b;
}

} // namespace arcan
