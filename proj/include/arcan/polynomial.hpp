#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include <arcan/errors.hpp>
#include <arcan/expr.hpp>
#include <arcan/scalar.hpp>

namespace arcan {

/// Sparse multivariate polynomial with rational coefficients. Terms are keyed
/// by exponent vectors of length nvars; zero coefficients are never stored.
class Polynomial {
public:
    using Exponents = std::vector<int>;

    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rational& c)
    {
        Polynomial p(nvars);
        p.add_term(Exponents(static_cast<std::size_t>(nvars), 0), c);
        return p;
    }

    static Polynomial variable(int nvars, int i)
    {
        Polynomial p(nvars);
        Exponents e(static_cast<std::size_t>(nvars), 0);
        e[static_cast<std::size_t>(i)] = 1;
        p.add_term(e, Rational(1));
        return p;
    }

    int nvars() const noexcept { return nvars_; }
    const std::map<Exponents, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    void add_term(const Exponents& e, const Rational& c)
    {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        Polynomial r = a;
        for (const auto& [e, c] : b.terms_) {
            r.add_term(e, c);
        }
        return r;
    }

    friend Polynomial operator-(const Polynomial& a)
    {
        Polynomial r(a.nvars_);
        for (const auto& [e, c] : a.terms_) {
            r.terms_.emplace(e, -c);
        }
        return r;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        Polynomial r(a.nvars_);
        Exponents e(static_cast<std::size_t>(a.nvars_));
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) {
                    e[i] = ea[i] + eb[i];
                }
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Polynomial pow(int k) const
    {
        Polynomial r = constant(nvars_, Rational(1));
        for (int i = 0; i < k; ++i) {
            r = r * *this;
        }
        return r;
    }

    /// Smallest exponent of variable i over all terms; empty for the zero polynomial.
    std::optional<int> valuation_in(int i) const
    {
        std::optional<int> v;
        for (const auto& [e, c] : terms_) {
            const int ei = e[static_cast<std::size_t>(i)];
            if (!v || ei < *v) {
                v = ei;
            }
        }
        return v;
    }

    /// Divides by x_i^m; every term must contain x_i to at least that power.
    Polynomial divide_by_power(int i, int m) const
    {
        Polynomial r(nvars_);
        for (const auto& [key, c] : terms_) {
            Exponents e = key;
            e[static_cast<std::size_t>(i)] -= m;
            if (e[static_cast<std::size_t>(i)] < 0) {
                throw Error("monomial division leaves a negative exponent");
            }
            r.terms_.emplace(std::move(e), c);
        }
        return r;
    }

    /// Sets the listed variables to zero.
    Polynomial restrict_to_zero(const std::vector<int>& vars) const
    {
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_) {
            bool keep = true;
            for (int v : vars) {
                keep = keep && e[static_cast<std::size_t>(v)] == 0;
            }
            if (keep) {
                r.terms_.emplace(e, c);
            }
        }
        return r;
    }

    template <Scalar S>
    S evaluate(const std::vector<S>& x) const
    {
        using traits = scalar_traits<S>;
        S acc(0);
        for (const auto& [e, c] : terms_) {
            S term = traits::from_rational(c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                for (int j = 0; j < e[i]; ++j) {
                    term *= x[i];
                }
            }
            acc += term;
        }
        return acc;
    }

    /// Expression tree of the expanded polynomial, highest total degree first.
    NodePtr to_node() const
    {
        if (terms_.empty()) {
            return node::constant(Rational(0));
        }
        std::vector<std::pair<Exponents, Rational>> ordered(terms_.begin(), terms_.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            const int da = total_degree(a.first), db = total_degree(b.first);
            if (da != db) {
                return da > db;
            }
            return a.first > b.first;
        });
        NodePtr acc;
        for (const auto& [e, c] : ordered) {
            const bool negative = c < 0;
            const Rational mag = negative ? Rational(-c) : c;
            NodePtr mono;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) {
                    continue;
                }
                NodePtr f = node::var(static_cast<int>(i));
                if (e[i] > 1) {
                    f = node::pow(f, e[i]);
                }
                mono = mono ? node::mul(mono, f) : f;
            }
            NodePtr term;
            if (!mono) {
                term = node::constant(mag);
            } else if (mag == 1) {
                term = mono;
            } else {
                term = node::mul(node::constant(mag), mono);
            }
            if (!acc) {
                acc = negative ? node::neg(term) : term;
            } else {
                acc = negative ? node::sub(acc, term) : node::add(acc, term);
            }
        }
        return acc;
    }

private:
    static int total_degree(const Exponents& e)
    {
        int d = 0;
        for (int x : e) {
            d += x;
        }
        return d;
    }

    int nvars_;
    std::map<Exponents, Rational> terms_;
};

/// A quotient of polynomials, kept unreduced apart from trivial denominators.
struct Fraction {
    Polynomial num;
    Polynomial den;

    bool has_denominator() const { return !(den.is_constant() && den == Polynomial::constant(den.nvars(), 1)); }

    friend Fraction operator+(const Fraction& a, const Fraction& b)
    {
        if (a.den == b.den) {
            return {a.num + b.num, a.den};
        }
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }

    friend Fraction operator-(const Fraction& a) { return {-a.num, a.den}; }
    friend Fraction operator-(const Fraction& a, const Fraction& b) { return a + (-b); }
    friend Fraction operator*(const Fraction& a, const Fraction& b) { return {a.num * b.num, a.den * b.den}; }
    friend Fraction operator/(const Fraction& a, const Fraction& b) { return {a.num * b.den, a.den * b.num}; }

    Fraction pow(int k) const { return {num.pow(k), den.pow(k)}; }
};

} // namespace arcan
