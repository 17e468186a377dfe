#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <arcan/errors.hpp>
#include <arcan/expr.hpp>
#include <arcan/jet.hpp>
#include <arcan/parse.hpp>

namespace arcan {

/// Side information collected during pointwise evaluation.
struct EvalTrace {
    /// A guard replaced its body by the default because of a division by zero.
    bool guard_triggered = false;
};

namespace detail {

template <Scalar S>
S eval_point_node(const NodePtr& n, std::span<const S> x, EvalTrace* trace)
{
    using traits = scalar_traits<S>;
    switch (n->op) {
    case Op::Const:
        return traits::from_rational(n->value);
    case Op::Var:
        return x[static_cast<std::size_t>(n->index)];
    case Op::Add:
        return eval_point_node(n->lhs, x, trace) + eval_point_node(n->rhs, x, trace);
    case Op::Sub:
        return eval_point_node(n->lhs, x, trace) - eval_point_node(n->rhs, x, trace);
    case Op::Mul:
        return eval_point_node(n->lhs, x, trace) * eval_point_node(n->rhs, x, trace);
    case Op::Div: {
        const S num = eval_point_node(n->lhs, x, trace);
        const S den = eval_point_node(n->rhs, x, trace);
        if (traits::is_zero(den)) {
            throw DivisionByZero();
        }
        return num / den;
    }
    case Op::Neg:
        return -eval_point_node(n->lhs, x, trace);
    case Op::Pow: {
        const S base = eval_point_node(n->lhs, x, trace);
        S acc(1);
        for (int i = 0; i < n->index; ++i) {
            acc *= base;
        }
        return acc;
    }
    case Op::Sqrt: {
        const S arg = eval_point_node(n->lhs, x, trace);
        std::optional<S> r;
        try {
            r = traits::sqrt(arg);
        } catch (const IrrationalRoot& e) {
            throw DomainError(e.what());
        }
        if (!r) {
            throw DomainError("square root of a negative number");
        }
        return *r;
    }
    case Op::Guard:
        try {
            return eval_point_node(n->lhs, x, trace);
        } catch (const DivisionByZero&) {
            if (trace) {
                trace->guard_triggered = true;
            }
            return traits::from_rational(n->value);
        }
    }
    throw Error("corrupt expression node");
}

} // namespace detail

/// Value of e at x. Guards return their default exactly when a division by
/// zero occurs inside their body; otherwise division by zero and negative
/// radicands raise DomainError.
template <Scalar S>
S eval_point(const Expr& e, std::span<const S> x, EvalTrace* trace = nullptr)
{
    if (static_cast<int>(x.size()) != e.nvars()) {
        throw Error("point has dimension " + std::to_string(x.size()) + ", expression expects "
            + std::to_string(e.nvars()));
    }
    return detail::eval_point_node<S>(e.root(), x, trace);
}

template <Scalar S>
S eval_point(const Expr& e, const std::vector<S>& x, EvalTrace* trace = nullptr)
{
    return eval_point<S>(e, std::span<const S>(x), trace);
}

/// A polynomial arc t -> (p_1(t), ..., p_n(t)) examined as a germ at t = 0.
template <Scalar S>
class ArcSpec {
public:
    explicit ArcSpec(std::vector<std::vector<S>> components) : components_(std::move(components))
    {
        for (auto& c : components_) {
            if (c.empty()) {
                c.push_back(S(0));
            }
        }
    }

    /// The straight arc x + t v.
    static ArcSpec straight(std::span<const S> x, std::span<const S> v)
    {
        std::vector<std::vector<S>> cs;
        for (std::size_t i = 0; i < x.size(); ++i) {
            cs.push_back({x[i], v[i]});
        }
        return ArcSpec(std::move(cs));
    }

    int dimension() const noexcept { return static_cast<int>(components_.size()); }
    const std::vector<std::vector<S>>& components() const noexcept { return components_; }

    int degree() const
    {
        int d = 0;
        for (const auto& c : components_) {
            d = std::max(d, static_cast<int>(c.size()) - 1);
        }
        return d;
    }

    std::vector<S> at(const S& t) const
    {
        std::vector<S> p;
        p.reserve(components_.size());
        for (const auto& c : components_) {
            S acc(0);
            for (auto it = c.rbegin(); it != c.rend(); ++it) {
                acc = acc * t + *it;
            }
            p.push_back(acc);
        }
        return p;
    }

    std::vector<S> basepoint() const { return at(S(0)); }

    /// Jet of component i truncated at `order`.
    LaurentJet<S> component_jet(int i, int order) const
    {
        const auto& c = components_[static_cast<std::size_t>(i)];
        std::vector<S> cs(static_cast<std::size_t>(order) + 1, S(0));
        for (std::size_t k = 0; k < c.size() && static_cast<int>(k) <= order; ++k) {
            cs[k] = c[k];
        }
        return LaurentJet<S>::from_coeffs(0, std::move(cs));
    }

private:
    std::vector<std::vector<S>> components_;
};

namespace detail {

inline std::vector<Rational> poly_add(const std::vector<Rational>& a, const std::vector<Rational>& b, int sign)
{
    std::vector<Rational> r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = (i < a.size() ? a[i] : Rational(0)) + (i < b.size() ? Rational(sign) * b[i] : Rational(0));
    }
    return r;
}

inline std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b)
{
    std::vector<Rational> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

/// Coefficients of a univariate polynomial tree; throws for Div, Sqrt and Guard.
inline std::vector<Rational> univariate_coeffs(const NodePtr& n)
{
    switch (n->op) {
    case Op::Const:
        return {n->value};
    case Op::Var:
        return {Rational(0), Rational(1)};
    case Op::Add:
        return poly_add(univariate_coeffs(n->lhs), univariate_coeffs(n->rhs), 1);
    case Op::Sub:
        return poly_add(univariate_coeffs(n->lhs), univariate_coeffs(n->rhs), -1);
    case Op::Mul:
        return poly_mul(univariate_coeffs(n->lhs), univariate_coeffs(n->rhs));
    case Op::Neg:
        return poly_add({Rational(0)}, univariate_coeffs(n->lhs), -1);
    case Op::Pow: {
        std::vector<Rational> acc{Rational(1)};
        const auto base = univariate_coeffs(n->lhs);
        for (int i = 0; i < n->index; ++i) {
            acc = poly_mul(acc, base);
        }
        return acc;
    }
    default:
        throw Error("arc components must be polynomials in t");
    }
}

} // namespace detail

/// Parses "p1(t), p2(t), ..." into an arc with polynomial components.
template <Scalar S>
ArcSpec<S> parse_arc(std::string_view text)
{
    std::vector<std::vector<S>> comps;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size() && text[i] == '(') {
            ++depth;
        } else if (i < text.size() && text[i] == ')') {
            --depth;
        }
        if (i == text.size() || (text[i] == ',' && depth == 0)) {
            const NodePtr n = parse_univariate(text.substr(start, i - start), "t");
            std::vector<S> cs;
            for (const auto& q : detail::univariate_coeffs(n)) {
                cs.push_back(scalar_traits<S>::from_rational(q));
            }
            comps.push_back(std::move(cs));
            start = i + 1;
        }
    }
    return ArcSpec<S>(std::move(comps));
}

namespace detail {

template <Scalar S>
LaurentJet<S> eval_arc_node(const NodePtr& n, const std::vector<LaurentJet<S>>& vars, int order)
{
    using traits = scalar_traits<S>;
    switch (n->op) {
    case Op::Const:
        return LaurentJet<S>::constant(traits::from_rational(n->value), order);
    case Op::Var:
        return vars[static_cast<std::size_t>(n->index)];
    case Op::Add:
        return eval_arc_node(n->lhs, vars, order) + eval_arc_node(n->rhs, vars, order);
    case Op::Sub:
        return eval_arc_node(n->lhs, vars, order) - eval_arc_node(n->rhs, vars, order);
    case Op::Mul:
        return eval_arc_node(n->lhs, vars, order) * eval_arc_node(n->rhs, vars, order);
    case Op::Div:
        return eval_arc_node(n->lhs, vars, order) / eval_arc_node(n->rhs, vars, order);
    case Op::Neg:
        return -eval_arc_node(n->lhs, vars, order);
    case Op::Pow:
        if (n->index == 0) {
            return LaurentJet<S>::constant(S(1), order);
        }
        return jet_pow(eval_arc_node(n->lhs, vars, order), n->index);
    case Op::Sqrt:
        return jet_sqrt(eval_arc_node(n->lhs, vars, order));
    case Op::Guard:
        // Series semantics: the default only matters where the body's
        // denominator vanishes identically along the whole arc germ.
        try {
            return eval_arc_node(n->lhs, vars, order);
        } catch (const ZeroDivisor&) {
            return LaurentJet<S>::constant(traits::from_rational(n->value), order);
        }
    }
    throw Error("corrupt expression node");
}

} // namespace detail

/// Laurent jet of t -> e(gamma(t)) at t = 0, truncated at `order`.
///
/// Jet-level failures (odd or negative radicands, denominators vanishing
/// along the arc outside any guard) are reported as ArcDomainError.
template <Scalar S>
LaurentJet<S> eval_arc(const Expr& e, const ArcSpec<S>& arc, int order)
{
    if (arc.dimension() != e.nvars()) {
        throw Error("arc has dimension " + std::to_string(arc.dimension()) + ", expression expects "
            + std::to_string(e.nvars()));
    }
    std::vector<LaurentJet<S>> vars;
    vars.reserve(static_cast<std::size_t>(arc.dimension()));
    for (int i = 0; i < arc.dimension(); ++i) {
        vars.push_back(arc.component_jet(i, order));
    }
    try {
        return detail::eval_arc_node<S>(e.root(), vars, order);
    } catch (const ZeroDivisor& err) {
        throw ArcDomainError(err.what());
    } catch (const OddValuation& err) {
        throw ArcDomainError(err.what());
    } catch (const NegativeLeading& err) {
        throw ArcDomainError(err.what());
    } catch (const IrrationalRoot& err) {
        throw ArcDomainError(err.what());
    }
}

enum class ArcKind { Analytic, RemovableMismatch, Pole };

inline const char* to_string(ArcKind k)
{
    switch (k) {
    case ArcKind::Analytic:
        return "Analytic";
    case ArcKind::RemovableMismatch:
        return "RemovableMismatch";
    case ArcKind::Pole:
        return "Pole";
    }
    return "?";
}

template <Scalar S>
struct ArcReport {
    ArcKind kind;
    LaurentJet<S> laurent;
    /// Value of e at gamma(0); empty when pointwise evaluation fails there.
    std::optional<S> point_value;
    /// |point value - constant term| when both exist.
    std::optional<S> mismatch;
};

/// Classifies the germ of e along gamma: a pole, a removable discontinuity
/// (the series' constant term differs from the assigned value), or analytic.
template <Scalar S>
ArcReport<S> arc_check(const Expr& e, const ArcSpec<S>& arc, int order, double tol)
{
    ArcReport<S> report{ArcKind::Analytic, eval_arc(e, arc, order), std::nullopt, std::nullopt};
    try {
        report.point_value = eval_point<S>(e, arc.basepoint());
    } catch (const DomainError&) {
    }
    if (!report.laurent.is_zero() && report.laurent.valuation() < 0) {
        report.kind = ArcKind::Pole;
        return report;
    }
    if (report.point_value) {
        const S c0 = report.laurent.is_zero() ? S(0) : report.laurent.coeff(0);
        report.mismatch = scalar_abs(*report.point_value - c0);
        if (to_double(*report.mismatch) > tol) {
            report.kind = ArcKind::RemovableMismatch;
        }
    }
    return report;
}

} // namespace arcan
