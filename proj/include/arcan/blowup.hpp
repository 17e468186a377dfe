#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <arcan/classify.hpp>
#include <arcan/errors.hpp>
#include <arcan/eval.hpp>
#include <arcan/expr.hpp>
#include <arcan/polynomial.hpp>

namespace arcan {

/// Affine chart of the blow-up of the coordinate subspace T = {x_i = 0, i in center}.
///
/// Chart coordinates reuse the ambient slots: slot `axis` holds s, slot i for
/// i in center \ {axis} holds y_i, and the other slots are unchanged. The
/// chart map is x_axis = s, x_i = s y_i (i in center \ {axis}). Indices are
/// 0-based here; the CLI and JSON use 1-based indices.
struct BlowupChart {
    int nvars = 0;
    std::vector<int> center;
    int axis = 0;

    bool in_center(int i) const { return std::find(center.begin(), center.end(), i) != center.end(); }

    /// Ambient point of chart coordinates p.
    template <Scalar S>
    std::vector<S> to_ambient(const std::vector<S>& p) const
    {
        std::vector<S> x = p;
        for (int i : center) {
            if (i != axis) {
                x[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(axis)] * p[static_cast<std::size_t>(i)];
            }
        }
        return x;
    }

    /// Chart coordinates of an ambient point with x_axis != 0.
    template <Scalar S>
    std::vector<S> from_ambient(const std::vector<S>& x) const
    {
        const S s = x[static_cast<std::size_t>(axis)];
        if (scalar_traits<S>::is_zero(s)) {
            throw Error("point lies outside the chart (chart axis coordinate is zero)");
        }
        std::vector<S> p = x;
        for (int i : center) {
            if (i != axis) {
                p[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] / s;
            }
        }
        return p;
    }
};

/// Chart from 1-based center indices and axis, as written in chart descriptions.
inline BlowupChart make_chart(int n, const std::vector<int>& center_1based, int axis_1based)
{
    std::vector<int> center;
    for (int i : center_1based) {
        if (i < 1 || i > n) {
            throw BadCenter("center index " + std::to_string(i) + " outside 1.." + std::to_string(n));
        }
        center.push_back(i - 1);
    }
    std::sort(center.begin(), center.end());
    center.erase(std::unique(center.begin(), center.end()), center.end());
    if (center.size() < 2) {
        throw BadCenter("center must have at least two coordinates (codimension >= 2)");
    }
    if (std::find(center.begin(), center.end(), axis_1based - 1) == center.end()) {
        throw BadCenter("chart axis " + std::to_string(axis_1based) + " is not in the center");
    }
    return BlowupChart{n, std::move(center), axis_1based - 1};
}

struct PullbackResult {
    Expr expr;
    /// Total power of s removed from numerators and denominators.
    int cancelled_power = 0;
    /// Some division involves a square root, so it was substituted without simplification.
    bool non_rational_cancellation = false;
    /// Some simplified denominator vanishes identically on the fiber over the
    /// origin of T (s = 0 and every coordinate outside the center = 0).
    bool fiber_denominator_vanishes = false;
};

namespace detail {

class Pullback {
public:
    explicit Pullback(const BlowupChart& chart) : chart_(chart) {}

    NodePtr run(const NodePtr& root) { return emit(convert(root)); }

    int cancelled = 0;
    bool non_rational = false;
    bool fiber_vanishes = false;

private:
    struct Piece {
        NodePtr node;
        std::optional<Fraction> frac;
    };

    Polynomial substitute_var(int i) const
    {
        const int n = chart_.nvars;
        if (i != chart_.axis && chart_.in_center(i)) {
            return Polynomial::variable(n, chart_.axis) * Polynomial::variable(n, i);
        }
        return Polynomial::variable(n, i);
    }

    Fraction whole(const Polynomial& p) const { return {p, Polynomial::constant(chart_.nvars, 1)}; }

    Piece convert(const NodePtr& n)
    {
        switch (n->op) {
        case Op::Const:
            return {nullptr, whole(Polynomial::constant(chart_.nvars, n->value))};
        case Op::Var:
            return {nullptr, whole(substitute_var(n->index))};
        case Op::Neg: {
            auto a = convert(n->lhs);
            if (a.frac) {
                return {nullptr, -*a.frac};
            }
            return {node::neg(a.node), std::nullopt};
        }
        case Op::Pow: {
            auto a = convert(n->lhs);
            if (a.frac) {
                return {nullptr, a.frac->pow(n->index)};
            }
            return {node::pow(a.node, n->index), std::nullopt};
        }
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            auto a = convert(n->lhs);
            auto b = convert(n->rhs);
            if (a.frac && b.frac) {
                switch (n->op) {
                case Op::Add:
                    return {nullptr, *a.frac + *b.frac};
                case Op::Sub:
                    return {nullptr, *a.frac - *b.frac};
                case Op::Mul:
                    return {nullptr, *a.frac * *b.frac};
                default:
                    return {nullptr, *a.frac / *b.frac};
                }
            }
            if (n->op == Op::Div) {
                non_rational = true;
            }
            return {node::binary(n->op, emit(std::move(a)), emit(std::move(b))), std::nullopt};
        }
        case Op::Sqrt:
            return {node::sqrt(emit(convert(n->lhs))), std::nullopt};
        case Op::Guard:
            return {node::guard(emit(convert(n->lhs)), n->value), std::nullopt};
        }
        throw Error("corrupt expression node");
    }

    NodePtr emit(Piece p)
    {
        if (!p.frac) {
            return p.node;
        }
        Fraction f = std::move(*p.frac);
        if (!f.has_denominator()) {
            return f.num.to_node();
        }
        if (f.den.is_constant() && !f.den.is_zero()) {
            const Rational c = f.den.terms().begin()->second;
            return (f.num * Polynomial::constant(chart_.nvars, Rational(1) / c)).to_node();
        }
        const int s = chart_.axis;
        const auto vd = f.den.valuation_in(s);
        const auto vn = f.num.valuation_in(s);
        if (vd && *vd > 0) {
            const int m = vn ? std::min(*vn, *vd) : *vd;
            if (m > 0) {
                f.num = f.num.divide_by_power(s, m);
                f.den = f.den.divide_by_power(s, m);
                cancelled += m;
            }
        }
        std::vector<int> zero_on_fiber{s};
        for (int i = 0; i < chart_.nvars; ++i) {
            if (!chart_.in_center(i)) {
                zero_on_fiber.push_back(i);
            }
        }
        if (f.den.restrict_to_zero(zero_on_fiber).is_zero()) {
            fiber_vanishes = true;
        }
        if (f.den.is_constant() && !f.den.is_zero()) {
            const Rational c = f.den.terms().begin()->second;
            return (f.num * Polynomial::constant(chart_.nvars, Rational(1) / c)).to_node();
        }
        return node::div(f.num.to_node(), f.den.to_node());
    }

    const BlowupChart& chart_;
};

} // namespace detail

/// f composed with the chart map. Maximal rational subtrees are expanded to a
/// single fraction and the common power of s is cancelled; guards keep their
/// defaults and square roots are substituted as they are.
inline PullbackResult pullback(const Expr& e, const BlowupChart& chart)
{
    if (e.nvars() != chart.nvars) {
        throw Error("chart dimension " + std::to_string(chart.nvars) + " does not match expression dimension "
            + std::to_string(e.nvars()));
    }
    detail::Pullback pb(chart);
    NodePtr root = pb.run(e.root());
    return PullbackResult{Expr(std::move(root), e.nvars()), pb.cancelled, pb.non_rational, pb.fiber_vanishes};
}

/// Pulls back through a sequence of charts, each written in the coordinates of the previous one.
inline PullbackResult pullback(const Expr& e, const std::vector<BlowupChart>& charts)
{
    PullbackResult acc{e, 0, false, false};
    for (const auto& c : charts) {
        auto next = pullback(acc.expr, c);
        next.cancelled_power += acc.cancelled_power;
        next.non_rational_cancellation = next.non_rational_cancellation || acc.non_rational_cancellation;
        next.fiber_denominator_vanishes = next.fiber_denominator_vanishes || acc.fiber_denominator_vanishes;
        acc = std::move(next);
    }
    return acc;
}

/// Classifies the pullback at points of the exceptional divisor {s = 0}.
inline std::vector<Verdict<double>> classify_pullback(const Expr& e, const BlowupChart& chart,
    const std::vector<std::vector<double>>& divisor_points, const ClassifyConfig& cfg)
{
    const auto pb = pullback(e, chart);
    std::vector<Verdict<double>> out;
    for (std::size_t i = 0; i < divisor_points.size(); ++i) {
        const auto& p = divisor_points[i];
        if (static_cast<int>(p.size()) != chart.nvars || p[static_cast<std::size_t>(chart.axis)] != 0.0) {
            throw Error("divisor point must have s = 0 in the chart axis slot");
        }
        ClassifyConfig local = cfg;
        local.seed = mix_seed(cfg.seed, i);
        out.push_back(classify_point<double>(pb.expr, p, local));
    }
    return out;
}

struct FiberLiftOptions {
    /// Samples of T near the base point used to confirm that it is a limit of analytic points.
    int center_samples = 8;
    /// Points sampled on the fiber over the base point.
    int fiber_points = 16;
    /// Fiber coordinates y_i are drawn from [-y_range, y_range].
    double y_range = 2.0;
};

struct FiberLiftReport {
    Status base_status = Status::Inconclusive;
    std::vector<std::vector<double>> center_points;
    std::vector<Status> center_statuses;
    std::vector<std::vector<double>> fiber_points;
    std::vector<Verdict<double>> fiber_verdicts;
    int nonanalytic = 0;
    int inconclusive = 0;
    int analytic = 0;
    /// Every fiber point is NonAnalytic or Inconclusive.
    bool consistent = false;
};

/// If f is non-analytic at a point of T that is a limit of analytic points of
/// T, its pullback must be non-analytic along the whole fiber over that
/// point. Checks the premises by classification, then samples the fiber.
/// Throws PremiseViolated when the base point is not NonAnalytic or no
/// sampled point of T near it is analytic.
inline FiberLiftReport fiber_lift_check(const Expr& e, const BlowupChart& chart, const std::vector<double>& base,
    const ClassifyConfig& cfg, const FiberLiftOptions& opt = {})
{
    const int n = chart.nvars;
    if (static_cast<int>(base.size()) != n) {
        throw Error("base point dimension does not match the chart");
    }
    for (int i : chart.center) {
        if (base[static_cast<std::size_t>(i)] != 0.0) {
            throw PremiseViolated("base point is not on the center");
        }
    }
    FiberLiftReport r;
    r.base_status = classify_point<double>(e, base, cfg).status;
    if (r.base_status != Status::NonAnalytic) {
        throw PremiseViolated(std::string("base point classifies ") + to_string(r.base_status));
    }

    std::vector<int> free_coords;
    for (int i = 0; i < n; ++i) {
        if (!chart.in_center(i)) {
            free_coords.push_back(i);
        }
    }
    bool analytic_nearby = false;
    if (!free_coords.empty()) {
        const auto dirs = sample_directions(static_cast<int>(free_coords.size()),
            static_cast<std::size_t>(opt.center_samples), mix_seed(cfg.seed, 0xce17e5));
        for (int j = 0; j < opt.center_samples; ++j) {
            const double radius = std::ldexp(1.0, -(j + 2));
            std::vector<double> p = base;
            for (std::size_t c = 0; c < free_coords.size(); ++c) {
                p[static_cast<std::size_t>(free_coords[c])] += radius * dirs[static_cast<std::size_t>(j)][c];
            }
            ClassifyConfig local = cfg;
            local.seed = mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(j));
            const auto st = classify_point<double>(e, p, local).status;
            r.center_points.push_back(std::move(p));
            r.center_statuses.push_back(st);
            analytic_nearby = analytic_nearby || st == Status::AnalyticUpTo;
        }
    }
    if (!analytic_nearby) {
        throw PremiseViolated("no sampled point of the center near the base point is analytic");
    }

    std::mt19937_64 rng(mix_seed(cfg.seed, 0xf1be7));
    auto ys = [&] { return opt.y_range * (std::ldexp(static_cast<double>(rng() >> 11), -52) - 1.0); };
    for (int j = 0; j < opt.fiber_points; ++j) {
        std::vector<double> p = base;
        p[static_cast<std::size_t>(chart.axis)] = 0.0;
        for (int i : chart.center) {
            if (i != chart.axis) {
                p[static_cast<std::size_t>(i)] = ys();
            }
        }
        r.fiber_points.push_back(std::move(p));
    }
    r.fiber_verdicts = classify_pullback(e, chart, r.fiber_points, cfg);
    for (const auto& v : r.fiber_verdicts) {
        r.nonanalytic += v.status == Status::NonAnalytic;
        r.inconclusive += v.status == Status::Inconclusive;
        r.analytic += v.status == Status::AnalyticUpTo;
    }
    r.consistent = r.analytic == 0;
    return r;
}

} // namespace arcan
