#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <arcan/errors.hpp>
#include <arcan/eval.hpp>
#include <arcan/expr.hpp>
#include <arcan/homog.hpp>
#include <arcan/jet.hpp>
#include <arcan/parse.hpp>

namespace arcan {

struct ClassifyConfig {
    int k_max = 8;
    double tol = 1e-7;
    /// Requested jet order; raised to at least 2 k_max + 4.
    int jet_order = 0;
    double condition_cap = 1e6;
    std::uint64_t seed = 0;
    int node_attempts = 64;

    int effective_order() const { return std::max(jet_order, 2 * k_max + 4); }
};

enum class Status { AnalyticUpTo, NonAnalytic, Inconclusive };

inline const char* to_string(Status s)
{
    switch (s) {
    case Status::AnalyticUpTo:
        return "AnalyticUpTo";
    case Status::NonAnalytic:
        return "NonAnalytic";
    case Status::Inconclusive:
        return "Inconclusive";
    }
    return "?";
}

/// Outcome of the polynomiality test of v -> h_k(x, v) at one order.
template <Scalar S>
struct PolyTestResult {
    int k = 0;
    std::uint64_t node_seed = 0;
    bool polynomial = false;
    /// Some direction has f(x + t v) with a pole at t = 0.
    bool pole = false;
    std::optional<HomoPoly<S>> fitted;
    /// |h_k(x, w) - P(w)| at the validation directions.
    std::vector<S> residuals;
    /// 1 + max |h_k| over the interpolation nodes.
    S scale{1};
    /// max residual / scale; empty when a pole was found.
    std::optional<S> normalized;
};

template <Scalar S>
struct Verdict {
    std::vector<S> point;
    Status status = Status::Inconclusive;
    int k_max = 0;
    /// First failing order (NonAnalytic only).
    std::optional<int> k_star;
    /// Normalized residual at k_star; empty for poles.
    std::optional<S> residual;
    bool pole = false;
    /// Pointwise evaluation at the point hit a guard; series semantics were used.
    bool guard_triggered = false;
    std::string reason;
    std::vector<PolyTestResult<S>> per_order;
};

template <Scalar S>
struct GateauxValue {
    S value;
    bool guard_triggered = false;
};

namespace detail {

/// Jet of t -> f(x + t v) retaining at least order `need`.
template <Scalar S>
LaurentJet<S> directional_jet(const Expr& e, std::span<const S> x, std::span<const S> v, int need, int order)
{
    const auto arc = ArcSpec<S>::straight(x, v);
    for (int attempt = 0; attempt < 4; ++attempt) {
        auto jet = eval_arc(e, arc, order);
        if (jet.order() >= need || (!jet.is_zero() && jet.valuation() < 0)) {
            return jet;
        }
        order *= 2;
    }
    auto jet = eval_arc(e, arc, order);
    if (jet.order() < need) {
        throw TruncationError(need, jet.order());
    }
    return jet;
}

template <Scalar S>
std::vector<S> to_scalar_direction(const std::vector<double>& dir)
{
    std::vector<S> out;
    out.reserve(dir.size());
    for (double c : dir) {
        if constexpr (scalar_traits<S>::exact) {
            out.push_back(round_to_dyadic(c, kRationalNodeBits));
        } else {
            out.push_back(c);
        }
    }
    return out;
}

} // namespace detail

/// h_k(x, v) = (1/k!) d^k/dt^k f(x + t v) at t = 0, read off the jet of f along the line.
///
/// Throws PoleAtOrigin if f(x + t v) has a pole at t = 0. When x itself
/// triggers a guard, series semantics are used and the event is flagged.
template <Scalar S>
GateauxValue<S> gateaux_coeff(const Expr& e, std::span<const S> x, std::span<const S> v, int k, int order)
{
    GateauxValue<S> out{S(0), false};
    EvalTrace trace;
    try {
        eval_point<S>(e, x, &trace);
    } catch (const DomainError&) {
    }
    out.guard_triggered = trace.guard_triggered;
    if constexpr (!scalar_traits<S>::exact) {
        // h_k(x, v) = s^k h_k(x, v / s) with s = +-max|v_i| signed so the largest entry of v / s is +1.
        // Parallel directions then share one series computation, which keeps
        // h_k homogeneous in v up to rounding of the direction itself.
        std::size_t m = 0;
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (std::fabs(v[i]) > std::fabs(v[m])) {
                m = i;
            }
        }
        if (!v.empty() && v[m] != 0.0 && std::isfinite(v[m])) {
            const double s = v[m];
            std::vector<double> u(v.begin(), v.end());
            for (double& c : u) {
                c /= s;
            }
            u[m] = 1.0;
            const auto jet = detail::directional_jet<S>(e, x, std::span<const S>(u), k, std::max(order, k + 1));
            out.value = jet_derive_coeff(jet, k) * std::pow(s, k);
            return out;
        }
    }
    const auto jet = detail::directional_jet<S>(e, x, v, k, std::max(order, k + 1));
    out.value = jet_derive_coeff(jet, k);
    return out;
}

template <Scalar S>
GateauxValue<S> gateaux_coeff(const Expr& e, const std::vector<S>& x, const std::vector<S>& v, int k, int order)
{
    return gateaux_coeff<S>(e, std::span<const S>(x), std::span<const S>(v), k, order);
}

/// Tests whether v -> h_k(x, v) is a homogeneous polynomial: fits P on
/// d(n,k) generic nodes and compares at `validation` further directions
/// (0 means d(n,k)). Polynomial iff every residual is at most tol * scale.
template <Scalar S>
PolyTestResult<S> poly_test(const Expr& e, std::span<const S> x, int k, std::uint64_t node_seed, std::size_t validation,
    double tol, const ClassifyConfig& cfg = {})
{
    using traits = scalar_traits<S>;
    const int n = e.nvars();
    const int order = std::max(cfg.effective_order(), k + 1);
    PolyTestResult<S> result;
    result.k = k;
    result.node_seed = node_seed;

    const auto nodes = sample_nodes<S>(n, k, node_seed, cfg.condition_cap, cfg.node_attempts);
    if (validation == 0) {
        validation = nodes.nodes.size();
    }
    const auto checks = sample_directions(n, validation, mix_seed(node_seed, 0x5eed));

    auto h_along = [&](std::span<const S> dir) -> std::optional<S> {
        const auto jet = detail::directional_jet<S>(e, x, dir, k, order);
        if (!jet.is_zero() && jet.valuation() < 0) {
            return std::nullopt;
        }
        return jet.coeff(k);
    };

    std::vector<S> values;
    values.reserve(nodes.nodes.size());
    S hmax(0);
    for (const auto& node : nodes.nodes) {
        const auto h = h_along(node);
        if (!h) {
            result.pole = true;
            return result;
        }
        hmax = std::max(hmax, traits::abs(*h));
        values.push_back(*h);
    }
    result.scale = S(1) + hmax;
    auto fitted = interp_fit(values, nodes);

    S worst(0);
    for (const auto& dir_d : checks) {
        const auto dir = detail::to_scalar_direction<S>(dir_d);
        const auto h = h_along(dir);
        if (!h) {
            result.pole = true;
            return result;
        }
        const S r = traits::abs(*h - fitted(dir));
        worst = std::max(worst, r);
        result.residuals.push_back(r);
    }
    result.normalized = worst / result.scale;
    result.polynomial = to_double(*result.normalized) <= tol;
    result.fitted = std::move(fitted);
    return result;
}

/// Pointwise analyticity verdict from the polynomiality of h_0..h_{k_max}.
///
/// The first order whose Gateaux differential is not polynomial (or has a
/// directional pole) gives NonAnalytic(k*). At order 0 the fitted constant is
/// also compared with the assigned value f(x), so a removable discontinuity
/// is reported as NonAnalytic(0).
template <Scalar S>
Verdict<S> classify_point(const Expr& e, std::span<const S> x, const ClassifyConfig& cfg)
{
    using traits = scalar_traits<S>;
    Verdict<S> v;
    v.point.assign(x.begin(), x.end());
    v.k_max = cfg.k_max;

    EvalTrace trace;
    S value;
    try {
        value = eval_point<S>(e, x, &trace);
    } catch (const DomainError& err) {
        v.status = Status::Inconclusive;
        v.reason = std::string("point evaluation failed: ") + err.what();
        return v;
    }
    v.guard_triggered = trace.guard_triggered;

    for (int k = 0; k <= cfg.k_max; ++k) {
        PolyTestResult<S> t;
        try {
            t = poly_test<S>(e, x, k, mix_seed(cfg.seed, static_cast<std::uint64_t>(k)), 0, cfg.tol, cfg);
        } catch (const Error& err) {
            v.status = Status::Inconclusive;
            v.reason = "order " + std::to_string(k) + ": " + err.what();
            return v;
        }
        if (t.pole) {
            v.per_order.push_back(std::move(t));
            v.status = Status::NonAnalytic;
            v.k_star = k;
            v.pole = true;
            return v;
        }
        if (t.polynomial && k == 0) {
            const S jump = traits::abs(value - t.fitted->coeffs()[0]) / t.scale;
            if (to_double(jump) > cfg.tol) {
                t.polynomial = false;
                t.normalized = jump;
                v.reason = "assigned value differs from the limit along lines";
            }
        }
        const bool ok = t.polynomial;
        const auto residual = t.normalized;
        v.per_order.push_back(std::move(t));
        if (!ok) {
            v.status = Status::NonAnalytic;
            v.k_star = k;
            v.residual = residual;
            return v;
        }
    }
    v.status = Status::AnalyticUpTo;
    return v;
}

template <Scalar S>
Verdict<S> classify_point(const Expr& e, const std::vector<S>& x, const ClassifyConfig& cfg)
{
    return classify_point<S>(e, std::span<const S>(x), cfg);
}

/// Rectangular grid: per variable, lo + i * step for i = 0 .. floor((hi - lo) / step).
struct GridSpec {
    struct Axis {
        Rational lo;
        Rational hi;
        Rational step;

        std::size_t count() const
        {
            if (hi < lo) {
                return 0;
            }
            const Rational r = (hi - lo) / step;
            return static_cast<std::size_t>((boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r))
                .convert_to<long long>()) + 1;
        }
    };

    std::vector<Axis> axes;

    std::size_t size() const
    {
        std::size_t total = axes.empty() ? 0 : 1;
        for (const auto& a : axes) {
            total *= a.count();
        }
        return total;
    }

    /// Exact coordinates of grid node `index`; the last axis varies fastest.
    std::vector<Rational> point(std::size_t index) const
    {
        std::vector<Rational> p(axes.size());
        for (std::size_t i = axes.size(); i-- > 0;) {
            const std::size_t c = axes[i].count();
            p[i] = axes[i].lo + axes[i].step * Rational(static_cast<long long>(index % c));
            index /= c;
        }
        return p;
    }

    /// Parses "x:lo:hi:step;y:lo:hi:step" with variables named as in the expression grammar.
    static GridSpec parse(std::string_view text, int nvars)
    {
        GridSpec g;
        g.axes.resize(static_cast<std::size_t>(nvars));
        std::vector<bool> seen(static_cast<std::size_t>(nvars), false);
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t end = std::min(text.find(';', start), text.size());
            const std::string_view part = text.substr(start, end - start);
            std::vector<std::string_view> fields;
            std::size_t f = 0;
            while (true) {
                const std::size_t colon = part.find(':', f);
                fields.push_back(part.substr(f, colon == std::string_view::npos ? std::string_view::npos : colon - f));
                if (colon == std::string_view::npos) {
                    break;
                }
                f = colon + 1;
            }
            if (fields.size() != 4) {
                throw Error("grid axis must be name:lo:hi:step, got '" + std::string(part) + "'");
            }
            const Expr var = arcan::parse(fields[0], nvars);
            if (var.root()->op != Op::Var) {
                throw Error("grid axis name must be a variable");
            }
            const int i = var.root()->index;
            Axis axis;
            for (int j = 0; j < 3; ++j) {
                const Expr c = arcan::parse(fields[static_cast<std::size_t>(j) + 1], 1);
                if (c.root()->op != Op::Const) {
                    throw Error("grid bounds must be rational constants");
                }
                (j == 0 ? axis.lo : j == 1 ? axis.hi : axis.step) = c.root()->value;
            }
            if (axis.step <= 0) {
                throw Error("grid step must be positive");
            }
            g.axes[static_cast<std::size_t>(i)] = axis;
            seen[static_cast<std::size_t>(i)] = true;
            start = end + 1;
        }
        for (std::size_t i = 0; i < seen.size(); ++i) {
            if (!seen[i]) {
                throw Error("grid is missing variable " + variable_name(static_cast<int>(i), nvars));
            }
        }
        return g;
    }
};

/// Runs body(i) for i in [0, count) on `jobs` threads.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body)
{
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                body(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

/// Classifies every grid node with per-point seeds mix_seed(cfg.seed, index).
/// Results are delivered to `sink` in grid order, in blocks, so long scans stream.
template <Scalar S>
void scan_region(const Expr& e, const GridSpec& grid, const ClassifyConfig& cfg, int jobs,
    const std::function<void(std::size_t, const Verdict<S>&)>& sink)
{
    const std::size_t total = grid.size();
    const std::size_t block = 256;
    for (std::size_t base = 0; base < total; base += block) {
        const std::size_t count = std::min(block, total - base);
        std::vector<Verdict<S>> out(count);
        parallel_for(count, jobs, [&](std::size_t j) {
            const std::size_t index = base + j;
            std::vector<S> x;
            for (const auto& q : grid.point(index)) {
                x.push_back(scalar_traits<S>::from_rational(q));
            }
            ClassifyConfig local = cfg;
            local.seed = mix_seed(cfg.seed, index);
            out[j] = classify_point<S>(e, x, local);
        });
        for (std::size_t j = 0; j < count; ++j) {
            sink(base + j, out[j]);
        }
    }
}

template <Scalar S>
std::vector<Verdict<S>> scan_region(const Expr& e, const GridSpec& grid, const ClassifyConfig& cfg, int jobs = 1)
{
    std::vector<Verdict<S>> out;
    out.reserve(grid.size());
    scan_region<S>(e, grid, cfg, jobs, [&](std::size_t, const Verdict<S>& v) { out.push_back(v); });
    return out;
}

template <Scalar S>
struct SymmetryReport {
    std::vector<S> negative_t;
    std::vector<S> positive_t;
    std::vector<Status> negative;
    std::vector<Status> positive;
    int negative_nonanalytic = 0;
    int positive_nonanalytic = 0;
    int negative_analytic = 0;
    int positive_analytic = 0;
    /// All t < 0 analytic while more than the allowed number of t > 0 are not.
    bool violation = false;
    /// All t < 0 non-analytic while more than the allowed number of t > 0 are analytic.
    bool reverse_violation = false;
};

/// Compares verdicts at gamma(-t_i) and gamma(t_i), t_i = t_max * i / samples.
template <Scalar S>
SymmetryReport<S> arc_symmetry_check(const Expr& e, const ArcSpec<S>& arc, int samples, const ClassifyConfig& cfg,
    const S& t_max = S(1) / S(2), int allowed_exceptions = 2)
{
    SymmetryReport<S> r;
    for (int i = 1; i <= samples; ++i) {
        const S t = t_max * S(i) / S(samples);
        r.positive_t.push_back(t);
        r.negative_t.push_back(-t);
    }
    auto run = [&](const std::vector<S>& ts, std::uint64_t salt, std::vector<Status>& out, int& na, int& an) {
        for (std::size_t i = 0; i < ts.size(); ++i) {
            ClassifyConfig local = cfg;
            local.seed = mix_seed(cfg.seed, salt + i);
            const auto verdict = classify_point<S>(e, arc.at(ts[i]), local);
            out.push_back(verdict.status);
            na += verdict.status == Status::NonAnalytic;
            an += verdict.status == Status::AnalyticUpTo;
        }
    };
    run(r.negative_t, 0, r.negative, r.negative_nonanalytic, r.negative_analytic);
    run(r.positive_t, 1u << 20, r.positive, r.positive_nonanalytic, r.positive_analytic);
    r.violation = r.negative_analytic == samples && r.positive_nonanalytic > allowed_exceptions;
    r.reverse_violation = r.negative_nonanalytic == samples && r.positive_analytic > allowed_exceptions;
    return r;
}

struct LojaFit {
    double c = 0.0;
    int n = 0;
    std::vector<std::vector<double>> gamma;
    /// Log-log slope of the binned sup of |f| dist^N against dist; >= slope_floor when accepted.
    double slope = 0.0;
    std::size_t samples_used = 0;
};

/// Smallest integer N <= cap with |f(x)| dist(x, Gamma)^N bounded near Gamma,
/// and C = max over samples of |f(x)| dist(x, Gamma)^N.
///
/// "Bounded" is judged from the samples: they are binned by log-distance to
/// Gamma and the slope of log(max per bin) against log(dist) must be at least
/// slope_floor. C is rounded up by a few ulps so the bound holds at every
/// sample despite rounding.
inline LojaFit loja_estimate(const Expr& e, const std::vector<std::vector<double>>& gamma,
    const std::vector<std::vector<double>>& samples, int cap = 8, double slope_floor = -0.25, int bins = 12)
{
    if (gamma.empty()) {
        throw Error("exceptional set sample is empty");
    }
    std::vector<double> abs_f;
    std::vector<double> dist2;
    for (const auto& x : samples) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& g : gamma) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                s += (x[i] - g[i]) * (x[i] - g[i]);
            }
            best = std::min(best, s);
        }
        if (best == 0.0) {
            throw Error("sample lies on the exceptional set");
        }
        try {
            abs_f.push_back(std::fabs(eval_point<double>(e, x)));
            dist2.push_back(best);
        } catch (const DomainError&) {
        }
    }
    if (abs_f.empty()) {
        throw Error("no sample could be evaluated");
    }
    const auto [lo_it, hi_it] = std::minmax_element(dist2.begin(), dist2.end());
    const double log_lo = 0.5 * std::log(*lo_it);
    const double log_hi = 0.5 * std::log(*hi_it);
    const double width = std::max((log_hi - log_lo) / bins, 1e-12);

    for (int n = 0; n <= cap; ++n) {
        std::vector<double> bin_max(static_cast<std::size_t>(bins), 0.0);
        double c = 0.0;
        for (std::size_t i = 0; i < abs_f.size(); ++i) {
            double dn = std::pow(dist2[i], n / 2);
            if (n % 2 == 1) {
                dn *= std::sqrt(dist2[i]);
            }
            const double g = abs_f[i] * dn;
            c = std::max(c, g);
            const int b = std::min(bins - 1, static_cast<int>((0.5 * std::log(dist2[i]) - log_lo) / width));
            bin_max[static_cast<std::size_t>(b)] = std::max(bin_max[static_cast<std::size_t>(b)], g);
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int used = 0;
        for (int b = 0; b < bins; ++b) {
            if (bin_max[static_cast<std::size_t>(b)] <= 0.0) {
                continue;
            }
            const double lx = log_lo + (b + 0.5) * width;
            const double ly = std::log(bin_max[static_cast<std::size_t>(b)]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++used;
        }
        double slope = 0.0;
        if (used >= 2) {
            const double denom = used * sxx - sx * sx;
            slope = denom != 0.0 ? (used * sxy - sx * sy) / denom : 0.0;
        }
        if (slope >= slope_floor) {
            LojaFit fit;
            fit.c = c * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
            fit.n = n;
            fit.gamma = gamma;
            fit.slope = slope;
            fit.samples_used = abs_f.size();
            return fit;
        }
    }
    throw CapExceeded(cap);
}

} // namespace arcan
