#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <arcan/blowup.hpp>
#include <arcan/classify.hpp>
#include <arcan/parse.hpp>

namespace arcan {

enum class Tag { ArcAnalytic, NotDifferentiable, NotC2, NotLipschitz, ArcMeromorphicOnly, Discontinuous };

inline const char* to_string(Tag t)
{
    switch (t) {
    case Tag::ArcAnalytic:
        return "arcAnalytic";
    case Tag::NotDifferentiable:
        return "notDifferentiable";
    case Tag::NotC2:
        return "notC2";
    case Tag::NotLipschitz:
        return "notLipschitz";
    case Tag::ArcMeromorphicOnly:
        return "arcMeromorphicOnly";
    case Tag::Discontinuous:
        return "discontinuous";
    }
    return "?";
}

/// Expected non-analyticity locus of a corpus function.
struct Locus {
    enum class Kind { Points, Subspace, Oval };

    Kind kind = Kind::Points;
    std::string description;
    /// Kind::Points: the finite list.
    std::vector<std::vector<Rational>> points;
    /// Kind::Subspace: 0-based coordinates that vanish on it.
    std::vector<int> zero_coords;

    /// Oval component {g = 0, x < 3/2} x {0} with g = y^2 + x(x-1)(x-2)(x-3).
    static Rational oval_g(const Rational& x, const Rational& y) { return y * y + x * (x - 1) * (x - 2) * (x - 3); }

    bool contains(const std::vector<Rational>& p) const
    {
        switch (kind) {
        case Kind::Points:
            return std::find(points.begin(), points.end(), p) != points.end();
        case Kind::Subspace:
            return std::all_of(zero_coords.begin(), zero_coords.end(),
                [&](int i) { return p[static_cast<std::size_t>(i)] == 0; });
        case Kind::Oval:
            return p[2] == 0 && p[0] < Rational(3, 2) && oval_g(p[0], p[1]) == 0;
        }
        return false;
    }

    /// Membership up to `tol` in each defining equation, for points with irrational coordinates.
    bool contains_approx(const std::vector<double>& p, double tol) const
    {
        switch (kind) {
        case Kind::Points:
            return std::any_of(points.begin(), points.end(), [&](const std::vector<Rational>& q) {
                for (std::size_t i = 0; i < q.size(); ++i) {
                    if (std::fabs(p[i] - q[i].convert_to<double>()) > tol) {
                        return false;
                    }
                }
                return true;
            });
        case Kind::Subspace:
            return std::all_of(zero_coords.begin(), zero_coords.end(),
                [&](int i) { return std::fabs(p[static_cast<std::size_t>(i)]) <= tol; });
        case Kind::Oval: {
            const double x = p[0], y = p[1];
            return std::fabs(p[2]) <= tol && x < 1.5 && std::fabs(y * y + x * (x - 1) * (x - 2) * (x - 3)) <= tol;
        }
        }
        return false;
    }
};

struct CorpusEntry {
    std::string name;
    std::string text;
    int nvars = 0;
    std::vector<Tag> tags;
    Locus locus;
    /// Grid on which the expected locus is compared with the scan.
    std::string grid;
    /// Charts (1-based center and axis) whose pullback is expected analytic on the exceptional divisor.
    struct Chart {
        std::vector<int> center;
        int axis;
    };
    std::vector<Chart> resolution;

    Expr expr() const { return parse(text, nvars); }
    bool has(Tag t) const { return std::find(tags.begin(), tags.end(), t) != tags.end(); }
};

/// Perturbation in g_1 = sqrt(h^2 + eps g) + h. Frozen after checking
/// h^2 + eps g > 0 by grid minimization (tools/derive_epsilon.py).
inline Rational oval_epsilon() { return Rational(1, 100); }

inline const std::vector<CorpusEntry>& corpus_list()
{
    static const std::vector<CorpusEntry> entries = [] {
        const std::vector<Rational> origin2{Rational(0), Rational(0)};
        std::vector<CorpusEntry> v;
        v.push_back({"E1", "guard(x^3/(x^2+y^2), 0)", 2, {Tag::ArcAnalytic, Tag::NotDifferentiable},
            {Locus::Kind::Points, "{(0,0)}", {origin2}, {}}, "x:-1:1:1/8;y:-1:1:1/8", {{{1, 2}, 1}, {{1, 2}, 2}}});
        v.push_back({"E2", "sqrt(x^4+y^4)", 2, {Tag::ArcAnalytic, Tag::NotC2},
            {Locus::Kind::Points, "{(0,0)}", {origin2}, {}}, "x:-1:1:1/8;y:-1:1:1/8", {{{1, 2}, 1}, {{1, 2}, 2}}});
        v.push_back({"E3", "guard(x*y^5/(x^4+y^6), 0)", 2, {Tag::ArcAnalytic, Tag::NotLipschitz},
            {Locus::Kind::Points, "{(0,0)}", {origin2}, {}}, "x:-1:1:1/8;y:-1:1:1/8", {{{1, 2}, 1}}});
        v.push_back({"E4", "guard(x*y/(x^2+y^2), 0)", 2, {Tag::ArcMeromorphicOnly, Tag::Discontinuous},
            {Locus::Kind::Points, "{(0,0)}", {origin2}, {}}, "x:-1:1:1/8;y:-1:1:1/8", {{{1, 2}, 1}, {{1, 2}, 2}}});
        v.push_back({"E5", "guard(x^3/(x^2+y^2), 0)", 3, {Tag::ArcAnalytic, Tag::NotDifferentiable},
            {Locus::Kind::Subspace, "z-axis {x = y = 0}", {}, {0, 1}}, "x:-1:1:1/4;y:-1:1:1/4;z:-1:1:1/4",
            {{{1, 2}, 1}, {{1, 2}, 2}}});
        const std::string g1 = "(sqrt((x-3/2)^2 + 1/100*(y^2 + x*(x-1)*(x-2)*(x-3))) + (x-3/2))";
        v.push_back({"E6", "guard(z^3/(z^2 + " + g1 + "^2), 0)", 3, {Tag::ArcAnalytic},
            {Locus::Kind::Oval, "X1 x {0}: z = 0, y^2 + x(x-1)(x-2)(x-3) = 0, x < 3/2", {}, {}},
            "x:-1/4:7/4:1/4;y:-1:1:1/4;z:-1/2:1/2:1/4", {}});
        return v;
    }();
    return entries;
}

inline const CorpusEntry& corpus_lookup(std::string_view name)
{
    for (const auto& e : corpus_list()) {
        if (e.name == name) {
            return e;
        }
    }
    throw Error("no corpus entry named '" + std::string(name) + "'");
}

/// Scan of an entry's grid compared with its expected locus.
struct CorpusRun {
    std::string name;
    std::size_t grid_points = 0;
    std::vector<std::vector<Rational>> expected;
    std::vector<std::vector<Rational>> observed;
    std::vector<std::vector<Rational>> false_positives;
    std::vector<std::vector<Rational>> false_negatives;
    std::vector<std::vector<Rational>> inconclusive;
    /// Resolution charts whose pullback was not analytic at every sampled divisor point.
    std::vector<std::string> unresolved_charts;

    bool ok() const
    {
        return false_positives.empty() && false_negatives.empty() && inconclusive.empty() && unresolved_charts.empty();
    }
};

inline CorpusRun corpus_run(const CorpusEntry& entry, const ClassifyConfig& cfg, int jobs = 1)
{
    CorpusRun run;
    run.name = entry.name;
    const Expr e = entry.expr();
    const auto grid = GridSpec::parse(entry.grid, entry.nvars);
    run.grid_points = grid.size();
    scan_region<double>(e, grid, cfg, jobs, [&](std::size_t index, const Verdict<double>& v) {
        const auto p = grid.point(index);
        const bool expected = entry.locus.contains(p);
        const bool flagged = v.status == Status::NonAnalytic;
        if (expected) {
            run.expected.push_back(p);
        }
        if (flagged) {
            run.observed.push_back(p);
        }
        if (v.status == Status::Inconclusive) {
            run.inconclusive.push_back(p);
        } else if (flagged && !expected) {
            run.false_positives.push_back(p);
        } else if (!flagged && expected) {
            run.false_negatives.push_back(p);
        }
    });

    for (const auto& c : entry.resolution) {
        const auto chart = make_chart(entry.nvars, c.center, c.axis);
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 10; ++i) {
            std::vector<double> p(static_cast<std::size_t>(entry.nvars), 0.0);
            for (int j : chart.center) {
                if (j != chart.axis) {
                    p[static_cast<std::size_t>(j)] = -2.0 + 0.4 * i + 0.05;
                }
            }
            pts.push_back(std::move(p));
        }
        bool all = true;
        for (const auto& v : classify_pullback(e, chart, pts, cfg)) {
            all = all && v.status == Status::AnalyticUpTo;
        }
        if (!all) {
            std::string label = "center {";
            for (std::size_t i = 0; i < c.center.size(); ++i) {
                label += (i ? "," : "") + std::to_string(c.center[i]);
            }
            run.unresolved_charts.push_back(label + "} axis " + std::to_string(c.axis));
        }
    }
    return run;
}

} // namespace arcan
