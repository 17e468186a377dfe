#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <arcan/blowup.hpp>
#include <arcan/classify.hpp>
#include <arcan/corpus.hpp>
#include <arcan/eval.hpp>
#include <arcan/homog.hpp>

namespace arcan {

using Json = nlohmann::ordered_json;

/// Floats as JSON numbers (null when not finite), rationals as "p/q" strings.
inline Json scalar_json(double x)
{
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return x;
}

inline Json scalar_json(const Rational& x) { return scalar_traits<Rational>::to_string(x); }

template <Scalar S>
Json scalar_array(const std::vector<S>& xs)
{
    Json a = Json::array();
    for (const auto& x : xs) {
        a.push_back(scalar_json(x));
    }
    return a;
}

namespace detail {

inline void dump_json(std::string& out, const Json& j)
{
    switch (j.type()) {
    case Json::value_t::object: {
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ',';
            }
            first = false;
            out += Json(it.key()).dump();
            out += ':';
            dump_json(out, it.value());
        }
        out += '}';
        break;
    }
    case Json::value_t::array: {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) {
                out += ',';
            }
            dump_json(out, j[i]);
        }
        out += ']';
        break;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        if (!std::isfinite(x)) {
            out += "null";
        } else if (x == 0.0) {
            out += '0';
        } else {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out += buf;
        }
        break;
    }
    default:
        out += j.dump();
    }
}

} // namespace detail

/// Compact JSON with every float printed to 17 significant digits.
inline std::string dump(const Json& j)
{
    std::string out;
    detail::dump_json(out, j);
    return out;
}

template <Scalar S>
Json to_json(const HomoPoly<S>& p)
{
    return Json{{"nvars", p.nvars()}, {"degree", p.degree()}, {"coeffs", scalar_array(p.coeffs())}};
}

template <Scalar S>
Json to_json(const PolyTestResult<S>& r)
{
    Json j{{"k", r.k}, {"nodeSeed", r.node_seed}, {"polynomial", r.polynomial}, {"pole", r.pole}};
    if (r.fitted) {
        j["fitted"] = to_json(*r.fitted);
    }
    j["residuals"] = scalar_array(r.residuals);
    j["scale"] = scalar_json(r.scale);
    return j;
}

template <Scalar S>
Json to_json(const Verdict<S>& v)
{
    Json j{{"point", scalar_array(v.point)}, {"status", to_string(v.status)}, {"kMax", v.k_max}};
    if (v.k_star) {
        j["kStar"] = *v.k_star;
    }
    if (v.residual) {
        j["residual"] = scalar_json(*v.residual);
    }
    j["pole"] = v.pole;
    j["guardTriggered"] = v.guard_triggered;
    if (!v.reason.empty()) {
        j["reason"] = v.reason;
    }
    Json orders = Json::array();
    for (const auto& r : v.per_order) {
        orders.push_back(to_json(r));
    }
    j["perOrder"] = std::move(orders);
    return j;
}

template <Scalar S>
Json to_json(const ArcReport<S>& r)
{
    Json j{{"kind", to_string(r.kind)}};
    if (r.laurent.is_zero()) {
        j["valuation"] = nullptr;
    } else {
        j["valuation"] = r.laurent.valuation();
    }
    j["order"] = r.laurent.order();
    j["coeffs"] = scalar_array(r.laurent.coeffs());
    j["pointValue"] = r.point_value ? scalar_json(*r.point_value) : Json(nullptr);
    j["mismatch"] = r.mismatch ? scalar_json(*r.mismatch) : Json(nullptr);
    return j;
}

inline Json to_json(const BlowupChart& c)
{
    Json center = Json::array();
    for (int i : c.center) {
        center.push_back(i + 1);
    }
    return Json{{"n", c.nvars}, {"center", std::move(center)}, {"axis", c.axis + 1}};
}

inline Json to_json(const PullbackResult& r)
{
    return Json{{"expr", print(r.expr)}, {"cancelledPower", r.cancelled_power},
        {"nonRationalCancellation", r.non_rational_cancellation},
        {"fiberDenominatorVanishes", r.fiber_denominator_vanishes}};
}

inline Json to_json(const LojaFit& f)
{
    return Json{{"N", f.n}, {"C", scalar_json(f.c)}, {"slope", scalar_json(f.slope)}, {"samples", f.samples_used}};
}

inline Json to_json(const FiberLiftReport& r)
{
    Json fiber = Json::array();
    for (const auto& v : r.fiber_verdicts) {
        fiber.push_back(Json{{"point", scalar_array(v.point)}, {"status", to_string(v.status)}});
    }
    return Json{{"baseStatus", to_string(r.base_status)}, {"consistent", r.consistent}, {"nonAnalytic", r.nonanalytic},
        {"analytic", r.analytic}, {"inconclusive", r.inconclusive}, {"fiber", std::move(fiber)}};
}

inline Json points_json(const std::vector<std::vector<Rational>>& pts)
{
    Json a = Json::array();
    for (const auto& p : pts) {
        a.push_back(scalar_array(p));
    }
    return a;
}

inline Json to_json(const CorpusRun& r)
{
    Json charts = Json::array();
    for (const auto& c : r.unresolved_charts) {
        charts.push_back(c);
    }
    return Json{{"name", r.name}, {"ok", r.ok()}, {"gridPoints", r.grid_points}, {"expected", points_json(r.expected)},
        {"observed", points_json(r.observed)}, {"falsePositives", points_json(r.false_positives)},
        {"falseNegatives", points_json(r.false_negatives)}, {"inconclusive", points_json(r.inconclusive)},
        {"unresolvedCharts", std::move(charts)}};
}

/// CSV header for scan rows: index, one column per variable, then the verdict summary.
inline std::string csv_header(int nvars)
{
    std::string h = "index";
    for (int i = 0; i < nvars; ++i) {
        h += "," + variable_name(i, nvars);
    }
    return h + ",status,kStar,residual,pole,guardTriggered";
}

template <Scalar S>
std::string csv_row(std::size_t index, const Verdict<S>& v)
{
    auto cell = [](const S& x) {
        if constexpr (scalar_traits<S>::exact) {
            return scalar_traits<S>::to_string(x);
        } else {
            if (!std::isfinite(x)) {
                return std::string();
            }
            return x == 0.0 ? std::string("0") : scalar_traits<S>::to_string(x);
        }
    };
    std::string row = std::to_string(index);
    for (const auto& x : v.point) {
        row += "," + cell(x);
    }
    row += ",";
    row += to_string(v.status);
    row += "," + (v.k_star ? std::to_string(*v.k_star) : std::string());
    row += "," + (v.residual ? cell(*v.residual) : std::string());
    row += v.pole ? ",true" : ",false";
    row += v.guard_triggered ? ",true" : ",false";
    return row;
}

/// Parses {"n": 3, "center": [2, 3], "axis": 3} (1-based indices).
inline BlowupChart parse_chart(std::string_view text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& err) {
        throw Error(std::string("chart is not valid JSON: ") + err.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("center") || !j.contains("axis")) {
        throw Error("chart needs fields n, center and axis");
    }
    if (!j["n"].is_number_integer() || !j["axis"].is_number_integer() || !j["center"].is_array()) {
        throw Error("chart fields have the wrong type");
    }
    std::vector<int> center;
    for (const auto& c : j["center"]) {
        if (!c.is_number_integer()) {
            throw Error("chart center entries must be integers");
        }
        center.push_back(c.get<int>());
    }
    return make_chart(j["n"].get<int>(), center, j["axis"].get<int>());
}

} // namespace arcan
