#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <arcan/io.hpp>
#include <arcan/verify.hpp>

using namespace arcan;
using Q = Rational;

namespace {

ClassifyConfig config(int k_max, std::uint64_t seed = 0)
{
    ClassifyConfig c;
    c.k_max = k_max;
    c.seed = seed;
    return c;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

} // namespace

TEST(Json, FloatsUseSeventeenDigits)
{
    EXPECT_EQ(dump(Json{{"x", 0.1}}), "{\"x\":0.10000000000000001}");
    EXPECT_EQ(dump(Json::array({1.0, -0.0, 2.5})), "[1,0,2.5]");
    EXPECT_EQ(dump(Json::array({scalar_json(std::numeric_limits<double>::quiet_NaN())})), "[null]");
    EXPECT_EQ(dump(Json::array({scalar_json(Q(-3, 4)), scalar_json(Q(5))})), "[\"-3/4\",\"5\"]");
    EXPECT_EQ(dump(Json{{"s", "a\"b"}, {"n", 18446744073709551615ULL}}), "{\"s\":\"a\\\"b\",\"n\":18446744073709551615}");
    // round trip of the printed form recovers every double exactly
    for (double x : {1.0 / 3.0, 1e-300, 6.02214076e23, -2.2250738585072014e-308}) {
        EXPECT_EQ(Json::parse(dump(Json::array({x})))[0].get<double>(), x);
    }
}

TEST(Json, HomoPoly)
{
    EXPECT_EQ(dump(to_json(HomoPoly<double>(2, 2, {1.0, 0.0, -2.0}))), "{\"nvars\":2,\"degree\":2,\"coeffs\":[1,0,-2]}");
    EXPECT_EQ(dump(to_json(HomoPoly<Q>(2, 1, {Q(1, 2), Q(0)}))), "{\"nvars\":2,\"degree\":1,\"coeffs\":[\"1/2\",\"0\"]}");
}

TEST(Json, VerdictFields)
{
    const auto v = classify_point<double>(parse("guard(x^3/(x^2+y^2),0)"), {0.0, 0.0}, config(3));
    const auto j = Json::parse(dump(to_json(v)));
    EXPECT_EQ(j["status"], "NonAnalytic");
    EXPECT_EQ(j["kStar"], 1);
    EXPECT_EQ(j["kMax"], 3);
    EXPECT_TRUE(j["guardTriggered"].get<bool>());
    EXPECT_GT(j["residual"].get<double>(), 1e-7);
    ASSERT_EQ(j["perOrder"].size(), 2u);
    EXPECT_TRUE(j["perOrder"][0]["polynomial"].get<bool>());
    EXPECT_EQ(j["perOrder"][0]["fitted"]["degree"], 0);
    EXPECT_FALSE(j["perOrder"][1]["polynomial"].get<bool>());

    const auto a = classify_point<double>(parse("x^2+y"), {1.0, 2.0}, config(3));
    const auto ja = Json::parse(dump(to_json(a)));
    EXPECT_EQ(ja["status"], "AnalyticUpTo");
    EXPECT_FALSE(ja.contains("kStar"));
    EXPECT_FALSE(ja.contains("residual"));
    EXPECT_EQ(ja["perOrder"].size(), 4u);

    const auto r = classify_point<Q>(parse("x^2+y"), {Q(1, 3), Q(2)}, config(2));
    const auto jr = Json::parse(dump(to_json(r)));
    EXPECT_EQ(jr["point"][0], "1/3");
    EXPECT_TRUE(jr["perOrder"][2]["residuals"][0].is_string());
}

TEST(Json, DeterministicBytes)
{
    const auto e = parse("guard(x*y^5/(x^4+y^6),0)");
    const std::string a = dump(to_json(classify_point<double>(e, {0.0, 0.0}, config(4, 9))));
    const std::string b = dump(to_json(classify_point<double>(e, {0.0, 0.0}, config(4, 9))));
    EXPECT_EQ(a, b);
}

TEST(Json, ArcReport)
{
    const auto r = arc_check(parse("guard(x*y/(x^2+y^2),0)"), parse_arc<double>("t, t"), 12, 1e-12);
    const auto j = Json::parse(dump(to_json(r)));
    EXPECT_EQ(j["kind"], "RemovableMismatch");
    EXPECT_EQ(j["valuation"], 0);
    EXPECT_EQ(j["mismatch"].get<double>(), 0.5);
    EXPECT_EQ(j["pointValue"].get<double>(), 0.0);
}

TEST(Json, PullbackAndChart)
{
    const auto chart = parse_chart(R"({"n":3,"center":[2,3],"axis":3})");
    EXPECT_EQ(chart.nvars, 3);
    EXPECT_EQ(chart.center, (std::vector<int>{1, 2}));
    EXPECT_EQ(chart.axis, 2);
    EXPECT_EQ(dump(to_json(chart)), "{\"n\":3,\"center\":[2,3],\"axis\":3}");

    const auto pb = pullback(parse("guard(x^3/(x^2+y^2),0)"), parse_chart(R"({"n":2,"center":[1,2],"axis":1})"));
    EXPECT_EQ(dump(to_json(pb)), "{\"expr\":\"guard((x / ((y^2) + 1)), 0)\",\"cancelledPower\":2,"
                                 "\"nonRationalCancellation\":false,\"fiberDenominatorVanishes\":false}");
    // the printed expression parses back to the same function
    const auto back = parse(Json::parse(dump(to_json(pb)))["expr"].get<std::string>(), 2);
    for (double y : {-1.5, 0.0, 0.25}) {
        EXPECT_EQ(eval_point<double>(back, {0.5, y}), eval_point<double>(pb.expr, {0.5, y}));
    }

    EXPECT_THROW(parse_chart("{\"n\":3}"), Error);
    EXPECT_THROW(parse_chart("not json"), Error);
    EXPECT_THROW(parse_chart(R"({"n":3,"center":[1,"2"],"axis":1})"), Error);
    EXPECT_THROW(parse_chart(R"({"n":3,"center":[2,3],"axis":1})"), BadCenter);
}

TEST(Json, CorpusRun)
{
    const auto run = corpus_run(corpus_lookup("E2"), config(6));
    const auto j = Json::parse(dump(to_json(run)));
    EXPECT_TRUE(j["ok"].get<bool>());
    EXPECT_EQ(j["gridPoints"], 289);
    EXPECT_EQ(j["expected"], Json::parse(R"([["0","0"]])"));
    EXPECT_EQ(j["observed"], j["expected"]);
    EXPECT_TRUE(j["falsePositives"].empty());
}

TEST(Csv, RowsMatchJsonVerdicts)
{
    const auto e = parse("guard(x^3/(x^2+y^2),0)");
    const auto grid = GridSpec::parse("x:-1/2:1/2:1/4;y:-1/2:1/2:1/2", 2);
    EXPECT_EQ(csv_header(2), "index,x,y,status,kStar,residual,pole,guardTriggered");

    std::multiset<std::string> from_csv, from_json;
    scan_region<double>(e, grid, config(3), 1, [&](std::size_t i, const Verdict<double>& v) {
        const auto cells = split(csv_row(i, v), ',');
        EXPECT_EQ(cells.size(), 8u);
        from_csv.insert(cells[1] + "|" + cells[2] + "|" + cells[3] + "|" + cells[4]);
        const auto j = Json::parse(dump(to_json(v)));
        auto num = [](const Json& x) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x.get<double>());
            return std::string(buf);
        };
        from_json.insert(num(j["point"][0]) + "|" + num(j["point"][1]) + "|" + j["status"].get<std::string>() + "|"
            + (j.contains("kStar") ? std::to_string(j["kStar"].get<int>()) : std::string()));
    });
    EXPECT_EQ(from_csv, from_json);
    EXPECT_EQ(from_csv.size(), grid.size());
    EXPECT_EQ(from_csv.count("0|0|NonAnalytic|1"), 1u);

    const auto v = classify_point<Q>(parse("x*y"), {Q(1, 2), Q(-3)}, config(2));
    EXPECT_EQ(csv_row(7, v), "7,1/2,-3,AnalyticUpTo,,,false,false");
}

TEST(Verify, IdentitiesPass)
{
    const auto binoms = run_verify<Q>("binoms", 1000, 0);
    EXPECT_TRUE(binoms.pass());
    EXPECT_EQ(binoms.worst_exact, 0);
    for (const auto& id : verify_identities()) {
        EXPECT_TRUE(run_verify<double>(id, 100, 4).pass()) << id;
    }
    EXPECT_TRUE(run_verify<Q>("euler", 200, 1).pass());
    EXPECT_TRUE(run_verify<Q>("interp-roundtrip", 100, 2).pass());
    EXPECT_THROW(run_verify<double>("nope", 1, 0), Error);
}
