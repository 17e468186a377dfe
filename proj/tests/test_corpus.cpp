#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <arcan/corpus.hpp>
#include <arcan/io.hpp>

#include "test_util.hpp"

using namespace arcan;
using Q = Rational;
using D = std::vector<double>;

namespace {

ClassifyConfig config(int k_max, std::uint64_t seed = 0)
{
    ClassifyConfig c;
    c.k_max = k_max;
    c.seed = seed;
    return c;
}

Json load_fixture()
{
    std::ifstream in(std::string(ARCAN_FIXTURES) + "/corpus.json");
    return Json::parse(in);
}

// h^2 + eps g with h = x - 3/2 and g the quartic oval
Q radicand(const Q& x, const Q& y, const Q& eps)
{
    const Q h = x - Q(3, 2);
    return h * h + eps * (y * y + x * (x - 1) * (x - 2) * (x - 3));
}

} // namespace

TEST(Corpus, FixtureMatchesRegistry)
{
    const auto fixture = load_fixture();
    const auto& entries = corpus_list();
    ASSERT_EQ(fixture["entries"].size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& f = fixture["entries"][i];
        const auto& e = entries[i];
        SCOPED_TRACE(e.name);
        EXPECT_EQ(f["name"], e.name);
        EXPECT_EQ(f["expr"], e.text);
        EXPECT_EQ(f["nvars"], e.nvars);
        EXPECT_EQ(f["grid"], e.grid);
        ASSERT_EQ(f["tags"].size(), e.tags.size());
        for (std::size_t t = 0; t < e.tags.size(); ++t) {
            EXPECT_EQ(f["tags"][t], to_string(e.tags[t]));
        }
        const auto& locus = f["locus"];
        switch (e.locus.kind) {
        case Locus::Kind::Points:
            EXPECT_EQ(locus["kind"], "points");
            ASSERT_EQ(locus["points"].size(), e.locus.points.size());
            for (std::size_t p = 0; p < e.locus.points.size(); ++p) {
                EXPECT_EQ(locus["points"][p], scalar_array(e.locus.points[p]));
            }
            break;
        case Locus::Kind::Subspace:
            EXPECT_EQ(locus["kind"], "subspace");
            ASSERT_EQ(locus["zero_coords"].size(), e.locus.zero_coords.size());
            for (std::size_t c = 0; c < e.locus.zero_coords.size(); ++c) {
                EXPECT_EQ(locus["zero_coords"][c].get<int>(), e.locus.zero_coords[c] + 1);
            }
            break;
        case Locus::Kind::Oval:
            EXPECT_EQ(locus["kind"], "oval");
            EXPECT_EQ(f["epsilon"], scalar_traits<Q>::to_string(oval_epsilon()));
            break;
        }
        ASSERT_EQ(f["resolution"].size(), e.resolution.size());
        for (std::size_t c = 0; c < e.resolution.size(); ++c) {
            EXPECT_EQ(f["resolution"][c]["center"].get<std::vector<int>>(), e.resolution[c].center);
            EXPECT_EQ(f["resolution"][c]["axis"].get<int>(), e.resolution[c].axis);
        }
        // every entry parses with its declared dimension
        EXPECT_EQ(e.expr().nvars(), e.nvars);
    }
}

TEST(Corpus, Lookup)
{
    const auto& e1 = corpus_lookup("E1");
    EXPECT_EQ(e1.locus.kind, Locus::Kind::Points);
    EXPECT_TRUE(e1.locus.contains({Q(0), Q(0)}));
    EXPECT_FALSE(e1.locus.contains({Q(1, 8), Q(0)}));
    EXPECT_TRUE(corpus_lookup("E4").has(Tag::Discontinuous));
    EXPECT_FALSE(corpus_lookup("E4").has(Tag::ArcAnalytic));
    EXPECT_TRUE(corpus_lookup("E5").locus.contains({Q(0), Q(0), Q(-3, 4)}));
    EXPECT_FALSE(corpus_lookup("E5").locus.contains({Q(0), Q(1, 4), Q(0)}));
    EXPECT_THROW(corpus_lookup("E9"), Error);
}

TEST(Corpus, OvalMembership)
{
    const auto& e6 = corpus_lookup("E6");
    // g(1/2, y) = y^2 - 15/16
    const double ystar = std::sqrt(15.0) / 4.0;
    EXPECT_TRUE(e6.locus.contains_approx({0.5, ystar, 0.0}, 1e-12));
    EXPECT_TRUE(e6.locus.contains_approx({0.5, -ystar, 0.0}, 1e-12));
    EXPECT_FALSE(e6.locus.contains_approx({0.5, ystar, 0.1}, 1e-12));
    EXPECT_TRUE(e6.locus.contains({Q(0), Q(0), Q(0)}));
    EXPECT_TRUE(e6.locus.contains({Q(1), Q(0), Q(0)}));
    // the other oval, x in [2, 3], is not in the locus
    EXPECT_FALSE(e6.locus.contains({Q(2), Q(0), Q(0)}));
    EXPECT_FALSE(e6.locus.contains({Q(3, 2), Q(0), Q(0)}));

    // g_1 vanishes on the locus and not on the other oval
    const auto g1 = parse("sqrt((x-3/2)^2 + 1/100*(y^2 + x*(x-1)*(x-2)*(x-3))) + (x-3/2)", 3);
    EXPECT_NEAR(eval_point<double>(g1, {0.5, ystar, 0.0}), 0.0, 1e-15);
    EXPECT_EQ(eval_point<Q>(g1, {Q(0), Q(0), Q(0)}), 0);
    EXPECT_EQ(eval_point<Q>(g1, {Q(1), Q(0), Q(0)}), 0);
    EXPECT_EQ(eval_point<Q>(g1, {Q(2), Q(0), Q(0)}), 1);
}

TEST(Corpus, EpsilonKeepsRadicandPositive)
{
    const Q eps = oval_epsilon();
    Q best = radicand(Q(-2), Q(0), eps);
    for (int i = 0; i <= 280; ++i) {
        const Q x = Q(-2) + Q(7, 280) * i;
        for (int j = 0; j <= 60; ++j) {
            const Q y = Q(-3) + Q(1, 10) * j;
            best = std::min(best, radicand(x, y, eps));
        }
    }
    EXPECT_GT(best, 0);
    EXPECT_EQ(best, Q(9, 1600));
    // on y = 0 with u = x - 3/2: eps u^4 + (1 - 5 eps / 2) u^2 + 9 eps / 16
    std::mt19937_64 rng(61);
    for (int i = 0; i < 200; ++i) {
        const Q u = fixture::random_rational(rng);
        const Q closed = eps * u * u * u * u + (1 - Q(5, 2) * eps) * u * u + Q(9, 16) * eps;
        EXPECT_EQ(closed, radicand(u + Q(3, 2), Q(0), eps));
    }
}

TEST(Corpus, ArcAnalyticEntriesHaveNoBadArcs)
{
    std::mt19937_64 rng(62);
    for (const auto& entry : corpus_list()) {
        if (!entry.has(Tag::ArcAnalytic)) {
            continue;
        }
        SCOPED_TRACE(entry.name);
        const auto e = entry.expr();
        std::vector<std::vector<Q>> bases;
        if (entry.locus.kind == Locus::Kind::Oval) {
            bases = {{Q(0), Q(0), Q(0)}, {Q(1), Q(0), Q(0)}};
        } else if (entry.locus.kind == Locus::Kind::Subspace) {
            bases = {{Q(0), Q(0), Q(0)}, {Q(0), Q(0), Q(1, 2)}};
        } else {
            bases = entry.locus.points;
        }
        for (int trial = 0; trial < 200; ++trial) {
            const int degree = 1 + static_cast<int>(rng() % 4);
            std::vector<std::vector<double>> comps;
            const bool through_locus = trial % 2 == 0;
            const auto& base = bases[rng() % bases.size()];
            for (int i = 0; i < entry.nvars; ++i) {
                std::vector<double> c;
                c.push_back(through_locus ? base[static_cast<std::size_t>(i)].convert_to<double>()
                                          : fixture::random_rational(rng).convert_to<double>() / 4.0);
                for (int d = 1; d <= degree; ++d) {
                    c.push_back(rng() % 4 == 0 ? 0.0 : fixture::random_rational(rng).convert_to<double>());
                }
                comps.push_back(std::move(c));
            }
            const ArcSpec<double> arc(comps);
            const auto r = arc_check(e, arc, 16, 1e-9);
            EXPECT_EQ(r.kind, ArcKind::Analytic) << "trial " << trial << " base "
                                                  << dump(scalar_array(arc.basepoint()));
        }
    }
}

TEST(Corpus, StatusIsSeedInvariant)
{
    for (const auto& entry : corpus_list()) {
        SCOPED_TRACE(entry.name);
        const auto e = entry.expr();
        std::vector<D> points{D(static_cast<std::size_t>(entry.nvars), 0.0), D(static_cast<std::size_t>(entry.nvars), 0.25)};
        points[1][0] = 0.5;
        for (const auto& p : points) {
            const auto ref = classify_point<double>(e, p, config(5, 0)).status;
            for (std::uint64_t seed = 1; seed < 5; ++seed) {
                EXPECT_EQ(classify_point<double>(e, p, config(5, seed)).status, ref);
            }
        }
    }
}

TEST(Corpus, OvalLocusIsDetected)
{
    const auto e = corpus_lookup("E6").expr();
    const double ystar = std::sqrt(15.0) / 4.0;
    for (const D& p : {D{0.5, ystar, 0.0}, D{0.5, -ystar, 0.0}, D{0.0, 0.0, 0.0}, D{1.0, 0.0, 0.0}}) {
        EXPECT_EQ(classify_point<double>(e, p, config(6)).status, Status::NonAnalytic) << p[0] << "," << p[1];
    }
    for (const D& p : {D{2.0, 0.0, 0.0}, D{0.5, 0.0, 0.0}, D{0.5, ystar, 0.25}}) {
        EXPECT_EQ(classify_point<double>(e, p, config(6)).status, Status::AnalyticUpTo) << p[0] << "," << p[1];
    }
}

TEST(Corpus, EveryEntryReproducesItsLocus)
{
    for (const auto& entry : corpus_list()) {
        const auto run = corpus_run(entry, config(6));
        EXPECT_TRUE(run.ok()) << dump(to_json(run));
        EXPECT_EQ(run.observed, run.expected) << entry.name;
        EXPECT_FALSE(run.expected.empty()) << entry.name;
    }
}
