// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <arcan/arcan.hpp>

using namespace arcan;
using Q = Rational;
using D = std::vector<double>;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail)
{
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

ClassifyConfig config(int k_max, double tol = 1e-7, std::uint64_t seed = 0)
{
    ClassifyConfig c;
    c.k_max = k_max;
    c.tol = tol;
    c.seed = seed;
    return c;
}

Q rand_q(std::mt19937_64& rng)
{
    return Q(static_cast<long long>(rng() % 19) - 9, static_cast<long long>(rng() % 8) + 1);
}

double rand_unit(std::mt19937_64& rng) { return std::ldexp(static_cast<double>(rng() >> 11), -52) - 1.0; }

template <typename S>
HomoPoly<S> rand_poly(std::mt19937_64& rng, int n, int k)
{
    std::vector<S> cs;
    for (std::size_t j = 0; j < dim_homog(n, k); ++j) {
        if constexpr (scalar_traits<S>::exact) {
            cs.push_back(rand_q(rng));
        } else {
            cs.push_back(rand_unit(rng));
        }
    }
    return HomoPoly<S>(n, k, cs);
}

// P(v) straight from the exponent vectors, independent of the library's evaluation
Q direct_eval(const HomoPoly<Q>& p, const std::vector<Q>& v)
{
    Q acc(0);
    const auto& basis = monomials(p.nvars(), p.degree());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        Q m = p.coeffs()[j];
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (int e = 0; e < basis[j][i]; ++e) {
                m *= v[i];
            }
        }
        acc += m;
    }
    return acc;
}

void identities()
{
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    int fd_bad = 0, interp_bad = 0, euler_bad = 0;
    std::map<std::pair<int, int>, NodeSet<Q>> nodes;
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const int k = static_cast<int>(rng() % 7);
        const auto p = rand_poly<Q>(rng, n, k);
        std::vector<Q> a, v;
        for (int i = 0; i < n; ++i) {
            a.push_back(rand_q(rng));
            v.push_back(rand_q(rng));
        }
        fd_bad += fd_reconstruct(p, std::span<const Q>(a), std::span<const Q>(v)) != direct_eval(p, v);
        euler_bad += euler_check(p, std::span<const Q>(v)) != 0;
        auto it = nodes.find({n, k});
        if (it == nodes.end()) {
            it = nodes.emplace(std::make_pair(n, k), sample_nodes<Q>(n, k, mix_seed(1001, 16 * n + k), 1e6)).first;
        }
        interp_bad += interp_fit(interp_values(p, it->second), it->second).coeffs() != p.coeffs();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(1, fd_bad == 0 && interp_bad == 0 && euler_bad == 0 && secs < 60.0,
        "rational identity suite, 1000 cases, zero residual, under 60 s",
        "fd mismatches " + std::to_string(fd_bad) + ", interpolation mismatches " + std::to_string(interp_bad)
            + ", nonzero Euler residuals " + std::to_string(euler_bad) + ", " + fmt("%.2f s", secs));
}

void corpus_loci()
{
    std::string detail;
    bool ok = true;
    auto check = [&](const std::string& name, const std::string& grid_text) {
        const auto& entry = corpus_lookup(name);
        const auto grid = GridSpec::parse(grid_text, entry.nvars);
        int fp = 0, fn = 0, inc = 0, flagged = 0;
        scan_region<double>(entry.expr(), grid, config(6), 1, [&](std::size_t i, const Verdict<double>& v) {
            const auto p = grid.point(i);
            const bool expected = p[0] == 0 && p[1] == 0;
            const bool hit = v.status == Status::NonAnalytic;
            flagged += hit;
            inc += v.status == Status::Inconclusive;
            fp += hit && !expected;
            fn += !hit && expected;
        });
        ok = ok && fp == 0 && fn == 0 && inc == 0 && flagged > 0;
        detail += name + " " + std::to_string(flagged) + "/" + std::to_string(grid.size()) + " flagged fp "
            + std::to_string(fp) + " fn " + std::to_string(fn) + "; ";
    };
    for (const char* name : {"E1", "E2", "E3"}) {
        check(name, "x:-1:1:1/8;y:-1:1:1/8");
    }
    check("E5", "x:-1:1:1/4;y:-1:1:1/4;z:-1:1:1/4");
    report(2, ok, "corpus loci on grids, k_max 6, tol 1e-7", detail);
}

void discontinuity()
{
    const auto r = arc_check(corpus_lookup("E4").expr(), parse_arc<double>("t, t"), 16, 1e-12);
    const double m = r.mismatch.value_or(-1.0);
    report(3, r.kind == ArcKind::RemovableMismatch && std::fabs(m - 0.5) <= 1e-12,
        "E4 along (t,t) is a removable mismatch of 1/2", std::string(to_string(r.kind)) + fmt(", mismatch %.17g", m));
}

void blowup_resolution()
{
    const auto e = corpus_lookup("E1").expr();
    const auto chart = make_chart(2, {1, 2}, 1);
    std::vector<D> pts;
    for (int i = 0; i < 12; ++i) {
        pts.push_back({0.0, -2.0 + 4.0 * i / 11.0});
    }
    int analytic = 0;
    for (const auto& v : classify_pullback(e, chart, pts, config(6))) {
        analytic += v.status == Status::AnalyticUpTo;
    }
    const auto pb = pullback(e, chart);
    report(4, analytic >= 10 && analytic == static_cast<int>(pts.size()) && pb.cancelled_power == 2,
        "E1 pulled back through the point blow-up is analytic on the divisor",
        std::to_string(analytic) + "/" + std::to_string(pts.size()) + " AnalyticUpTo(6), cancelledPower "
            + std::to_string(pb.cancelled_power) + ", " + print(pb.expr));
}

void fiber_lift()
{
    const auto r = fiber_lift_check(parse("guard(z^3/(z^2+x^2+y^2),0)"), make_chart(3, {2, 3}, 3), D{0, 0, 0}, config(4));
    report(5, r.consistent && r.nonanalytic == 16 && r.fiber_points.size() == 16,
        "fiber lift over the origin after blowing up the x-axis",
        std::string(r.consistent ? "Consistent" : "Inconsistent") + ", " + std::to_string(r.nonanalytic)
            + " of " + std::to_string(r.fiber_points.size()) + " fiber points NonAnalytic");
}

void arc_symmetry()
{
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1006);
    int violations = 0, arcs = 0, uniform_neg = 0;
    std::string detail;
    for (const auto& entry : corpus_list()) {
        const auto e = entry.expr();
        int entry_violations = 0;
        for (int a = 0; a < 100; ++a) {
            // a quarter of the arcs start on the expected locus
            std::vector<double> base(static_cast<std::size_t>(entry.nvars));
            const bool on_locus = a % 4 == 0;
            for (int i = 0; i < entry.nvars; ++i) {
                base[static_cast<std::size_t>(i)] = on_locus ? 0.0 : rand_unit(rng);
            }
            if (on_locus && entry.locus.kind == Locus::Kind::Oval) {
                base[0] = static_cast<double>(rng() % 2);
            }
            const int degree = 1 + static_cast<int>(rng() % 4);
            std::vector<std::vector<double>> comps;
            for (int i = 0; i < entry.nvars; ++i) {
                std::vector<double> c{base[static_cast<std::size_t>(i)]};
                for (int d = 1; d <= degree; ++d) {
                    c.push_back(rand_unit(rng));
                }
                comps.push_back(std::move(c));
            }
            const ArcSpec<double> arc(comps);
            const auto r = arc_symmetry_check<double>(e, arc, 64, config(4, 1e-7, mix_seed(1006, arcs)));
            ++arcs;
            uniform_neg += r.negative_analytic == 64;
            entry_violations += r.violation;
        }
        violations += entry_violations;
        detail += entry.name + " " + std::to_string(entry_violations) + "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(6, violations == 0, "arc symmetry, 100 arcs per entry, 64 samples per side, at most 2 exceptions",
        std::to_string(arcs) + " arcs, " + std::to_string(uniform_neg) + " with analytic negative side, violations: "
            + detail + fmt("%.1f s", secs));
}

void lojasiewicz()
{
    std::vector<D> samples;
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            samples.push_back({-1.0 + 2.0 * i / 99.0, -1.0 + 2.0 * j / 99.0});
        }
    }
    const std::vector<D> origin{{0.0, 0.0}};
    const auto inv = loja_estimate(parse("guard(1/(x^2+y^2),0)"), origin, samples);
    const auto e4 = loja_estimate(corpus_lookup("E4").expr(), origin, samples);
    report(7, inv.n == 2 && inv.c >= 1.0 && inv.c <= 1.01 && e4.n == 0 && e4.c >= 0.5 && e4.c <= 0.51,
        "Lojasiewicz fit on a 100x100 grid",
        "1/(x^2+y^2): N " + std::to_string(inv.n) + fmt(" C %.17g", inv.c) + "; E4: N " + std::to_string(e4.n)
            + fmt(" C %.17g", e4.c));
}

void homogeneity()
{
    std::mt19937_64 rng(1008);
    double worst = 0.0;
    int bad = 0;
    for (const auto& entry : corpus_list()) {
        const auto e = entry.expr();
        for (int t = 0; t < 100; ++t) {
            D x, v, lv;
            const double lambda = 2.0 * rand_unit(rng);
            const int k = static_cast<int>(rng() % 7);
            for (int i = 0; i < entry.nvars; ++i) {
                x.push_back(rand_unit(rng));
                v.push_back(rand_unit(rng));
                lv.push_back(lambda * v.back());
            }
            const double a = gateaux_coeff<double>(e, x, lv, k, 20).value;
            const double b = std::pow(lambda, k) * gateaux_coeff<double>(e, x, v, k, 20).value;
            const double scale = std::max(std::fabs(a), std::fabs(b));
            const double rel = scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
            worst = std::max(worst, rel);
            bad += !(rel <= 1e-9);
        }
    }
    report(8, bad == 0, "Gateaux homogeneity, 100 trials per entry, k <= 6, 1e-9 relative",
        std::to_string(bad) + " failures" + fmt(", worst relative %.3g", worst));
}

void alibaba()
{
    std::mt19937_64 rng(1009);
    int bad = 0;
    double worst_ratio = 0.0, worst_mid = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const int k = static_cast<int>(rng() % 7);
        const auto p = rand_poly<double>(rng, n, k);
        std::vector<D> ball;
        const auto dirs = sample_directions(n, 400, rng());
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const double r = std::pow(static_cast<double>(i % 20 + 1) / 20.0, 1.0 / n);
            D w;
            for (double c : dirs[i]) {
                w.push_back(r * c);
            }
            ball.push_back(std::move(w));
        }
        D a;
        for (int i = 0; i < n; ++i) {
            a.push_back(rand_unit(rng));
        }
        auto sup = [&](double factor, const D& shift) {
            double s = 0.0;
            for (const auto& w : ball) {
                D pt;
                for (int i = 0; i < n; ++i) {
                    pt.push_back(shift[static_cast<std::size_t>(i)] + factor * w[static_cast<std::size_t>(i)]);
                }
                s = std::max(s, std::fabs(p(pt)));
            }
            return s;
        };
        const double L = sup(1.0, a);
        const D zero(static_cast<std::size_t>(n), 0.0);
        const double scaled = sup(1.0 / (2.0 * std::numbers::e), zero);
        const double mid = k == 0 ? 0.0 : sup(1.0 / k, zero);
        const double mid_bound = k == 0 ? 1.0 : L * std::ldexp(1.0, k) / std::tgamma(k + 1.0);
        const auto rep = alibaba_check(p, ball, std::span<const double>(a), L);
        const bool ok = scaled <= L && mid <= mid_bound && rep.scaled_holds && rep.intermediate_holds
            && rep.scaled_max == scaled;
        bad += !ok;
        if (L > 0) {
            worst_ratio = std::max(worst_ratio, scaled / L);
        }
        if (k > 0 && mid_bound > 0) {
            worst_mid = std::max(worst_mid, mid / mid_bound);
        }
    }
    report(9, bad == 0, "Alibaba bound for 100 homogeneous polynomials, n <= 3, k <= 6",
        std::to_string(bad) + " failures" + fmt(", worst sup ratio %.3g", worst_ratio)
            + fmt(", worst intermediate ratio %.3g", worst_mid));
}

} // namespace

int main()
{
    const std::vector<std::pair<int, void (*)()>> criteria{{1, identities}, {2, corpus_loci}, {3, discontinuity},
        {4, blowup_resolution}, {5, fiber_lift}, {6, arc_symmetry}, {7, lojasiewicz}, {8, homogeneity}, {9, alibaba}};
    for (const auto& [id, run] : criteria) {
        try {
            run();
        } catch (const std::exception& e) {
            report(id, false, "aborted", e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
