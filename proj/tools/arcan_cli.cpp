#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <arcan/arcan.hpp>

namespace {

using namespace arcan;

struct RunConfig {
    std::string mode = "float";
    int k_max = 8;
    double tol = 1e-7;
    int jet_order = 0;
    std::uint64_t seed = 0;
    std::string format = "json";
    int jobs = 1;

    ClassifyConfig classify() const
    {
        ClassifyConfig c;
        c.k_max = k_max;
        c.tol = tol;
        c.jet_order = jet_order;
        c.seed = seed;
        return c;
    }
};

/// Thrown for malformed user input; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Rational> parse_point(const std::string& text)
{
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const Expr c = parse(text.substr(start, end - start), 1);
        if (c.root()->op != Op::Const) {
            throw UsageError("point coordinates must be rational constants: '" + text + "'");
        }
        out.push_back(c.root()->value);
        start = end + 1;
    }
    return out;
}

template <Scalar S>
std::vector<S> convert(const std::vector<Rational>& p)
{
    std::vector<S> out;
    for (const auto& q : p) {
        out.push_back(scalar_traits<S>::from_rational(q));
    }
    return out;
}

template <Scalar S>
int cmd_classify(const std::string& text, const std::string& point, const RunConfig& rc)
{
    const auto p = parse_point(point);
    const Expr e = parse(text, static_cast<int>(p.size()));
    if (e.nvars() != static_cast<int>(p.size())) {
        throw UsageError("point has " + std::to_string(p.size()) + " coordinates, expression has "
            + std::to_string(e.nvars()) + " variables");
    }
    std::cout << dump(to_json(classify_point<S>(e, convert<S>(p), rc.classify()))) << '\n';
    return 0;
}

template <Scalar S>
int cmd_scan(const std::string& text, const std::string& grid_text, int nvars, const RunConfig& rc)
{
    const Expr e = parse(text, nvars);
    const auto grid = GridSpec::parse(grid_text, e.nvars());
    const bool csv = rc.format == "csv";
    if (csv) {
        std::cout << csv_header(e.nvars()) << '\n';
    }
    scan_region<S>(e, grid, rc.classify(), rc.jobs, [&](std::size_t index, const Verdict<S>& v) {
        if (csv) {
            std::cout << csv_row(index, v) << '\n';
        } else {
            Json j{{"index", index}};
            j.update(to_json(v));
            std::cout << dump(j) << '\n';
        }
    });
    return 0;
}

template <Scalar S>
int cmd_arc(const std::string& text, const std::string& arc_text, const RunConfig& rc)
{
    const auto arc = parse_arc<S>(arc_text);
    const Expr e = parse(text, arc.dimension());
    if (e.nvars() != arc.dimension()) {
        throw UsageError("arc has " + std::to_string(arc.dimension()) + " components, expression has "
            + std::to_string(e.nvars()) + " variables");
    }
    std::cout << dump(to_json(arc_check(e, arc, rc.classify().effective_order(), rc.tol))) << '\n';
    return 0;
}

template <Scalar S>
int cmd_blowup(const std::string& text, const std::vector<std::string>& chart_texts,
    const std::vector<std::string>& divisor, const RunConfig& rc)
{
    std::vector<BlowupChart> charts;
    for (const auto& c : chart_texts) {
        charts.push_back(parse_chart(c));
    }
    const int n = charts.front().nvars;
    for (const auto& c : charts) {
        if (c.nvars != n) {
            throw UsageError("charts disagree on the number of variables");
        }
    }
    const Expr e = parse(text, n);
    if (e.nvars() != n) {
        throw UsageError("expression has more variables than the chart");
    }
    const auto pb = pullback(e, charts);
    Json out = to_json(pb);
    Json cj = Json::array();
    for (const auto& c : charts) {
        cj.push_back(to_json(c));
    }
    out["charts"] = std::move(cj);
    if (!divisor.empty()) {
        Json verdicts = Json::array();
        const int axis = charts.back().axis;
        for (std::size_t i = 0; i < divisor.size(); ++i) {
            const auto p = parse_point(divisor[i]);
            if (static_cast<int>(p.size()) != n || p[static_cast<std::size_t>(axis)] != 0) {
                throw UsageError("divisor point must have " + std::to_string(n) + " coordinates with "
                    + variable_name(axis, n) + " = 0");
            }
            ClassifyConfig cfg = rc.classify();
            cfg.seed = mix_seed(rc.seed, i);
            verdicts.push_back(to_json(classify_point<S>(pb.expr, convert<S>(p), cfg)));
        }
        out["divisor"] = std::move(verdicts);
    }
    std::cout << dump(out) << '\n';
    return 0;
}

template <Scalar S>
int cmd_verify(const std::string& identity, int trials, const RunConfig& rc)
{
    const auto& ids = verify_identities();
    if (std::find(ids.begin(), ids.end(), identity) == ids.end()) {
        throw UsageError("unknown identity '" + identity + "'");
    }
    const auto r = run_verify<S>(identity, trials, rc.seed);
    Json j{{"identity", r.identity}, {"mode", r.mode}, {"trials", r.trials}, {"seed", r.seed},
        {"pass", r.pass()}, {"failures", r.failures}};
    if constexpr (scalar_traits<S>::exact) {
        j["worstResidual"] = identity == "loja" ? scalar_json(r.worst_residual) : scalar_json(r.worst_exact);
    } else {
        j["worstResidual"] = scalar_json(r.worst_residual);
    }
    std::cout << dump(j) << '\n';
    return r.pass() ? 0 : 2;
}

int cmd_corpus(const std::string& name, const RunConfig& rc)
{
    std::vector<const CorpusEntry*> entries;
    if (name.empty()) {
        for (const auto& e : corpus_list()) {
            entries.push_back(&e);
        }
    } else {
        try {
            entries.push_back(&corpus_lookup(name));
        } catch (const Error& err) {
            throw UsageError(err.what());
        }
    }
    bool ok = true;
    for (const auto* entry : entries) {
        const auto run = corpus_run(*entry, rc.classify(), rc.jobs);
        ok = ok && run.ok();
        std::cout << dump(to_json(run)) << '\n';
    }
    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Non-analyticity locus detection for arc-analytic functions"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig rc;
    app.add_option("--mode", rc.mode, "Scalar mode")->check(CLI::IsMember({"float", "rational"}));
    app.add_option("--kmax", rc.k_max, "Highest Gateaux order tested")->check(CLI::PositiveNumber);
    app.add_option("--tol", rc.tol, "Relative residual tolerance")->check(CLI::NonNegativeNumber);
    app.add_option("--order", rc.jet_order, "Jet order (raised to at least 2 kmax + 4)");
    app.add_option("--seed", rc.seed, "Base seed")->envname("ARCAN_SEED");
    app.add_option("--format", rc.format, "Scan output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--jobs", rc.jobs, "Worker threads for scans")->check(CLI::PositiveNumber);

    std::string expr_text, point, grid, arc_text, identity, corpus_name;
    std::vector<std::string> charts, divisor;
    int nvars = 0;
    int trials = 100;

    auto* classify = app.add_subcommand("classify", "Classify one point");
    classify->add_option("expr", expr_text)->required();
    classify->add_option("--point", point, "Comma-separated coordinates")->required();

    auto* scan = app.add_subcommand("scan", "Classify every node of a grid");
    scan->add_option("expr", expr_text)->required();
    scan->add_option("--grid", grid, "x:lo:hi:step;y:lo:hi:step")->required();
    scan->add_option("--nvars", nvars, "Ambient dimension if larger than the expression's");

    auto* arc = app.add_subcommand("arc", "Check an expression along a polynomial arc");
    arc->add_option("expr", expr_text)->required();
    arc->add_option("arc", arc_text, "Components in t, e.g. \"t, t^2\"")->required();

    auto* blowup = app.add_subcommand("blowup", "Pull back through blow-up charts");
    blowup->add_option("expr", expr_text)->required();
    blowup->add_option("--chart", charts, "{\"n\":3,\"center\":[2,3],\"axis\":3}; repeat for a sequence")->required();
    blowup->add_option("--divisor", divisor, "Divisor point to classify; repeatable");

    auto* verify = app.add_subcommand("verify", "Randomized identity checks");
    verify->add_option("identity", identity, "binoms|alibaba|euler|interp-roundtrip|loja")->required();
    verify->add_option("--trials", trials)->check(CLI::PositiveNumber);

    auto* corpus = app.add_subcommand("corpus", "Run the example corpus");
    corpus->add_option("name", corpus_name, "Single entry, e.g. E2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const bool exact = rc.mode == "rational";
    try {
        if (*classify) {
            return exact ? cmd_classify<Rational>(expr_text, point, rc) : cmd_classify<double>(expr_text, point, rc);
        }
        if (*scan) {
            return exact ? cmd_scan<Rational>(expr_text, grid, nvars, rc) : cmd_scan<double>(expr_text, grid, nvars, rc);
        }
        if (*arc) {
            return exact ? cmd_arc<Rational>(expr_text, arc_text, rc) : cmd_arc<double>(expr_text, arc_text, rc);
        }
        if (*blowup) {
            return exact ? cmd_blowup<Rational>(expr_text, charts, divisor, rc)
                         : cmd_blowup<double>(expr_text, charts, divisor, rc);
        }
        if (*verify) {
            return exact ? cmd_verify<Rational>(identity, trials, rc) : cmd_verify<double>(identity, trials, rc);
        }
        if (*corpus) {
            if (exact) {
                throw UsageError("corpus runs are float only");
            }
            return cmd_corpus(corpus_name, rc);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
