// Command-line front end for the bellshape library.

#include "bellshape/bellshape.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace bellshape;
using io::fmt;
using io::json;

enum Exit { ok = 0, rejected = 2, numerical = 3, bad_config = 64 };

struct Global {
    double tol = 1e-9;
    unsigned threads = 0;
    std::string out;
    std::string format = "csv";
};

struct Input {
    std::string file;
    std::string text;
    std::string family;

    json load() const {
        if (!family.empty()) {
            if (!file.empty() || !text.empty()) throw StructuralError("--family cannot be combined with --input or --json");
            return json{{"family", family}};
        }
        if (!file.empty() && !text.empty()) throw StructuralError("give --input or --json, not both");
        std::string src = text;
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw StructuralError("cannot read input file " + file);
            std::stringstream ss;
            ss << in.rdbuf();
            src = ss.str();
        }
        if (src.empty()) throw StructuralError("no input: use --input FILE or --json TEXT");
        try {
            return json::parse(src);
        } catch (const json::parse_error& e) {
            throw StructuralError(std::string("input is not valid JSON: ") + e.what());
        }
    }
};

class BadConfig : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_input(CLI::App* sub, Input& in, bool family) {
    sub->add_option("--input,-i", in.file, "JSON input file");
    sub->add_option("--json", in.text, "JSON input given inline");
    if (family) sub->add_option("--family", in.family, "shorthand for {\"family\": NAME}");
}

// Frequencies from an explicit list or a log-spaced grid "lo:hi:count".
std::vector<double> frequency_list(const std::vector<double>& xs, const std::string& grid) {
    if (!xs.empty()) return xs;
    if (grid.empty()) return {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
    double lo = 0, hi = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(grid);
    if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !(lo > 0) || !(hi >= lo))
        throw BadConfig("--grid expects lo:hi:count with 0 < lo <= hi");
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return g;
}

// Uniform grid "lo:hi:count".
std::vector<double> uniform_grid(const std::string& spec) {
    double lo = 0, hi = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2 || !(hi > lo))
        throw BadConfig("--grid expects lo:hi:count with lo < hi and count >= 2");
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
    return g;
}

int cmd_validate(const Global& g, const Input& in, long k_max, std::ostream& os) {
    const auto p = io::params_from_json(in.load());
    json r;
    bool accept = p.a >= 0.0;
    const auto lv = validate_level_crossing(p.phi, -k_max, k_max);
    r["level_crossing"] = {{"accept", lv.accept}, {"reason", lv.reason}};
    if (!lv.accept) r["level_crossing"].update({{"level", lv.level}, {"witness", {lv.witness_lo, lv.witness_hi}}});
    accept = accept && lv.accept;
    const auto integ = validate_integrability(p.phi);
    r["integrability"] = {{"finite", integ.finite}, {"value", integ.value}};
    accept = accept && integ.finite;
    if (accept) {
        const auto reg = check_regularity(p, g.tol);
        r["regularity"] = {{"pass", reg.pass}, {"reason", reg.reason}, {"integral", reg.integral}, {"limit", reg.limit}, {"label", reg.label}};
        accept = reg.pass;
    }
    r["ggc"] = is_ggc(p.phi);
    r["verdict"] = accept ? "accept" : "reject";
    os << r.dump(2) << '\n';
    return accept ? ok : rejected;
}

int cmd_transform(const Global& g, const Input& in, const std::vector<double>& xs, const std::string& grid, std::ostream& os) {
    const auto p = io::params_from_json(in.load());
    validate_params(p);
    const auto xi = frequency_list(xs, grid);
    const auto vals = parallel_map(xi.size(), [&](std::size_t i) { return log_transform(p, xi[i], g.tol); });
    if (g.format == "json") {
        json a = json::array();
        for (const auto& v : vals) {
            const auto z = std::exp(std::complex<double>(v.re_log, v.im_log));
            a.push_back({{"xi", v.xi}, {"re_log", v.re_log}, {"im_log", v.im_log}, {"re_phi", z.real()}, {"im_phi", z.imag()}});
        }
        os << a.dump(2) << '\n';
        return ok;
    }
    io::CsvWriter w(os, {"xi", "re_log", "im_log", "re_phi", "im_phi"});
    for (const auto& v : vals) {
        const auto z = std::exp(std::complex<double>(v.re_log, v.im_log));
        w.row({fmt(v.xi), fmt(v.re_log), fmt(v.im_log), fmt(z.real()), fmt(z.imag())});
    }
    return ok;
}

int cmd_factor(const Global& g, const Input& in, long k_max, std::ostream& os) {
    const auto p = io::params_from_json(in.load());
    const auto f = factorise(p, k_max, g.tol);
    json r{{"pff", io::pff_to_json(f.pff)}, {"amcm", io::params_to_json(f.amcm_params)}, {"residual", f.residual},
           {"b_correction", f.b_correction}, {"c_correction", f.c_correction}};
    if (g.format == "csv") {
        io::CsvWriter w(os, {"xi", "residual"});
        for (const auto& pt : f.profile) w.row({fmt(pt.xi), fmt(pt.residual)});
        return ok;
    }
    os << r.dump(2) << '\n';
    return ok;
}

int cmd_pff(const Global& g, const Input& in, const std::string& grid, std::ostream& os) {
    const auto h = io::pff_from_json(in.load());
    const auto s = pff_sample(h, uniform_grid(grid.empty() ? "-10:10:201" : grid), g.tol);
    if (g.format == "json") {
        os << json{{"x", s.x}, {"h", s.h}, {"mass", s.mass}}.dump(2) << '\n';
        return ok;
    }
    io::CsvWriter w(os, {"x", "h"});
    for (std::size_t i = 0; i < s.x.size(); ++i) w.row({fmt(s.x[i]), fmt(s.h[i])});
    return ok;
}

int cmd_amcm(const Global& g, const Input& in, std::vector<double> xs, const std::vector<double>& xis, std::ostream& os) {
    const auto m = io::amcm_from_json(in.load());
    if (xs.empty()) xs = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    const auto xi = frequency_list(xis, "");
    if (g.format == "json") {
        json gx = json::array(), tx = json::array();
        for (double x : xs) gx.push_back({{"x", x}, {"g", amcm_eval(m, x)}});
        for (double v : xi) {
            const auto z = amcm_transform(m, v);
            tx.push_back({{"xi", v}, {"re", z.real()}, {"im", z.imag()}});
        }
        os << json{{"values", gx}, {"transform", tx}}.dump(2) << '\n';
        return ok;
    }
    io::CsvWriter w(os, {"quantity", "arg", "re", "im"});
    for (double x : xs) w.row({"g", fmt(x), fmt(amcm_eval(m, x)), fmt(0.0)});
    for (double v : xi) {
        const auto z = amcm_transform(m, v);
        w.row({"transform", fmt(v), fmt(z.real()), fmt(z.imag())});
    }
    return ok;
}

void check_order(int n, int cap) {
    if (n < 0 || n > cap) throw BadConfig("order must lie in [0, " + std::to_string(cap) + "]");
}

int cmd_zeros(const Global& g, const Input& in, int n, int n_max, bool figure3, bool limit, std::ostream& os) {
    const auto f = io::density_from_json(in.load());
    if (figure3) {
        check_order(n_max, default_derivative_cap);
        const auto rows = figure3_data(f, n_max);
        if (g.format == "json") {
            json a = json::array();
            for (const auto& r : rows) a.push_back({{"n", r.n}, {"k", r.k}, {"alpha", r.alpha}});
            os << a.dump(2) << '\n';
            return ok;
        }
        io::CsvWriter w(os, {"n", "k", "alpha"});
        for (const auto& r : rows) w.row({std::to_string(r.n), std::to_string(r.k), fmt(r.alpha)});
        return ok;
    }
    if (limit) {
        LimitMeasure lim;
        const auto core = f.kind();
        if (f.name() == "cauchy") lim = LimitMeasure::cauchy();
        else if (core == ExactDensity::Kind::Levy) lim = LimitMeasure::levy();
        else if (core != ExactDensity::Kind::Gaussian) throw Unsupported("--limit: no known limit measure for this family");
        std::vector<int> ns{10, 20, 40};
        for (int v : ns) check_order(v, default_derivative_cap);
        const auto ms = parallel_map(ns.size(), [&](std::size_t i) { return zero_measure(f, ns[i]); });
        auto tests = default_tests(lim);
        if (core == ExactDensity::Kind::Gaussian) tests = {{0.2, 0.45}, {-0.45, -0.2}};
        const auto rows = compare_to_limit(ms, lim, tests);
        json r = json::array();
        for (const auto& row : rows)
            r.push_back({{"test", {{"lo", row.test.lo}, {"hi", row.test.hi}}}, {"n", row.n}, {"discrepancy", row.discrepancy},
                         {"limit_value", row.limit_value}, {"last_below_first", row.last_below_first}});
        json masses = json::array();
        for (const auto& m : ms) masses.push_back({{"n", m.n}, {"total_mass", m.total_mass()}, {"max_abs_location", m.max_abs_location()}});
        os << json{{"tests", r}, {"measures", masses}, {"label", "trend diagnostics"}}.dump(2) << '\n';
        return ok;
    }
    check_order(n, default_derivative_cap);
    const auto t = sign_changes(f, n);
    if (g.format == "json") {
        json z = json::array(), tz = json::array();
        for (const auto& e : t.zeros) z.push_back({{"lo", e.lo}, {"hi", e.hi}, {"multiplicity", e.multiplicity}});
        for (const auto& e : t.touches) tz.push_back({{"lo", e.lo}, {"hi", e.hi}, {"multiplicity", e.multiplicity}});
        os << json{{"n", t.n}, {"count", t.count}, {"zeros", z}, {"touches", tz}}.dump(2) << '\n';
        return ok;
    }
    io::CsvWriter w(os, {"n", "k", "zero_lo", "zero_hi"});
    int k = 1;
    for (const auto& e : t.zeros) w.row({std::to_string(t.n), std::to_string(k++), fmt(e.lo), fmt(e.hi)});
    return ok;
}

int cmd_fp_scan(const Global& g, const Input& in, const std::vector<std::string>& ps, int n_max, std::ostream& os) {
    check_order(n_max, default_derivative_cap);
    const auto f = io::density_from_json(in.load());
    if (ps.empty()) throw BadConfig("fp-scan needs at least one --p");
    std::vector<exact::ParsedRational> parsed;
    for (const auto& p : ps) parsed.push_back(exact::parse_rational_pi(p));
    const auto res = fp_scan(f, parsed, n_max);
    if (g.format == "json") {
        json a = json::array();
        for (const auto& r : res)
            a.push_back({{"p", r.p_text}, {"verdict", r.verdict.consistent ? "consistent" : "violated"}, {"n_max", r.verdict.n_max},
                         {"violating_n", r.verdict.violating_n}, {"count", r.verdict.count}, {"label", r.verdict.label}});
        os << a.dump(2) << '\n';
        return ok;
    }
    io::CsvWriter w(os, {"p", "verdict", "violating_n"});
    for (const auto& r : res)
        w.row({r.p_text, r.verdict.consistent ? "consistent" : "violated", r.verdict.consistent ? "" : std::to_string(r.verdict.violating_n)});
    return ok;
}

int cmd_post(const Global& g, const Input& in, const std::vector<double>& xis, const std::vector<int>& ns, std::ostream& os) {
    const auto f = io::density_from_json(in.load());
    const std::vector<double> xi = xis.empty() ? std::vector<double>{1.0} : xis;
    const std::vector<int> nn = ns.empty() ? std::vector<int>{25, 50, 100, 200} : ns;
    for (int n : nn)
        if (n < 1 || n > post_order_cap) throw BadConfig("--n must lie in [1, " + std::to_string(post_order_cap) + "]");
    struct Row {
        int n;
        double xi;
        std::complex<double> v, target;
        bool has_target;
    };
    const auto rows = parallel_map(nn.size() * xi.size(), [&](std::size_t i) {
        const int n = nn[i / xi.size()];
        const double x = xi[i % xi.size()];
        Row r{n, x, post_approximant(f, x, n, std::min(g.tol, 1e-10)), {}, false};
        try {
            r.target = reference_transform(f, x);
            r.has_target = true;
        } catch (const Unsupported&) {
        }
        return r;
    });
    io::CsvWriter w(os, {"n", "xi", "re", "im", "target_re", "target_im", "rel_err"});
    for (const auto& r : rows) {
        const std::string tr = r.has_target ? fmt(r.target.real()) : "", ti = r.has_target ? fmt(r.target.imag()) : "";
        const std::string re = r.has_target ? fmt(std::abs(r.v - r.target) / std::abs(r.target)) : "";
        w.row({std::to_string(r.n), fmt(r.xi), fmt(r.v.real()), fmt(r.v.imag()), tr, ti, re});
    }
    return ok;
}

int cmd_whale(const Global& g, const Input& in, int n_max, std::ostream& os) {
    check_order(n_max, default_derivative_cap);
    const auto spec = io::whale_from_json(in.load());
    const auto f = whale_build(spec);
    const auto v = whale_certify(f, spec.order(), n_max);
    if (g.format == "csv") {
        io::CsvWriter w(os, {"n", "count", "zero_lo", "zero_hi"});
        for (const auto& r : v.rows) {
            if (r.zeros.empty()) w.row({std::to_string(r.n), std::to_string(r.count), "", ""});
            for (const auto& z : r.zeros) w.row({std::to_string(r.n), std::to_string(r.count), fmt(z.lo), fmt(z.hi)});
        }
        return ok;
    }
    json rows = json::array();
    for (const auto& r : v.rows) {
        json z = json::array();
        for (const auto& e : r.zeros) z.push_back({{"lo", e.lo}, {"hi", e.hi}});
        rows.push_back({{"n", r.n}, {"count", r.count}, {"zeros", z}});
    }
    os << json{{"m", spec.order()}, {"density", io::density_to_json(f)}, {"pass", v.pass}, {"boundary_flat", v.boundary_flat},
               {"first_bad_n", v.first_bad_n}, {"rows", rows}}
              .dump(2)
       << '\n';
    return ok;
}

void report(const char* kind, const std::string& msg) { std::cerr << json{{"error", kind}, {"message", msg}}.dump() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell-shaped functions: transforms, factorisation, exact derivative certificates"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--tol", g.tol, "relative tolerance in (0, 1e-2]");
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_option("--out,-o", g.out, "output file (default stdout)");
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    Input in;
    long k_max = 50;
    std::vector<double> xs, xis;
    std::string grid;
    int n = 3, n_max = 12;
    bool figure3 = false, limit = false;
    std::vector<std::string> ps;
    std::vector<int> ns;

    auto* validate = app.add_subcommand("validate", "check the conditions on (a, b, c, phi)");
    add_input(validate, in, false);
    validate->add_option("--k-max", k_max, "levels checked: |k| <= k_max");

    auto* transform_cmd = app.add_subcommand("transform", "evaluate Phi(xi) and its logarithm");
    add_input(transform_cmd, in, false);
    transform_cmd->add_option("--xi", xis, "frequencies");
    transform_cmd->add_option("--grid", grid, "log-spaced frequencies lo:hi:count");

    auto* factor_cmd = app.add_subcommand("factor", "split into PFF and AM-CM factors");
    add_input(factor_cmd, in, false);
    factor_cmd->add_option("--k-max", k_max, "crossing levels kept");

    auto* pff_cmd = app.add_subcommand("pff", "sample a Polya frequency density");
    add_input(pff_cmd, in, false);
    pff_cmd->add_option("--grid", grid, "uniform x grid lo:hi:count");

    auto* amcm_cmd = app.add_subcommand("amcm", "evaluate an AM-CM function and its transform");
    add_input(amcm_cmd, in, false);
    amcm_cmd->add_option("--x", xs, "evaluation points");
    amcm_cmd->add_option("--xi", xis, "frequencies");

    auto* zeros = app.add_subcommand("zeros", "certified zeros of f^(n)");
    add_input(zeros, in, true);
    zeros->add_option("--n", n, "derivative order");
    zeros->add_option("--n-max", n_max, "largest order for --figure3");
    zeros->add_flag("--figure3", figure3, "scaled zeros for n = 1..n_max");
    zeros->add_flag("--limit", limit, "convergence report against the limit measure");

    auto* fps = app.add_subcommand("fp-scan", "bell-shape verdicts for f + p f'");
    add_input(fps, in, true);
    fps->add_option("--p", ps, "values of p: r, r/pi or r/pi^2");
    fps->add_option("--n-max", n_max, "largest order");

    auto* post = app.add_subcommand("post", "Post-inversion approximants");
    add_input(post, in, true);
    post->add_option("--xi", xis, "frequencies");
    post->add_option("--n", ns, "orders");

    auto* whale = app.add_subcommand("whale", "build and certify a whale-shaped function");
    add_input(whale, in, false);
    whale->add_option("--n-max", n_max, "largest order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report("config", e.what());
        return bad_config;
    }

    std::ostringstream os;
    int code = ok;
    try {
        if (!(g.tol > 0.0 && g.tol <= 1e-2)) throw BadConfig("--tol must lie in (0, 1e-2]");
        if (k_max < 0) throw BadConfig("--k-max must be nonnegative");
        set_threads(g.threads);
        if (validate->parsed()) code = cmd_validate(g, in, k_max, os);
        else if (transform_cmd->parsed()) code = cmd_transform(g, in, xis, grid, os);
        else if (factor_cmd->parsed()) code = cmd_factor(g, in, k_max, os);
        else if (pff_cmd->parsed()) code = cmd_pff(g, in, grid, os);
        else if (amcm_cmd->parsed()) code = cmd_amcm(g, in, xs, xis, os);
        else if (zeros->parsed()) code = cmd_zeros(g, in, n, n_max, figure3, limit, os);
        else if (fps->parsed()) code = cmd_fp_scan(g, in, ps, n_max, os);
        else if (post->parsed()) code = cmd_post(g, in, xis, ns, os);
        else if (whale->parsed()) code = cmd_whale(g, in, n_max, os);
    } catch (const PreconditionError& e) {
        report(e.kind(), e.what());
        return rejected;
    } catch (const NumericalError& e) {
        report(e.kind(), e.what());
        return numerical;
    } catch (const Error& e) {
        report(e.kind(), e.what());
        return bad_config;
    } catch (const BadConfig& e) {
        report("config", e.what());
        return bad_config;
    } catch (const json::exception& e) {
        report("config", e.what());
        return bad_config;
    }

    if (g.out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(g.out, std::ios::binary);
        if (!f) {
            report("config", "cannot write " + g.out);
            return bad_config;
        }
        f << os.str();
    }
    return code;
}
