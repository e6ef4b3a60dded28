// Acceptance suite: one PASS/FAIL line per criterion.
//
// Each criterion returns its verdict and a serialization of every number it
// computed. Criterion 12 reruns 1-11 on several threads and compares those
// serializations byte for byte.

#include "bellshape/bellshape.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace bellshape;
using exact::IntPoly;
using io::fmt;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string payload;
};

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
};

// Collects numbers for the payload and notes for the detail line.
class Log {
public:
    void num(const std::string& key, double v) { payload_ << key << '=' << fmt(v) << '\n'; }
    void text(const std::string& key, const std::string& v) { payload_ << key << '=' << v << '\n'; }
    void note(const std::string& s) { detail_ << (detail_.tellp() > 0 ? "; " : "") << s; }
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass_ = false;
            note("FAILED " + what);
        }
    }
    Outcome done() const { return {pass_, detail_.str(), payload_.str()}; }

private:
    std::ostringstream payload_, detail_;
    bool pass_ = true;
};

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

long double cot_l(long double x) { return std::cos(x) / std::sin(x); }

Outcome ac1() {
    Log log;
    const auto f = ExactDensity::cauchy();
    double worst_dev = 0.0, worst_width = 0.0;
    std::vector<double> gaps;
    for (int n : {10, 20, 40}) {
        const auto t = sign_changes(f, n);
        log.require(t.count == n, "count at n=" + std::to_string(n));
        if (t.count != n) continue;
        for (int k = 1; k <= n; ++k) {
            const auto& z = t.zeros[static_cast<std::size_t>(n - k)];
            const double want = static_cast<double>(cot_l(static_cast<long double>(k) * M_PIl / (n + 1)));
            worst_dev = std::max(worst_dev, std::fabs(z.mid() - want));
            worst_width = std::max(worst_width, z.hi - z.lo);
            log.num("zero_" + std::to_string(n) + "_" + std::to_string(k), z.mid());
        }
        const double alpha = t.zeros.back().mid() / n;
        gaps.push_back(std::fabs(alpha - 1.0 / M_PI));
        log.num("gap_" + std::to_string(n), gaps.back());
    }
    log.require(worst_dev <= 1e-10, "zeros within 1e-10 of cot(k pi/(n+1))");
    log.require(worst_width <= 1e-10, "enclosure width <= 1e-10");
    log.require(gaps.size() == 3 && gaps[2] <= 0.01, "|alpha_40,1 - 1/pi| <= 0.01");
    log.require(gaps.size() == 3 && gaps[1] < gaps[0] && gaps[2] < gaps[1], "gap decreasing");
    log.note("max |zero - cot| " + short_num(worst_dev) + ", max width " + short_num(worst_width));
    if (gaps.size() == 3) log.note("gaps " + short_num(gaps[0]) + ", " + short_num(gaps[1]) + ", " + short_num(gaps[2]));
    return log.done();
}

Outcome ac2() {
    Log log;
    const auto f = ExactDensity::levy();
    const double target = 4.0 / (M_PI * M_PI);
    std::vector<double> rel;
    for (int n : {10, 20, 40}) {
        const auto t = sign_changes(f, n);
        log.require(!t.zeros.empty(), "zeros at n=" + std::to_string(n));
        if (t.zeros.empty()) continue;
        const double alpha = t.zeros.back().mid() / n;
        rel.push_back(std::fabs(alpha - target) / target);
        log.num("alpha_" + std::to_string(n), alpha);
    }
    log.require(rel.size() == 3 && rel[1] < rel[0] && rel[2] < rel[1], "relative error decreasing");
    log.require(rel.size() == 3 && rel[2] <= 0.15, "relative error <= 15% at n=40");
    if (rel.size() == 3) log.note("rel err " + short_num(rel[0]) + ", " + short_num(rel[1]) + ", " + short_num(rel[2]));
    return log.done();
}

Outcome ac3() {
    Log log;
    constexpr int n_max = 12;
    auto scan = [&](const ExactDensity& f, const std::vector<std::string>& ps, bool want_consistent) {
        std::vector<exact::ParsedRational> parsed;
        for (const auto& p : ps) parsed.push_back(exact::parse_rational_pi(p));
        for (const auto& r : fp_scan(f, parsed, n_max)) {
            const std::string key = f.name() + " p=" + r.p_text;
            log.text(key, r.verdict.label);
            log.note(key + ": " + r.verdict.label);
            log.require(r.verdict.consistent == want_consistent, key + (want_consistent ? " consistent" : " violated") + " by n=12");
        }
    };
    scan(ExactDensity::cauchy(), {"1/pi", "1/2/pi"}, true);
    scan(ExactDensity::cauchy(), {"0.25", "0.5"}, false);
    scan(ExactDensity::levy(), {"4/pi^2"}, true);
    scan(ExactDensity::levy(), {"0.3"}, false);
    return log.done();
}

Outcome ac4() {
    Log log;
    const auto two = ExactDensity::rational_product({IntPoly{1, 0, 1}, IntPoly{4, 0, 1}}, "two-factor");
    const auto three = ExactDensity::rational_product({IntPoly{1, 0, 1}, IntPoly{9, 0, 1}, IntPoly{16, 0, 1}}, "three-factor");
    const auto a = certify_bellshape(two, 25), b = certify_bellshape(three, 25);
    log.text("two", a.label);
    log.text("three", b.label);
    log.note("two-factor: " + a.label);
    log.note("three-factor: " + b.label);
    log.require(a.consistent, "two-factor consistent to 25");
    log.require(!b.consistent, "three-factor violated by n=25");
    return log.done();
}

Outcome ac5() {
    Log log;
    double worst_neg = 0.0, worst_mass = 0.0, worst_id = 0.0;
    std::string failure;
    for (const auto& f : {ExactDensity::gaussian(), ExactDensity::cauchy()}) {
        struct Row {
            std::vector<double> v;
            std::string error;
        };
        const auto rows = parallel_map(20, [&](std::size_t i) {
            const int n = static_cast<int>(i) + 1;
            Row r;
            GnCheck c;
            try {
                gn_build(f, n, 1e-9, &c);
            } catch (const NumericalError& e) {
                r.error = f.name() + " n=" + std::to_string(n) + ": " + e.what();
                return r;
            }
            r.v.push_back(-c.grid_min / c.grid_max);
            r.v.push_back(std::fabs(c.mass - c.target_mass) / c.target_mass);
            for (double xi : {0.5, 1.0, 2.0}) r.v.push_back(verify_factor_identity(f, n, xi));
            return r;
        });
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (!r.error.empty()) {
                if (failure.empty()) failure = r.error;
                log.text(f.name() + "_" + std::to_string(i + 1), r.error);
                continue;
            }
            worst_neg = std::max(worst_neg, r.v[0]);
            worst_mass = std::max(worst_mass, r.v[1]);
            for (std::size_t j = 2; j < r.v.size(); ++j) worst_id = std::max(worst_id, r.v[j]);
            for (std::size_t j = 0; j < r.v.size(); ++j) log.num(f.name() + "_" + std::to_string(i + 1) + "_" + std::to_string(j), r.v[j]);
        }
    }
    log.require(failure.empty(), "g_n construction (" + failure + ")");
    log.require(worst_neg <= 1e-9, "grid-min g_n >= -1e-9 max");
    log.require(worst_mass <= 1e-6, "mass within 1e-6");
    log.require(worst_id <= 1e-6, "factor identity residual <= 1e-6");
    log.note("worst -min/max " + short_num(std::max(worst_neg, 0.0)) + ", mass err " + short_num(worst_mass) + ", identity " + short_num(worst_id));
    return log.done();
}

Outcome ac6() {
    Log log;
    const std::vector<int> ns{25, 50, 100, 200};
    const auto f = ExactDensity::cauchy();
    const double want = M_PI / M_E;
    const auto errs = parallel_map(ns.size(), [&](std::size_t i) { return std::abs(post_approximant(f, 1.0, ns[i]) - want) / want; });
    bool decreasing = true;
    for (std::size_t i = 0; i < errs.size(); ++i) {
        log.num("err_" + std::to_string(ns[i]), errs[i]);
        if (i > 0 && !(errs[i] < errs[i - 1])) decreasing = false;
    }
    log.require(decreasing, "strictly decreasing");
    log.require(errs.back() < 0.05, "< 5% at n=200");
    log.note("rel err " + short_num(errs[0]) + ", " + short_num(errs[1]) + ", " + short_num(errs[2]) + ", " + short_num(errs[3]));
    return log.done();
}

Outcome ac7() {
    Log log;
    double rc = INFINITY, rg = INFINITY;
    try {
        rc = factorise(cauchy_params(), 50, 1e-6).residual;
    } catch (const NumericalError& e) {
        rc = e.achieved();
    }
    try {
        rg = factorise(gaussian_params(1.0), 50, 1e-10).residual;
    } catch (const NumericalError& e) {
        rg = e.achieved();
    }
    log.num("cauchy", rc);
    log.num("gaussian", rg);
    log.require(rc <= 1e-6, "Cauchy residual <= 1e-6");
    log.require(rg <= 1e-10, "Gaussian residual <= 1e-10");
    log.note("Cauchy residual " + short_num(rc) + ", Gaussian " + short_num(rg));
    return log.done();
}

Outcome ac8() {
    Log log;
    const auto p = cauchy_params();
    log.require(std::fabs(p.c - (std::log(M_PI) - 2.0 / M_PI)) < 1e-15, "c = log pi - 2/pi");
    double worst = 0.0;
    for (double xi : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double want = M_PI * std::exp(-std::fabs(xi));
        const double e = std::abs(transform(p, xi) - want) / want;
        log.num("xi_" + fmt(xi), e);
        worst = std::max(worst, e);
    }
    log.require(worst <= 1e-6, "relative error <= 1e-6");
    log.note("max rel err " + short_num(worst));
    return log.done();
}

Outcome ac9() {
    Log log;
    std::mt19937_64 rng(20240611);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
    std::vector<double> grid;
    for (int i = 0; i <= 600; ++i) grid.push_back(-15.0 + 30.0 * i / 600.0);
    struct Trial {
        PolyaFrequency h;
        StepTest t;
    };
    std::vector<Trial> trials;
    for (int trial = 0; trial < 100; ++trial) {
        Trial tr;
        const int atoms = pick(trial % 4 == 0 ? 0 : 1, 3);
        for (int k = 0; k < atoms; ++k) tr.h.atoms.push_back((rng() & 1 ? 1.0 : -1.0) * uniform(0.1, 1.5));
        if (atoms == 0 || trial % 3 == 0) tr.h.a = uniform(0.05, 0.5);
        tr.h.b = uniform(-0.5, 0.5);
        const int pieces = pick(2, 7);
        double x = uniform(-8.0, -4.0);
        for (int k = 0; k + 1 < pieces; ++k) {
            tr.t.breaks.push_back(x);
            x += uniform(0.3, 3.0);
        }
        for (int k = 0; k < pieces; ++k) tr.t.values.push_back(uniform(-1.0, 1.0));
        trials.push_back(std::move(tr));
    }
    const auto res = parallel_map(trials.size(), [&](std::size_t i) { return variation_diminishing_check(trials[i].h, trials[i].t, grid); });
    int bad = 0, reduced = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        log.text("trial_" + std::to_string(i), std::to_string(res[i].before) + "->" + std::to_string(res[i].after));
        if (res[i].after > res[i].before) ++bad;
        if (res[i].after < res[i].before) ++reduced;
    }
    log.require(bad == 0, "after <= before in every trial");
    log.note(std::to_string(res.size()) + " trials, " + std::to_string(bad) + " increases, " + std::to_string(reduced) + " strict decreases");
    return log.done();
}

Outcome ac10() {
    Log log;
    const std::vector<WhaleSpec> specs{
        WhaleSpec{{}, {{mpq_class(1), mpq_class(1)}}},
        WhaleSpec{{mpq_class(1)}, {{mpq_class(2), mpq_class(1)}}},
        WhaleSpec{{mpq_class(1), mpq_class(1, 2)}, {{mpq_class(3), mpq_class(1)}}},
    };
    double worst = 0.0;
    for (const auto& s : specs) {
        const int m = s.order();
        const auto v = whale_certify(whale_build(s), m, 10);
        std::string counts;
        for (const auto& r : v.rows) counts += std::to_string(r.count) + (r.n < 10 ? "," : "");
        log.text("m" + std::to_string(m), counts);
        log.require(v.pass, "m=" + std::to_string(m) + " profile min{n, m}");
        log.note("m=" + std::to_string(m) + " counts " + counts);
        if (m == 1)
            for (const auto& r : v.rows) {
                if (r.n == 0 || r.zeros.size() != 1) continue;
                const double d = std::fabs(r.zeros[0].mid() - r.n * std::log(2.0));
                worst = std::max({worst, d, r.zeros[0].hi - r.zeros[0].lo});
                log.num("zero_" + std::to_string(r.n), r.zeros[0].mid());
            }
    }
    log.require(worst <= 1e-10, "m=1 zero at n ln 2 within 1e-10");
    log.note("max |zero - n ln 2| " + short_num(worst));
    return log.done();
}

Outcome ac11() {
    Log log;
    constexpr double tol = 1e-9;
    const auto grid = factor_grid();
    double worst = 0.0;
    for (const auto& p : {cauchy_params(), gaussian_params(1.0)})
        for (int n : {2, 3, 5}) {
            const auto root = convolution_root(p, n);
            const auto errs = parallel_map(grid.size(), [&](std::size_t i) {
                const auto full = transform(p, grid[i], tol);
                return std::abs(std::pow(transform(root, grid[i], tol), n) - full) / std::abs(full);
            });
            for (double e : errs) {
                worst = std::max(worst, e);
                log.num("root", e);
            }
        }
    log.require(worst <= 10 * tol, "transform(root)^n within 10 tol");
    log.note("max rel err " + short_num(worst));
    return log.done();
}

struct Run {
    std::vector<Outcome> outcomes;
    std::vector<double> seconds;
};

Run run_all(const std::vector<Criterion>& cs, bool quiet) {
    Run r;
    for (const auto& c : cs) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
            o.payload = o.detail;
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s > c.budget_s) {
            o.pass = false;
            o.detail += "; FAILED runtime budget " + short_num(c.budget_s) + " s";
        }
        if (!quiet) {
            std::printf("AC%-2d %s  %s (%.2f s): %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, s, o.detail.c_str());
            std::fflush(stdout);
        }
        r.outcomes.push_back(std::move(o));
        r.seconds.push_back(s);
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "Cauchy zero limits", 60, ac1},
        {2, "Levy zero limits", 120, ac2},
        {3, "f + p f' iff-scan", 120, ac3},
        {4, "product examples", 120, ac4},
        {5, "g_n identities", 120, ac5},
        {6, "Post inversion", 300, ac6},
        {7, "factorisation roundtrip", 60, ac7},
        {8, "transform closed form", 10, ac8},
        {9, "variation diminishing", 60, ac9},
        {10, "whale profile", 30, ac10},
        {11, "convolution root", 10, ac11},
    };
    std::vector<Criterion> selected;
    bool determinism = true;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id == 12) continue;
        for (const auto& c : all)
            if (c.id == id) selected.push_back(c);
    }
    if (selected.empty()) selected = all;
    else determinism = false;
    for (int i = 1; i < argc; ++i)
        if (std::atoi(argv[i]) == 12) determinism = true;

    set_threads(1);
    const auto serial = run_all(selected, false);
    bool ok = true;
    for (const auto& o : serial.outcomes) ok = ok && o.pass;

    if (determinism) {
        const unsigned wide = std::max(4u, std::thread::hardware_concurrency());
        set_threads(wide);
        const auto t0 = std::chrono::steady_clock::now();
        const auto parallel = run_all(selected, true);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::vector<int> differing;
        for (std::size_t i = 0; i < selected.size(); ++i)
            if (serial.outcomes[i].payload != parallel.outcomes[i].payload) differing.push_back(selected[i].id);
        std::string detail = "threads 1 vs " + std::to_string(wide) + ", " + std::to_string(selected.size()) + " criteria compared";
        if (!differing.empty()) {
            detail += "; FAILED outputs differ for";
            for (int id : differing) detail += " AC" + std::to_string(id);
        }
        std::printf("AC12 %s  determinism (%.2f s): %s\n", differing.empty() ? "PASS" : "FAIL", s, detail.c_str());
        ok = ok && differing.empty();
    }
    return ok ? 0 : 1;
}
