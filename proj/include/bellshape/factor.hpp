#pragma once

// Canonical factorisation f = g * h: integer-valued non-decreasing phi_h
// (a Polya frequency function) and the AM-CM remainder phi_g = phi - phi_h.

#include "bellshape/errors.hpp"
#include "bellshape/parallel.hpp"
#include "bellshape/pff.hpp"
#include "bellshape/phi.hpp"
#include "bellshape/transform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

namespace bellshape {

struct PhiSplit {
    std::vector<double> crossings;  // finite s_k, k = -k_max..-1 then 1..k_max, in that order
    std::vector<Step> phi_h_steps;  // unit steps of phi_h
    PhiFunction phi_g;
};

namespace detail {

// Knot and step range of phi (the tails lie outside it).
inline std::pair<double, double> knot_range(const PhiFunction& phi) {
    double lo = phi.knots().front(), hi = phi.knots().back();
    for (const auto& st : phi.steps()) {
        lo = std::min(lo, st.at);
        hi = std::max(hi, st.at);
    }
    return {lo, hi};
}

}  // namespace detail

/// phi_h = sum_{k=1..k_max} 1[s_k, inf) - sum_{k=-k_max..-1} 1(-inf, s_k] with
/// leftmost crossings, and phi_g = phi - phi_h.
inline PhiSplit split_phi(const PhiFunction& phi, long k_max) {
    const auto table = crossing_table(phi, k_max + 1);
    const auto [lo, hi] = detail::knot_range(phi);
    const double up = table.at(k_max + 1), down = table.at(-k_max - 1);
    if ((std::isfinite(up) && up <= hi) || (std::isfinite(down) && down >= lo)) {
        std::ostringstream os;
        os << "split_phi: phi crosses level " << (std::isfinite(up) && up <= hi ? k_max + 1 : -k_max - 1)
           << " inside the knot range; increase k_max";
        throw RangeError(os.str());
    }
    PhiSplit out;
    for (long k = -k_max; k <= k_max; ++k) {
        if (k == 0) continue;
        const double s = table.at(k);
        if (!std::isfinite(s)) continue;
        if (s == 0.0) throw PreconditionError("split_phi: phi jumps across a nonzero integer level at 0");
        out.crossings.push_back(s);
        out.phi_h_steps.push_back({s, 1.0});
    }
    std::vector<Step> minus;
    for (const auto& st : out.phi_h_steps) minus.push_back({st.at, -1.0});
    out.phi_g = phi.with_steps(minus);
    return out;
}

/// phi_h(s) from its unit steps.
inline double eval_steps(const std::vector<Step>& steps, double s) {
    double v = 0.0;
    for (const auto& st : steps) {
        if (st.at > 0 && s >= st.at) v += st.weight;
        if (st.at < 0 && s <= st.at) v -= st.weight;
    }
    return v;
}

struct SandwichReport {
    bool ok = true;
    double worst = 0.0;  // largest violation of phi_h <= phi <= phi_h + 1 (mirrored for s < 0)
    double at = 0.0;
};

/// Sandwich and range checks on a sampled grid, restricted to |s| < limit.
inline SandwichReport sandwich_check(const PhiFunction& phi, const PhiSplit& split, const std::vector<double>& grid, double limit = INFINITY) {
    SandwichReport r;
    for (double s : grid) {
        if (s == 0.0 || std::fabs(s) >= limit) continue;
        const double f = phi(s), h = eval_steps(split.phi_h_steps, s), g = split.phi_g(s);
        const double lo = s > 0 ? h : h - 1.0, hi = s > 0 ? h + 1.0 : h;
        double bad = std::max({lo - f, f - hi, 0.0});
        const double gs = s > 0 ? g : -g;
        bad = std::max({bad, -gs, gs - 1.0});
        bad = std::max(bad, std::fabs(f - h - g));
        if (bad > r.worst) {
            r.worst = bad;
            r.at = s;
        }
    }
    r.ok = r.worst <= 1e-12;
    return r;
}

struct ResidualPoint {
    double xi = 0.0;
    double residual = 0.0;
};

struct FactorPair {
    PolyaFrequency pff;
    BellParams amcm_params;  // a = 0, b = 0, phi = phi_g
    double b_correction = 0.0;  // drift of the PFF factor
    double c_correction = 0.0;  // constant moved to the AM-CM factor
    double residual = 0.0;      // sup of |Phi_g Phi_h / Phi - 1| over the grid
    std::vector<ResidualPoint> profile;
    PhiSplit split;
};

/// 31 log-spaced frequencies in [1e-2, 1e2].
inline std::vector<double> factor_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 30; ++i) g.push_back(std::pow(10.0, -2.0 + 4.0 * i / 30.0));
    return g;
}

inline FactorPair factorise(const BellParams& params, long k_max = 50, double tol = 1e-9) {
    validate_params(params, std::max<long>(k_max + 1, 1));
    FactorPair out;
    out.split = split_phi(params.phi, k_max);
    out.pff.a = params.a;
    for (double s : out.split.crossings) out.pff.atoms.push_back(1.0 / s);
    out.amcm_params = BellParams{0.0, 0.0, params.c, out.split.phi_g};

    auto mismatch = [&](double xi) {
        const auto lf = log_transform(params, xi, tol);
        const auto lg = log_transform(out.amcm_params, xi, tol);
        const auto lh = pff_log_transform(out.pff, xi);
        return std::complex<double>(lf.re_log - lg.re_log - lh.real(), lf.im_log - lg.im_log - lh.imag());
    };
    constexpr double xi_ref = 1.0;
    const auto r = mismatch(xi_ref);
    out.b_correction = -r.imag() / xi_ref;
    out.c_correction = r.real();
    out.pff.b = out.b_correction;
    out.amcm_params.c += out.c_correction;

    const auto grid = factor_grid();
    out.profile = parallel_map(grid.size(), [&](std::size_t i) {
        return ResidualPoint{grid[i], std::abs(std::exp(mismatch(grid[i])) - 1.0)};
    });
    for (const auto& p : out.profile) out.residual = std::max(out.residual, p.residual);
    if (!(out.residual <= tol)) {
        std::ostringstream os;
        os << "factorise: product residual " << out.residual << " exceeds tol " << tol << "; profile:";
        for (const auto& p : out.profile) os << ' ' << p.xi << ':' << p.residual;
        throw NumericalError(os.str(), out.residual);
    }
    return out;
}

}  // namespace bellshape
