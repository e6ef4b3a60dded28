#pragma once

// Fourier transform of a weakly bell-shaped function from (a, b, c, phi).

#include "bellshape/errors.hpp"
#include "bellshape/phi.hpp"
#include "bellshape/quadrature.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace bellshape {

struct BellParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    PhiFunction phi;
};

struct LogTransformValue {
    double xi = 0.0;
    double re_log = 0.0;
    double im_log = 0.0;
};

/// Throws when a < 0, phi fails the level-crossing condition on |k| <= k_max,
/// or the integrability integral is infinite.
inline void validate_params(const BellParams& p, long k_max = 64) {
    if (!(p.a >= 0.0) || !std::isfinite(p.a)) throw DomainError("bell params: a must be finite and nonnegative");
    if (!std::isfinite(p.b) || !std::isfinite(p.c)) throw DomainError("bell params: b and c must be finite");
    const auto v = validate_level_crossing(p.phi, -k_max, k_max);
    if (!v.accept) throw PreconditionError("bell params: phi fails the level-crossing condition: " + v.reason);
    if (!validate_integrability(p.phi).finite) throw PreconditionError("bell params: phi is not integrable against |s|^-3");
}

namespace detail {

// t - atan(t), accurate for small t.
inline double psi(double t) {
    const double a = std::fabs(t);
    if (a < 1e-2) {
        const double t2 = t * t;
        return t * t2 * (1.0 / 3 - t2 * (1.0 / 5 - t2 * (1.0 / 7 - t2 / 9)));
    }
    if (std::isinf(t)) return t;
    return t - std::atan(t);
}

// atan(u) - atan(v) for u >= v.
inline double atan_diff(double u, double v) {
    if (std::isinf(u) || std::isinf(v)) return std::atan(u) - std::atan(v);
    return std::atan2(u - v, 1.0 + u * v);
}

// psi(u) - psi(v) for u >= v.
inline double psi_diff(double u, double v) {
    if (std::max(std::fabs(u), std::fabs(v)) < 0.5) return psi(u) - psi(v);
    return (u - v) - atan_diff(u, v);
}

// log(1 + x^2/h^2) - log(1 + x^2/l^2), h or l may be infinite
inline double log_ratio_outer(double X, double l, double h) {
    auto term = [&](double s) { return std::isinf(s) ? 0.0 : std::log1p((X / s) * (X / s)); };
    return term(h) - term(l);
}

struct KernelSums {
    double re = 0.0;  // integral of (s/(X^2+s^2) - 1{|s|>=1}/s) phi
    double im = 0.0;  // integral of (1/(X^2+s^2) - 1{|s|>=1}/s^2) phi
};

// Closed form for phi = alpha*s + beta on [l, h] with the interval inside |s| <= 1 or |s| >= 1.
inline KernelSums affine_kernels(double alpha, double beta, double l, double h, double X, bool outer) {
    KernelSums k;
    if (!outer) {
        // log((X^2 + h^2) / (X^2 + l^2))
        const double den = X * X + l * l, num = (h - l) * (h + l);
        const double L = std::fabs(num) < 0.5 * den ? std::log1p(num / den) : std::log(X * X + h * h) - std::log(den);
        if (alpha != 0.0) {
            k.re += alpha * X * psi_diff(h / X, l / X);
            k.im += 0.5 * alpha * L;
        }
        if (beta != 0.0) {
            k.re += 0.5 * beta * L;
            k.im += beta / X * atan_diff(h / X, l / X);
        }
    } else {
        const double LR = log_ratio_outer(X, l, h);
        if (alpha != 0.0) {
            // atan(X/l) - atan(X/h) on a same-sign interval
            const double D = atan_diff(X / l, X / h);
            k.re += -alpha * X * D;
            k.im += 0.5 * alpha * LR;
        }
        if (beta != 0.0) {
            k.re += 0.5 * beta * LR;
            const double u = std::isinf(l) ? 0.0 : X / l;
            const double v = std::isinf(h) ? 0.0 : X / h;
            // psi(X/h) - psi(X/l) = -(psi(u) - psi(v)) with u = X/l >= v = X/h
            k.im += -beta * psi_diff(u, v) / X;
        }
    }
    return k;
}

// P * |s|^gamma over [l, h] (same sign), by quadrature in u = log|s|.
inline KernelSums power_kernels(double P, double gamma, double l, double h, double X, double tol) {
    KernelSums k;
    const double sigma = (h > 0) ? 1.0 : -1.0;
    double tl = sigma > 0 ? l : -h;
    double th = sigma > 0 ? h : -l;
    const double ulo = tl <= 0 ? -quad::inf : std::log(tl);
    const double uhi = std::isinf(th) ? quad::inf : std::log(th);
    std::vector<double> inner{0.0, std::log(X)};
    const auto pts = quad::breakpoints(ulo, uhi, inner);
    const double X2 = X * X;
    auto kr = [&](double u) {
        const double t = std::exp(u);
        const double w = P * std::pow(t, gamma + 1.0);
        if (w == 0.0 || !std::isfinite(w)) return 0.0;
        return u < 0 ? w * t / (X2 + t * t) : -w * X2 / (t * (X2 + t * t));
    };
    auto ki = [&](double u) {
        const double t = std::exp(u);
        const double w = P * std::pow(t, gamma + 1.0);
        if (w == 0.0 || !std::isfinite(w)) return 0.0;
        return u < 0 ? w / (X2 + t * t) : -w * X2 / (t * t * (X2 + t * t));
    };
    quad::Options opt;
    opt.rel_tol = std::max(tol * 0.1, 1e-14);
    opt.what = "power tail kernel";
    k.re = sigma * quad::integrate<double>(kr, pts, opt).value;
    k.im = quad::integrate<double>(ki, pts, opt).value;
    return k;
}

}  // namespace detail

/// log Phi(xi) as (re_log, im_log) with the continuous branch of the argument.
inline LogTransformValue log_transform(const BellParams& p, double xi, double tol = 1e-9) {
    if (xi == 0.0 || !std::isfinite(xi)) throw DomainError("log_transform: xi must be finite and nonzero");
    const double X = std::fabs(xi);
    detail::KernelSums sum;
    for (const auto& g : p.phi.segments()) {
        std::vector<double> cuts{-1.0, 0.0, 1.0};
        double lo = g.lo;
        std::vector<std::pair<double, double>> parts;
        for (double c : cuts) {
            if (c > lo && c < g.hi) {
                parts.emplace_back(lo, c);
                lo = c;
            }
        }
        parts.emplace_back(lo, g.hi);
        for (auto [l, h] : parts) {
            if (!(h > l)) continue;
            const bool outer = l >= 1.0 || h <= -1.0;
            const auto ka = detail::affine_kernels(g.slope, g.intercept, l, h, X, outer);
            sum.re += ka.re;
            sum.im += ka.im;
            if (g.has_power()) {
                const auto kp = detail::power_kernels(g.pcoef, g.pexp, l, h, X, tol);
                sum.re += kp.re;
                sum.im += kp.im;
            }
        }
    }
    LogTransformValue v;
    v.xi = xi;
    v.re_log = -p.a * xi * xi + p.c + sum.re;
    v.im_log = -p.b * xi - xi * sum.im;
    return v;
}

inline std::complex<double> transform(const BellParams& p, double xi, double tol = 1e-9) {
    const auto v = log_transform(p, xi, tol);
    return std::exp(std::complex<double>(v.re_log, v.im_log));
}

/// Integral of phi(s)/s over [-1, 1]; DomainError when it diverges at 0.
inline double inner_log_moment(const PhiFunction& phi) {
    double total = 0.0;
    for (const auto& g : phi.segments()) {
        const double l = std::max(g.lo, -1.0), h = std::min(g.hi, 1.0);
        if (!(h > l)) continue;
        total += g.slope * (h - l);
        if (g.intercept != 0.0) {
            if (l == 0.0 || h == 0.0) throw DomainError("integral of phi(s)/s over [-1, 1] diverges at 0");
            total += g.intercept * std::log(h / l);
        }
        if (g.has_power()) {
            if (g.pexp <= 0.0) throw DomainError("integral of phi(s)/s over [-1, 1] diverges at 0");
            total += g.pcoef * (std::pow(std::fabs(h), g.pexp) - std::pow(std::fabs(l), g.pexp)) / g.pexp;
        }
    }
    return total;
}

/// Parameters of the integrable representation converted to the canonical c.
inline BellParams from_integrable(double a, double b, double c_int, const PhiFunction& phi) {
    return BellParams{a, b, -c_int - inner_log_moment(phi), phi};
}

/// Inverse of from_integrable: c of the integrable representation.
inline double integrable_c(const BellParams& p) { return -p.c - inner_log_moment(p.phi); }

struct RegularityVerdict {
    bool pass = true;
    std::string reason;
    double integral = 0.0;        // estimate of the integral of |re Phi| over [-1, 1]
    double limit = 0.0;           // extrapolated limit of xi * im Phi(xi) at 0+
    std::string label = "numerical evidence";
};

struct RegularityOptions {
    int panels = 40;              // dyadic panels [2^-j-1, 2^-j]; deeper panels hit phase rounding
    double ratio_threshold = 0.999;
    double cap = 1e12;
    double limit_tol = 1e-3;
};

/// Numerical check of the regularity condition: finiteness of the integral of
/// re Phi over [-1, 1] and xi * im Phi(xi) -> 0.
inline RegularityVerdict check_regularity(const BellParams& p, double tol = 1e-9, RegularityOptions ro = {}) {
    RegularityVerdict v;
    quad::Options opt;
    opt.rel_tol = std::max(tol, 1e-10);
    opt.what = "regularity integral";
    opt.throw_on_failure = false;  // the verdict is evidence; panel sums only need a few digits
    auto re_abs = [&](double xi) { return std::fabs(transform(p, xi, tol).real()); };
    double total = 0.0, prev = -1.0;
    int growing = 0;
    for (int j = 0; j < ro.panels; ++j) {
        const double hi = std::ldexp(1.0, -j), lo = std::ldexp(1.0, -j - 1);
        const double panel = 2.0 * quad::integrate<double>(re_abs, lo, hi, opt).value;  // both signs of xi
        total += panel;
        if (prev > 0 && panel >= ro.ratio_threshold * prev) {
            if (++growing >= 3) {
                v.pass = false;
                v.reason = "integral of re Phi near 0 does not converge (panel sums not decaying)";
                v.integral = total;
                return v;
            }
        } else {
            growing = 0;
        }
        if (total > ro.cap) {
            v.pass = false;
            v.reason = "integral of re Phi exceeds cap";
            v.integral = total;
            return v;
        }
        prev = panel;
    }
    v.integral = total;
    std::vector<double> w;
    double wmax = 0.0;
    for (int j = 4; j <= 20; ++j) {
        const double xi = std::ldexp(1.0, -j);
        w.push_back(xi * transform(p, xi, tol).imag());
        wmax = std::max(wmax, std::fabs(w.back()));
    }
    const std::size_t n = w.size();
    const double d1 = w[n - 1] - w[n - 2], d0 = w[n - 2] - w[n - 3];
    double lim = w[n - 1];
    if (std::fabs(d1 - d0) > 1e-300 && std::fabs(d1) < std::fabs(d0)) lim = w[n - 1] - d1 * d1 / (d1 - d0);
    v.limit = lim;
    if (std::fabs(lim) > ro.limit_tol * std::max(1.0, wmax)) {
        v.pass = false;
        v.reason = "xi * im Phi(xi) does not tend to 0";
    }
    return v;
}

/// Parameters of the n-th convolution root.
inline BellParams convolution_root(const BellParams& p, int n) {
    if (n < 1) throw DomainError("convolution_root: n must be positive");
    const double f = 1.0 / n;
    return BellParams{p.a * f, p.b * f, p.c * f, p.phi.scaled(f)};
}

/// Cauchy density 1/(1+x^2): phi(s) = s/pi, c = log(pi) - 2/pi.
inline BellParams cauchy_params() {
    return BellParams{0.0, 0.0, std::log(M_PI) - 2.0 / M_PI, PhiFunction::linear(1.0 / M_PI)};
}

/// Gauss-Weierstrass kernel with Phi(xi) = exp(-t xi^2).
inline BellParams gaussian_params(double t) { return BellParams{t, 0.0, 0.0, PhiFunction::zero()}; }

}  // namespace bellshape
