#pragma once

// Post-inversion approximants of the Fourier transform and the functions g_n
// built from the zeros of f^(n).

#include "bellshape/errors.hpp"
#include "bellshape/exactdiff.hpp"
#include "bellshape/pff.hpp"
#include "bellshape/phi.hpp"
#include "bellshape/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace bellshape {

inline constexpr int post_order_cap = 400;

namespace detail {

inline void check_post_order(int n) {
    if (n < 1) throw DomainError("post approximant: n must be at least 1");
    if (n > post_order_cap) throw RangeError("post approximant: n exceeds the cap " + std::to_string(post_order_cap));
}

// Breakpoints y = (n/xi) tan(theta_j) so that each panel carries about one
// oscillation of (1 + i xi y/n)^{-n-1}.
inline std::vector<double> post_breakpoints(double xi, int n, bool half_line) {
    std::vector<double> pts{half_line ? 0.0 : -quad::inf};
    const double X = std::fabs(xi);
    const int m = n + 1;
    for (int j = -m + 1; j < m; ++j) {
        const double theta = 0.5 * M_PI * j / m;
        const double y = n / X * std::tan(theta);
        if (half_line && y <= 0.0) continue;
        if (y > pts.back()) pts.push_back(y);
    }
    for (double y : {-1.0, 1.0})
        if (!half_line || y > 0) pts.push_back(y);
    pts.push_back(quad::inf);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

inline quad::Options post_options(double tol) {
    quad::Options opt;
    opt.rel_tol = std::max(std::min(tol, 1e-8), 1e-13);
    opt.l1_floor = 1e-13;
    opt.what = "post approximant";
    return opt;
}

}  // namespace detail

/// (n^{n+1} / (n! (i xi)^n)) int f^(n)(nx) / (1 + i xi x) dx, evaluated through the
/// equal integral int f(y) (1 + i xi y / n)^{-n-1} dy (n integrations by parts).
inline std::complex<double> post_approximant(const ExactDensity& f, double xi, int n, double tol = 1e-10) {
    detail::check_post_order(n);
    if (xi == 0.0 || !std::isfinite(xi)) throw DomainError("post approximant: xi must be finite and nonzero");
    const auto d0 = nth_derivative(f, 0);
    const double r = xi / n;
    auto integrand = [&](double y) -> std::complex<double> {
        auto [s, l] = d0.eval_log(y);
        if (s == 0) return 0.0;
        const std::complex<double> lw = -(n + 1.0) * std::log(std::complex<double>(1.0, r * y));
        return static_cast<double>(s) * std::exp(lw + l);
    };
    return quad::integrate<std::complex<double>>(integrand, detail::post_breakpoints(xi, n, f.half_line()), detail::post_options(tol)).value;
}

/// The displayed formula integrated literally. Cancellation costs about n log10(n/xi)
/// digits, so this is usable only for small n.
inline std::complex<double> post_approximant_literal(const ExactDensity& f, double xi, int n, double tol = 1e-10) {
    detail::check_post_order(n);
    if (xi == 0.0 || !std::isfinite(xi)) throw DomainError("post approximant: xi must be finite and nonzero");
    const auto d = nth_derivative(f, n);
    const auto zt = sign_changes(f, n);
    const double log_pre = (n + 1.0) * std::log(static_cast<double>(n)) - std::lgamma(n + 1.0);
    auto integrand = [&](double x) -> std::complex<double> {
        auto [s, l] = d.eval_log(n * x);
        if (s == 0) return 0.0;
        return static_cast<double>(s) * std::exp(l + log_pre) / std::complex<double>(1.0, xi * x);
    };
    std::vector<double> pts{f.half_line() ? 0.0 : -quad::inf};
    for (const auto& z : zt.zeros) pts.push_back(z.mid() / n);
    for (double y : {-1.0, 1.0}) pts.push_back(y);
    pts.push_back(quad::inf);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (f.half_line()) pts.erase(std::remove_if(pts.begin(), pts.end(), [](double v) { return v < 0; }), pts.end());
    auto opt = detail::post_options(tol);
    opt.throw_on_failure = false;
    const auto I = quad::integrate<std::complex<double>>(integrand, pts, opt).value;
    return I / std::pow(std::complex<double>(0.0, xi), n);
}

/// g_n(x) = ((-1)^n n^{n+1} / n!) f^(n)(nx) prod_k (x - alpha_{n,k}).
class GnFunction {
public:
    GnFunction(const ExactDensity& f, int n) : base_(f), n_(n) {
        if (n < 0) throw DomainError("gn_build: n must be nonnegative");
        form_ = nth_derivative(f, n);
        if (n > 0) {
            const auto t = sign_changes(f, n);
            for (const auto& z : t.zeros) alphas_.push_back(z.mid() / n);
            log_pre_ = (n + 1.0) * std::log(static_cast<double>(n)) - std::lgamma(n + 1.0);
        }
    }

    int n() const noexcept { return n_; }
    const ExactDensity& base() const noexcept { return base_; }
    const std::vector<double>& zeros() const noexcept { return alphas_; }

    /// (sign, log|g_n(x)|)
    std::pair<int, double> eval_log(double x) const {
        if (n_ == 0) return form_.eval_log(x);
        auto [s, l] = form_.eval_log(n_ * x);
        if (s == 0) return {0, -INFINITY};
        if (n_ % 2) s = -s;
        l += log_pre_;
        for (double a : alphas_) {
            const double d = x - a;
            if (d == 0.0) return {0, -INFINITY};
            if (d < 0) s = -s;
            l += std::log(std::fabs(d));
        }
        return {s, l};
    }

    double operator()(double x) const {
        auto [s, l] = eval_log(x);
        return s == 0 ? 0.0 : s * std::exp(l);
    }

    /// Breakpoints for integrating g_n: the zeros, a few multiples of their extent, and infinities.
    std::vector<double> breakpoints() const {
        double ext = 1.0;
        for (double a : alphas_) ext = std::max(ext, 2.0 * std::fabs(a));
        std::vector<double> pts{base_.half_line() ? 0.0 : -quad::inf};
        for (double a : alphas_) pts.push_back(a);
        for (double m : {1.0, 4.0, 16.0}) {
            pts.push_back(m * ext);
            if (!base_.half_line()) pts.push_back(-m * ext);
        }
        pts.push_back(quad::inf);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (base_.half_line()) pts.erase(std::remove_if(pts.begin(), pts.end(), [](double v) { return v < 0; }), pts.end());
        return pts;
    }

    double integral(double tol = 1e-10) const {
        quad::Options opt;
        opt.rel_tol = tol;
        opt.what = "integral of g_n";
        return quad::integrate<double>([&](double x) { return (*this)(x); }, breakpoints(), opt).value;
    }

private:
    ExactDensity base_;
    int n_;
    DerivativeForm form_;
    std::vector<double> alphas_;
    double log_pre_ = 0.0;
};

struct GnCheck {
    double grid_min = 0.0;
    double grid_max = 0.0;
    double mass = 0.0;
    double target_mass = 0.0;
};

/// Builds g_n and checks nonnegativity on a 2001-point grid and mass conservation.
inline GnFunction gn_build(const ExactDensity& f, int n, double tol = 1e-9, GnCheck* report = nullptr) {
    GnFunction g(f, n);
    const auto pts = g.breakpoints();
    double lo = pts[1], hi = pts[pts.size() - 2];
    if (f.half_line()) lo = 0.0;
    GnCheck c;
    c.grid_min = INFINITY;
    c.grid_max = -INFINITY;
    for (int i = 0; i <= 2000; ++i) {
        const double x = lo + (hi - lo) * i / 2000.0;
        const double v = g(x);
        c.grid_min = std::min(c.grid_min, v);
        c.grid_max = std::max(c.grid_max, v);
    }
    if (c.grid_min < -tol * c.grid_max) throw NumericalError("gn_build: g_n is negative on the grid (zero ordering inconsistent)", c.grid_min);
    c.mass = g.integral();
    c.target_mass = integral_of_f(f);
    if (report) *report = c;
    return g;
}

/// int g_n(x) / (1 + i xi x) dx.
inline std::complex<double> amcm_factor_transform(const GnFunction& g, double xi, double tol = 1e-11) {
    quad::Options opt;
    opt.rel_tol = tol;
    opt.l1_floor = 1e-13;
    opt.what = "g_n transform";
    return quad::integrate<std::complex<double>>([&](double x) { return g(x) / std::complex<double>(1.0, xi * x); }, g.breakpoints(), opt).value;
}

/// Relative residual between the Post approximant and prod_k (1 + i alpha_{n,k} xi)^{-1} int g_n/(1 + i xi x).
inline double verify_factor_identity(const ExactDensity& f, int n, double xi, double tol = 1e-10) {
    if (n == 0) return 0.0;
    const auto lhs = post_approximant(f, xi, n, tol);
    const GnFunction g(f, n);
    std::complex<double> prod = 1.0;
    for (double a : g.zeros()) prod /= std::complex<double>(1.0, a * xi);
    const auto rhs = prod * amcm_factor_transform(g, xi, tol);
    return std::abs(lhs - rhs) / std::abs(lhs);
}

/// True when the step function of the PFF factor prod (1 + i alpha xi)^{-1} crosses
/// its integer levels exactly at 1/alpha_{n,k}.
inline bool gn_pff_crossings_match(const GnFunction& g) {
    PolyaFrequency h;
    for (double a : g.zeros())
        if (a != 0.0) h.atoms.push_back(a);
    const auto phi = pff_phi(h).phi;
    const long K = static_cast<long>(h.atoms.size());
    const auto table = crossing_table(phi, K);
    std::vector<double> got, want;
    for (long k = -K; k <= K; ++k)
        if (k != 0 && std::isfinite(table.at(k))) got.push_back(table.at(k));
    for (double a : h.atoms) want.push_back(1.0 / a);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    return got == want;
}

/// Closed-form Fourier transforms of the model densities, for reference.
inline std::complex<double> reference_transform(const ExactDensity& f, double xi) {
    using K = ExactDensity::Kind;
    const double X = std::fabs(xi);
    if (f.kind() == K::Gaussian) return std::sqrt(M_PI) * std::exp(-xi * xi / 4.0);
    if (f.kind() == K::Levy) {
        // int x^{-3/2} e^{-1/x} e^{-i xi x} dx = sqrt(pi) exp(-2 sqrt(i xi))
        return std::sqrt(M_PI) * std::exp(-2.0 * std::sqrt(std::complex<double>(0.0, xi)));
    }
    if (f.kind() == K::Rational && f.base_poly() == IntPoly{1, 0, 1} && f.power() == 1 && f.numerator().poly.degree() == 0)
        return f.numerator().scale.get_d() * static_cast<double>(f.numerator().poly[0].get_si()) * M_PI * std::exp(-X);
    throw Unsupported("reference_transform: no closed form for this density");
}

}  // namespace bellshape
