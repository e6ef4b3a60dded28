#pragma once

// Adaptive Gauss-Kronrod integration with breakpoints, built on Boost.Math.

#include "bellshape/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace bellshape::quad {

using cplx = std::complex<double>;

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    double l1 = 0.0;
};

struct Options {
    double rel_tol = 1e-10;
    unsigned max_depth = 18;
    // Convergence is also accepted once the error is at rounding level of the L1 norm.
    double l1_floor = 1e-14;
    bool throw_on_failure = true;
    const char* what = "integral";
};

inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }

namespace detail {

template <class T, class F>
Result<T> gk_raw(F&& f, double a, double b, const Options& opt);

// Finite panels are mapped to [0, 1]: the Boost error estimate misbehaves on very short intervals.
template <class T, class F>
Result<T> gk_piece(F&& f, double a, double b, const Options& opt) {
    if (std::isinf(a) || std::isinf(b)) return gk_raw<T>(f, a, b, opt);
    const double w = b - a;
    auto r = gk_raw<T>([&](double t) { return f(t < 1.0 ? a + w * t : b); }, 0.0, 1.0, opt);
    r.value *= w;
    r.error *= w;
    r.l1 *= w;
    return r;
}

template <class T, class F>
Result<T> gk_raw(F&& f, double a, double b, const Options& opt) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    Result<T> r;
    double err = 0.0, l1 = 0.0;
    if constexpr (std::is_same_v<T, double>) {
        r.value = GK::integrate(f, a, b, opt.max_depth, opt.rel_tol, &err, &l1);
        r.error = err;
        r.l1 = l1;
    } else {
        double e1 = 0, e2 = 0, l1a = 0, l1b = 0;
        const double re = GK::integrate([&](double x) { return f(x).real(); }, a, b, opt.max_depth, opt.rel_tol, &e1, &l1a);
        const double im = GK::integrate([&](double x) { return f(x).imag(); }, a, b, opt.max_depth, opt.rel_tol, &e2, &l1b);
        r.value = T(re, im);
        r.error = std::hypot(e1, e2);
        r.l1 = l1a + l1b;
    }
    return r;
}

}  // namespace detail

/// Integrate f over consecutive panels between sorted breakpoints (which may
/// include +-infinity). Throws NumericalError when the estimated error exceeds
/// rel_tol relative to the result and to the rounding floor of the L1 norm.
template <class T, class F>
Result<T> integrate(F&& f, const std::vector<double>& points, const Options& opt = {}) {
    Result<T> total;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double a = points[i], b = points[i + 1];
        if (!(b > a)) continue;
        auto piece = detail::gk_piece<T>(f, a, b, opt);
        total.value += piece.value;
        total.error += piece.error;
        total.l1 += piece.l1;
    }
    const double scale = std::max(magnitude(total.value), 0.0);
    const double allowed = std::max(opt.rel_tol * scale, opt.l1_floor * total.l1);
    if (opt.throw_on_failure && (!(total.error <= allowed) || !std::isfinite(magnitude(total.value)))) {
        std::ostringstream os;
        os << opt.what << ": quadrature did not converge (error " << total.error << ", value " << scale << ")";
        throw NumericalError(os.str(), scale > 0 ? total.error / scale : total.error);
    }
    return total;
}

template <class T, class F>
Result<T> integrate(F&& f, double a, double b, const Options& opt = {}) {
    return integrate<T>(std::forward<F>(f), std::vector<double>{a, b}, opt);
}

/// Sorted breakpoints within [a, b], endpoints included, duplicates removed.
inline std::vector<double> breakpoints(double a, double b, std::vector<double> inner) {
    std::vector<double> pts{a};
    std::sort(inner.begin(), inner.end());
    for (double x : inner)
        if (x > pts.back() && x < b) pts.push_back(x);
    pts.push_back(b);
    return pts;
}

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace bellshape::quad
