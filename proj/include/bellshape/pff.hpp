#pragma once

// Polya frequency functions: transform, step phi, density sampling and the
// variation-diminishing test.

#include "bellshape/errors.hpp"
#include "bellshape/parallel.hpp"
#include "bellshape/phi.hpp"
#include "bellshape/quadrature.hpp"
#include "bellshape/transform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

namespace bellshape {

struct PolyaFrequency {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> atoms;

    void check() const {
        if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("pff: a must be finite and nonnegative");
        if (!std::isfinite(b)) throw DomainError("pff: b must be finite");
        for (double x : atoms)
            if (x == 0.0 || !std::isfinite(x)) throw DomainError("pff: atoms must be finite and nonzero");
    }
};

/// log of exp(-a xi^2 - i b xi) prod exp(i alpha xi) / (1 + i alpha xi).
inline std::complex<double> pff_log_transform(const PolyaFrequency& h, double xi) {
    double re = -h.a * xi * xi;
    double im = -h.b * xi;
    for (double al : h.atoms) {
        const double t = al * xi;
        re -= 0.5 * std::log1p(t * t);
        // t - atan(t)
        im += detail::psi(t);
    }
    return {re, im};
}

inline std::complex<double> pff_transform(const PolyaFrequency& h, double xi) { return std::exp(pff_log_transform(h, xi)); }

/// Bell parameters whose transform equals the PFF transform: unit steps at
/// 1/alpha_k, with b and c pinned at xi_ref (c is nonzero when some |alpha_k| > 1).
inline BellParams pff_phi(const PolyaFrequency& h, double xi_ref = 1.0) {
    h.check();
    std::vector<Step> steps;
    for (double al : h.atoms) steps.push_back({1.0 / al, 1.0});
    BellParams p{h.a, 0.0, 0.0, PhiFunction::steps_only(steps)};
    const auto target = pff_log_transform(h, xi_ref);
    const auto got = log_transform(p, xi_ref);
    p.c = target.real() - got.re_log;
    p.b = -(target.imag() - got.im_log) / xi_ref;
    return p;
}

struct DensitySample {
    std::vector<double> x;
    std::vector<double> h;
    double mass = 0.0;  // trapezoid sum * dx
};

namespace detail {

// Closed-form density of a single atom: (1/|alpha|) exp(-(x + alpha)/alpha) on the proper half-line.
inline double single_atom_density(double alpha, double x) {
    const double y = (x + alpha) / alpha;
    if (y < 0) return 0.0;
    return std::exp(-y) / std::fabs(alpha);
}

// prod 1/(1 + alpha_k z) = sum_k c_k / (1 + alpha_k z) with c_k = prod_{j != k} alpha_k / (alpha_k - alpha_j).
// False when atoms repeat or the weights are large enough to cancel badly.
inline bool partial_fraction_weights(const std::vector<double>& atoms, std::vector<long double>& c) {
    c.assign(atoms.size(), 1.0L);
    for (std::size_t k = 0; k < atoms.size(); ++k)
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            if (j == k) continue;
            const long double d = static_cast<long double>(atoms[k]) - atoms[j];
            if (d == 0.0L) return false;
            c[k] *= atoms[k] / d;
        }
    for (long double v : c)
        if (std::fabs(v) > 1e6L) return false;
    return true;
}

// Inversion integral (1/pi) int_0^inf Re(e^{i xi x} T(xi)) d xi.
inline double invert_point(const PolyaFrequency& h, double x, double tol) {
    if (h.a > 0) {
        // trapezoid on the full line; T decays like exp(-a xi^2), so truncation
        // at 1e-16 and aliasing beyond 40 scale lengths keep the error below tol
        const double xi_max = std::sqrt(std::log(1e16) / h.a) * 1.05;
        double spread = 0.0, amax = 0.0, shift = h.b;
        for (double al : h.atoms) {
            spread += std::fabs(al);
            amax = std::max(amax, std::fabs(al));
            shift -= al;
        }
        // period of the aliased copies must clear the density's effective support
        const double reach = std::fabs(x - shift) + 40.0 * (amax + std::sqrt(h.a)) + spread + 10.0;
        const double dxi = 2.0 * M_PI / (2.0 * reach);
        const long n = static_cast<long>(std::ceil(xi_max / dxi));
        double sum = 0.5 * 1.0;  // xi = 0 term, T(0) = 1
        for (long k = 1; k <= n; ++k) {
            const double xi = k * dxi;
            const auto lt = pff_log_transform(h, xi);
            sum += std::exp(lt.real()) * std::cos(lt.imag() + xi * x);
        }
        return sum * dxi / M_PI;
    }
    // a = 0 with at least two atoms: integrand decays like xi^-N
    double drift = -h.b;
    for (double al : h.atoms) drift += al;
    const double omega = x + drift;  // asymptotic oscillation frequency
    auto f = [&](double xi) {
        const auto lt = pff_log_transform(h, xi);
        return std::exp(lt.real()) * std::cos(lt.imag() + xi * x);
    };
    quad::Options opt;
    opt.rel_tol = std::max(tol * 0.1, 1e-11);
    opt.l1_floor = std::max(tol * 0.1, 1e-13);  // tail values are small against the L1 norm of |T|
    opt.what = "pff inversion";
    double amax = 0.0;
    for (double al : h.atoms) amax = std::max(amax, std::fabs(al));
    const double x0 = 50.0 / amax;
    double head = quad::integrate<double>(f, 0.0, x0, opt).value;
    if (std::fabs(omega) < 1e-3) {
        head += quad::integrate<double>(f, x0, quad::inf, opt).value;
        return head / M_PI;
    }
    // oscillatory tail: half-period cells accelerated by Wynn's epsilon
    const double cell = M_PI / std::fabs(omega);
    std::vector<double> partial;
    double acc = 0.0, lo = x0;
    for (int i = 0; i < 24; ++i) {
        acc += quad::integrate<double>(f, lo, lo + cell, opt).value;
        lo += cell;
        partial.push_back(acc);
    }
    // Wynn epsilon table; even columns hold the accelerated limits. A vanishing
    // difference means the column has converged.
    double best = partial.back(), best_change = INFINITY, prev_even = partial.back();
    std::vector<double> before(partial.size() + 1, 0.0);
    std::vector<double> cur = partial;
    for (int k = 1; cur.size() > 1; ++k) {
        std::vector<double> next(cur.size() - 1);
        bool stalled = false;
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const double d = cur[i + 1] - cur[i];
            if (d == 0.0) {
                stalled = true;
                break;
            }
            next[i] = before[i + 1] + 1.0 / d;
        }
        if (stalled) {
            if (k % 2 == 1) best = cur.back();
            break;
        }
        before = cur;
        cur = next;
        if (k % 2 == 0 && std::isfinite(cur.back())) {
            const double change = std::fabs(cur.back() - prev_even);
            if (change < best_change) {
                best_change = change;
                best = cur.back();
            }
            prev_even = cur.back();
        }
    }
    return (head + best) / M_PI;
}

}  // namespace detail

/// Density values on a grid: partial fractions of exponentials when a = 0 and the
/// atoms are distinct, Fourier inversion otherwise.
inline DensitySample pff_sample(const PolyaFrequency& h, const std::vector<double>& grid, double tol = 1e-9) {
    h.check();
    if (h.a == 0.0 && h.atoms.empty()) throw PreconditionError("pff_sample: the unit point mass has no density");
    DensitySample out;
    out.x = grid;
    std::vector<long double> weights;
    if (h.a == 0.0 && detail::partial_fraction_weights(h.atoms, weights)) {
        double shift = -h.b;
        for (double al : h.atoms) shift += al;
        for (double x : grid) {
            long double v = 0.0L;
            for (std::size_t k = 0; k < h.atoms.size(); ++k)
                v += weights[k] * static_cast<long double>(detail::single_atom_density(h.atoms[k], x + shift - h.atoms[k]));
            out.h.push_back(static_cast<double>(v));
        }
    } else {
        out.h = parallel_map(grid.size(), [&](std::size_t i) { return detail::invert_point(h, grid[i], tol); });
    }
    if (grid.size() >= 2) {
        const double dx = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
        double s = 0.0;
        for (std::size_t i = 0; i < out.h.size(); ++i) s += (i == 0 || i + 1 == out.h.size() ? 0.5 : 1.0) * out.h[i];
        out.mass = s * dx;
    }
    return out;
}

/// Piecewise-constant test function: values[i] on [breaks[i-1], breaks[i]),
/// with values.size() == breaks.size() + 1.
struct StepTest {
    std::vector<double> breaks;
    std::vector<double> values;

    double operator()(double x) const {
        const auto i = static_cast<std::size_t>(std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
        return values[i];
    }
};

struct VdResult {
    int before = 0;
    int after = 0;
    double kernel_mass = 0.0;
};

inline int count_sign_changes(const std::vector<double>& v, double band) {
    int changes = 0, last = 0;
    for (double x : v) {
        if (std::fabs(x) <= band) continue;
        const int s = x > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

/// Sign changes of a step test function and of its discrete convolution with h on the grid.
inline VdResult variation_diminishing_check(const PolyaFrequency& h, const StepTest& test, const std::vector<double>& grid,
                                            double tol = 1e-9) {
    if (test.values.size() != test.breaks.size() + 1) throw StructuralError("step test: values must outnumber breaks by one");
    if (grid.size() < 3) throw DomainError("variation_diminishing_check: grid too small");
    const double dx = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    double amax = 0.0, shift = h.b;
    for (double al : h.atoms) {
        amax = std::max(amax, std::fabs(al));
        shift -= al;
    }
    const double reach = 40.0 * amax + 12.0 * std::sqrt(h.a) + std::fabs(shift) + dx;
    const long J = static_cast<long>(std::ceil(reach / dx));
    std::vector<double> kx;
    for (long j = -J; j <= J; ++j) kx.push_back(j * dx);
    const auto ks = pff_sample(h, kx, tol);
    // Samples of a PF density on a lattice form a PF sequence, so the jump of an
    // exponential factor costs accuracy of the mass but not the sign count.
    // Only truncation of the window is guarded.
    double mass = 0.0, kmax = 0.0;
    for (double v : ks.h) {
        mass += v * dx;
        kmax = std::max(kmax, std::fabs(v));
    }
    const double edge = std::max(std::fabs(ks.h.front()), std::fabs(ks.h.back()));
    if (!(kmax > 0.0) || edge > 1e-9 * kmax) throw NumericalError("variation_diminishing_check: kernel window truncates the density", edge / kmax);
    std::vector<double> t, conv(grid.size(), 0.0);
    for (double x : grid) t.push_back(test(x));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < kx.size(); ++j) s += test(grid[i] - kx[j]) * ks.h[j];
        conv[i] = s * dx;
    }
    double tmax = 0.0, cmax = 0.0;
    for (double v : t) tmax = std::max(tmax, std::fabs(v));
    for (double v : conv) cmax = std::max(cmax, std::fabs(v));
    VdResult r;
    r.before = count_sign_changes(t, tol * tmax);
    r.after = count_sign_changes(conv, tol * cmax);
    r.kernel_mass = mass;
    return r;
}

}  // namespace bellshape
