#pragma once

// Absolutely-monotone-then-completely-monotone functions given by Bernstein measures.

#include "bellshape/errors.hpp"
#include "bellshape/quadrature.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace bellshape {

struct MeasureAtom {
    double location = 0.0;
    double mass = 0.0;
};

/// Finite atoms plus an optional piecewise-affine density on [knots.front(), knots.back()].
class BernsteinMeasure {
public:
    BernsteinMeasure() = default;
    BernsteinMeasure(std::vector<MeasureAtom> atoms, std::vector<double> density_knots = {}, std::vector<double> density_values = {})
        : atoms_(std::move(atoms)), knots_(std::move(density_knots)), values_(std::move(density_values)) {
        for (const auto& a : atoms_) {
            if (!(a.location > 0.0) || !std::isfinite(a.location)) throw StructuralError("bernstein measure: atom locations must be positive");
            if (!(a.mass >= 0.0) || !std::isfinite(a.mass)) throw StructuralError("bernstein measure: masses must be nonnegative");
        }
        if (knots_.size() != values_.size()) throw StructuralError("bernstein measure: density knots and values differ in length");
        if (knots_.size() == 1) throw StructuralError("bernstein measure: density needs at least two knots");
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            if (!(knots_[i] > 0.0) || !std::isfinite(knots_[i])) throw StructuralError("bernstein measure: density knots must be positive");
            if (i > 0 && !(knots_[i] > knots_[i - 1])) throw StructuralError("bernstein measure: density knots must increase");
            if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) throw StructuralError("bernstein measure: density must be nonnegative");
        }
    }

    const std::vector<MeasureAtom>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& density_knots() const noexcept { return knots_; }
    const std::vector<double>& density_values() const noexcept { return values_; }
    bool has_density() const noexcept { return !knots_.empty(); }
    bool empty() const noexcept { return atoms_.empty() && knots_.empty(); }

    double density(double s) const {
        if (knots_.empty() || s < knots_.front() || s > knots_.back()) return 0.0;
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
        if (it == knots_.end()) return values_.back();
        const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
        const double t = (s - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
        return values_[i - 1] + t * (values_[i] - values_[i - 1]);
    }

    /// Integral of fn(s) against the measure.
    template <class T, class F>
    T integrate(F&& fn) const {
        T sum{};
        for (const auto& a : atoms_) sum += a.mass * fn(a.location);
        if (has_density()) {
            quad::Options opt;
            opt.rel_tol = 1e-12;
            opt.what = "bernstein density";
            sum += quad::integrate<T>([&](double s) { return density(s) * fn(s); }, knots_, opt).value;
        }
        return sum;
    }

private:
    std::vector<MeasureAtom> atoms_;
    std::vector<double> knots_;
    std::vector<double> values_;
};

struct AmCmFunction {
    BernsteinMeasure mu_plus;
    BernsteinMeasure mu_minus;
    double m = 0.0;

    void check() const {
        if (!(m >= 0.0) || !std::isfinite(m)) throw StructuralError("am-cm function: atom mass at 0 must be nonnegative");
    }
};

/// g(x) = L mu_plus(x) for x > 0 and L mu_minus(-x) for x < 0.
inline double amcm_eval(const AmCmFunction& g, double x) {
    if (x == 0.0 || !std::isfinite(x)) throw DomainError("amcm_eval: x must be finite and nonzero");
    const auto& mu = x > 0 ? g.mu_plus : g.mu_minus;
    const double ax = std::fabs(x);
    return mu.integrate<double>([&](double s) { return std::exp(-s * ax); });
}

/// m + int 1/(i xi + s) mu_plus(ds) - int 1/(i xi - s) mu_minus(ds).
inline std::complex<double> amcm_transform(const AmCmFunction& g, double xi) {
    if (xi == 0.0 || !std::isfinite(xi)) throw DomainError("amcm_transform: xi must be finite and nonzero");
    using C = std::complex<double>;
    const C z(0.0, xi);
    C v = g.m;
    v += g.mu_plus.integrate<C>([&](double s) { return 1.0 / (z + s); });
    v -= g.mu_minus.integrate<C>([&](double s) { return 1.0 / (z - s); });
    return v;
}

struct CmVerdict {
    bool pass = true;
    double min_value = 0.0;   // smallest (-1)^j g^(j) seen, both half-lines
    int order = 0;
    double at = 0.0;
};

/// (-1)^j d^j/dx^j of g(x) and g(-x) at the given x > 0 for j <= j_max, from the atoms.
inline CmVerdict cm_spotcheck(const AmCmFunction& g, const std::vector<double>& xs, int j_max) {
    if (g.mu_plus.has_density() || g.mu_minus.has_density())
        throw Unsupported("cm_spotcheck: only finite-atom measures are checked exactly");
    CmVerdict v;
    v.min_value = INFINITY;
    for (double x : xs) {
        if (!(x > 0.0)) throw DomainError("cm_spotcheck: points must be positive");
        for (const auto* mu : {&g.mu_plus, &g.mu_minus}) {
            for (int j = 0; j <= j_max; ++j) {
                long double s = 0.0L;
                for (const auto& a : mu->atoms())
                    s += static_cast<long double>(a.mass) * std::pow(static_cast<long double>(a.location), j) *
                         std::exp(-static_cast<long double>(a.location) * x);
                const double d = static_cast<double>(s);
                if (d < v.min_value) {
                    v.min_value = d;
                    v.order = j;
                    v.at = mu == &g.mu_plus ? x : -x;
                }
                if (d < 0.0) v.pass = false;
            }
        }
    }
    return v;
}

}  // namespace bellshape
