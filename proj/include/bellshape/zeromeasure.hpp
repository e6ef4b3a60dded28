#pragma once

// Zero measures sum_k alpha_{n,k}^2 delta_{alpha_{n,k}} built from the scaled
// zeros of f^(n), and trend diagnostics against a limit measure.

#include "bellshape/errors.hpp"
#include "bellshape/exactdiff.hpp"
#include "bellshape/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bellshape {

struct MeasurePoint {
    double location = 0.0;
    double weight = 0.0;
};

struct ZeroMeasure {
    int n = 0;
    std::vector<MeasurePoint> atoms;  // sorted by location

    double total_mass() const {
        double s = 0.0;
        for (const auto& a : atoms) s += a.weight;
        return s;
    }
    double max_abs_location() const {
        double m = 0.0;
        for (const auto& a : atoms) m = std::max(m, std::fabs(a.location));
        return m;
    }
};

struct LimitMeasure {
    double gaussian_mass = 0.0;  // 2a, sitting at 0
    std::vector<MeasurePoint> atoms;

    /// Atoms 1/s_k with weights 1/s_k^2 for the given crossing points.
    static LimitMeasure from_crossings(const std::vector<double>& s, double gaussian_mass = 0.0) {
        LimitMeasure m;
        m.gaussian_mass = gaussian_mass;
        for (double v : s) m.atoms.push_back({1.0 / v, 1.0 / (v * v)});
        std::sort(m.atoms.begin(), m.atoms.end(), [](const MeasurePoint& a, const MeasurePoint& b) { return a.location < b.location; });
        return m;
    }
    /// Cauchy density: crossings at k pi, k != 0.
    static LimitMeasure cauchy(int k_max = 2000) {
        std::vector<double> s;
        for (int k = 1; k <= k_max; ++k) {
            s.push_back(k * M_PI);
            s.push_back(-k * M_PI);
        }
        return from_crossings(s);
    }
    /// Levy density: crossings at k^2 pi^2 / 4, k >= 1.
    static LimitMeasure levy(int k_max = 2000) {
        std::vector<double> s;
        for (int k = 1; k <= k_max; ++k) s.push_back(k * k * M_PI * M_PI / 4.0);
        return from_crossings(s);
    }
};

/// Locations are enclosure midpoints divided by n, weights their squares.
inline ZeroMeasure zero_measure(const ExactDensity& f, int n) {
    if (n < 1) throw DomainError("zero_measure: n must be positive");
    const auto t = sign_changes(f, n);
    ZeroMeasure m;
    m.n = n;
    for (const auto& z : t.zeros) {
        const double a = z.mid() / n;
        m.atoms.push_back({a, a * a});
    }
    return m;
}

/// Hat function on [lo, hi] with peak 1 at the midpoint.
struct HatFunction {
    double lo = 0.0;
    double hi = 0.0;
    double operator()(double x) const {
        if (!(x > lo && x < hi)) return 0.0;
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        return 1.0 - std::fabs(x - c) / h;
    }
};

inline double integrate_against(const std::vector<MeasurePoint>& atoms, const HatFunction& u) {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight * u(a.location);
    return s;
}

struct ConvergenceRow {
    HatFunction test;
    std::vector<int> n;
    std::vector<double> discrepancy;  // |int u d mu_n - int u d mu_limit|
    double limit_value = 0.0;
    bool last_below_first = true;
};

/// Hats of relative half-width 0.4 around the limit atoms of largest magnitude.
inline std::vector<HatFunction> default_tests(const LimitMeasure& limit, std::size_t count = 3) {
    std::vector<MeasurePoint> a = limit.atoms;
    std::sort(a.begin(), a.end(), [](const MeasurePoint& x, const MeasurePoint& y) { return std::fabs(x.location) > std::fabs(y.location); });
    std::vector<HatFunction> out;
    for (std::size_t i = 0; i < a.size() && out.size() < count; ++i) {
        const double c = a[i].location, w = 0.4 * std::fabs(c);
        out.push_back({c - w, c + w});
    }
    if (out.empty()) out.push_back({0.2, 0.45});
    return out;
}

inline std::vector<ConvergenceRow> compare_to_limit(const std::vector<ZeroMeasure>& measures, const LimitMeasure& limit,
                                                    const std::vector<HatFunction>& tests) {
    std::vector<ConvergenceRow> rows;
    for (const auto& u : tests) {
        ConvergenceRow r;
        r.test = u;
        r.limit_value = integrate_against(limit.atoms, u) + limit.gaussian_mass * u(0.0);
        for (const auto& m : measures) {
            r.n.push_back(m.n);
            r.discrepancy.push_back(std::fabs(integrate_against(m.atoms, u) - r.limit_value));
        }
        if (r.discrepancy.size() >= 2) r.last_below_first = r.discrepancy.back() <= r.discrepancy.front();
        rows.push_back(std::move(r));
    }
    return rows;
}

struct Figure3Row {
    int n = 0;
    int k = 0;        // 1 for the largest zero
    double alpha = 0.0;
};

/// Scaled zeros alpha_{n,k} for n = 1..n_max, rows ordered by n then k.
inline std::vector<Figure3Row> figure3_data(const ExactDensity& f, int n_max) {
    const auto ms = parallel_map(static_cast<std::size_t>(std::max(n_max, 0)), [&](std::size_t i) { return zero_measure(f, static_cast<int>(i) + 1); });
    std::vector<Figure3Row> rows;
    for (const auto& m : ms) {
        int k = 1;
        for (auto it = m.atoms.rbegin(); it != m.atoms.rend(); ++it) rows.push_back({m.n, k++, it->location});
    }
    return rows;
}

}  // namespace bellshape
