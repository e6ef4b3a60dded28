#pragma once

// The level-crossing function phi: piecewise-affine core, affine or power
// tails, optional unit-style steps.

#include "bellshape/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace bellshape {

struct Piece {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Tail beyond the outermost knot. Power tails read offset + coef * |s|^exponent.
struct Tail {
    enum class Kind { Constant, Affine, Power };
    Kind kind = Kind::Constant;
    double value = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double coef = 0.0;
    double exponent = 0.0;
    double offset = 0.0;

    static Tail constant(double v) {
        Tail t;
        t.value = v;
        return t;
    }
    static Tail affine(double slope, double intercept) {
        Tail t;
        t.kind = Kind::Affine;
        t.slope = slope;
        t.intercept = intercept;
        return t;
    }
    static Tail power(double coef, double exponent, double offset = 0.0) {
        Tail t;
        t.kind = Kind::Power;
        t.coef = coef;
        t.exponent = exponent;
        t.offset = offset;
        return t;
    }
};

/// Jump of size `weight`: adds weight on [at, inf) when at > 0 and subtracts
/// weight on (-inf, at] when at < 0.
struct Step {
    double at = 0.0;
    double weight = 1.0;
};

/// Elementary interval on which phi(s) = intercept + slope * s + pcoef * |s|^pexp.
struct Segment {
    double lo = 0.0, hi = 0.0;
    double intercept = 0.0;
    double slope = 0.0;
    double pcoef = 0.0;
    double pexp = 0.0;

    bool has_power() const { return pcoef != 0.0; }
    double operator()(double s) const {
        double v = intercept + slope * s;
        if (pcoef != 0.0) v += pcoef * std::pow(std::fabs(s), pexp);
        return v;
    }
};

class PhiFunction {
public:
    PhiFunction() : knots_{0.0} {}
    PhiFunction(std::vector<double> knots, std::vector<Piece> pieces, Tail left, Tail right, std::vector<Step> steps = {})
        : knots_(std::move(knots)), pieces_(std::move(pieces)), left_(left), right_(right), steps_(std::move(steps)) {
        check();
        build();
    }

    /// phi(s) = slope * s on the whole line.
    static PhiFunction linear(double slope) {
        return PhiFunction({0.0}, {}, Tail::affine(slope, 0.0), Tail::affine(slope, 0.0));
    }
    static PhiFunction zero() { return PhiFunction({0.0}, {}, Tail::constant(0.0), Tail::constant(0.0)); }
    /// coef * s^exponent for s > 0 and 0 for s < 0.
    static PhiFunction one_sided_power(double coef, double exponent) {
        return PhiFunction({0.0}, {}, Tail::constant(0.0), Tail::power(coef, exponent));
    }
    /// Pure step function.
    static PhiFunction steps_only(std::vector<Step> steps) {
        return PhiFunction({0.0}, {}, Tail::constant(0.0), Tail::constant(0.0), std::move(steps));
    }

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }
    const Tail& left_tail() const noexcept { return left_; }
    const Tail& right_tail() const noexcept { return right_; }
    const std::vector<Step>& steps() const noexcept { return steps_; }
    const std::vector<Segment>& segments() const noexcept { return segs_; }

    double operator()(double s) const {
        const auto it = std::upper_bound(segs_.begin(), segs_.end(), s, [](double v, const Segment& g) { return v < g.hi; });
        if (it == segs_.end()) return segs_.back()(s);
        return (*it)(s);
    }

    /// phi multiplied by a constant (all pieces, tails and step weights).
    PhiFunction scaled(double factor) const {
        std::vector<Piece> p = pieces_;
        for (auto& x : p) {
            x.slope *= factor;
            x.intercept *= factor;
        }
        auto sc = [&](Tail t) {
            t.value *= factor;
            t.slope *= factor;
            t.intercept *= factor;
            t.coef *= factor;
            t.offset *= factor;
            return t;
        };
        std::vector<Step> st = steps_;
        for (auto& x : st) x.weight *= factor;
        return PhiFunction(knots_, p, sc(left_), sc(right_), st);
    }

    /// Same function with extra steps appended.
    PhiFunction with_steps(const std::vector<Step>& extra) const {
        std::vector<Step> st = steps_;
        st.insert(st.end(), extra.begin(), extra.end());
        return PhiFunction(knots_, pieces_, left_, right_, st);
    }

    bool has_power_tail() const { return left_.kind == Tail::Kind::Power || right_.kind == Tail::Kind::Power; }

private:
    void check() const {
        if (knots_.empty()) throw StructuralError("phi: knots must not be empty");
        for (double k : knots_)
            if (!std::isfinite(k)) throw StructuralError("phi: knots must be finite");
        for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
            if (!(knots_[i] < knots_[i + 1])) throw StructuralError("phi: knots must be strictly increasing");
        if (std::find(knots_.begin(), knots_.end(), 0.0) == knots_.end()) throw StructuralError("phi: knots must contain 0");
        if (pieces_.size() + 1 != knots_.size())
            throw StructuralError("phi: expected " + std::to_string(knots_.size() - 1) + " pieces, got " + std::to_string(pieces_.size()));
        for (const auto& p : pieces_)
            if (!std::isfinite(p.slope) || !std::isfinite(p.intercept)) throw StructuralError("phi: non-finite piece");
        for (const Tail* t : {&left_, &right_}) {
            for (double v : {t->value, t->slope, t->intercept, t->coef, t->exponent, t->offset})
                if (!std::isfinite(v)) throw StructuralError("phi: non-finite tail parameter");
            if (t->kind == Tail::Kind::Power && (t->exponent < 0.0 || t->exponent >= 2.0))
                throw StructuralError("phi: power tail exponent must lie in [0, 2)");
        }
        for (const auto& s : steps_) {
            if (!std::isfinite(s.at) || !std::isfinite(s.weight)) throw StructuralError("phi: non-finite step");
            if (s.at == 0.0) throw StructuralError("phi: step at 0 is not allowed");
        }
    }

    static Segment from_tail(const Tail& t, double lo, double hi) {
        Segment g{lo, hi};
        switch (t.kind) {
            case Tail::Kind::Constant: g.intercept = t.value; break;
            case Tail::Kind::Affine:
                g.intercept = t.intercept;
                g.slope = t.slope;
                break;
            case Tail::Kind::Power:
                g.intercept = t.offset;
                g.pcoef = t.coef;
                g.pexp = t.exponent;
                if (t.exponent == 0.0) {
                    g.intercept += t.coef;
                    g.pcoef = 0.0;
                }
                break;
        }
        return g;
    }

    void build() {
        constexpr double inf = std::numeric_limits<double>::infinity();
        std::vector<Segment> base;
        base.push_back(from_tail(left_, -inf, knots_.front()));
        for (std::size_t i = 0; i < pieces_.size(); ++i) base.push_back({knots_[i], knots_[i + 1], pieces_[i].intercept, pieces_[i].slope});
        base.push_back(from_tail(right_, knots_.back(), inf));
        std::vector<double> cuts;
        for (const auto& s : steps_) cuts.push_back(s.at);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        segs_.clear();
        for (const auto& g : base) {
            if (!(g.hi > g.lo)) continue;
            double lo = g.lo;
            for (double c : cuts) {
                if (c > lo && c < g.hi) {
                    Segment part = g;
                    part.lo = lo;
                    part.hi = c;
                    segs_.push_back(part);
                    lo = c;
                }
            }
            Segment part = g;
            part.lo = lo;
            segs_.push_back(part);
        }
        for (auto& g : segs_) {
            const double mid = representative(g.lo, g.hi);
            for (const auto& s : steps_) {
                if (s.at > 0 && mid > s.at) g.intercept += s.weight;
                if (s.at < 0 && mid < s.at) g.intercept -= s.weight;
            }
        }
    }

public:
    /// A point inside (lo, hi), finite even for infinite ends.
    static double representative(double lo, double hi) {
        if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
        if (std::isfinite(lo)) return lo + 1.0 + std::fabs(lo);
        if (std::isfinite(hi)) return hi - 1.0 - std::fabs(hi);
        return 0.0;
    }

private:
    std::vector<double> knots_;
    std::vector<Piece> pieces_;
    Tail left_, right_;
    std::vector<Step> steps_;
    std::vector<Segment> segs_;
};

/// Maximal open interval on which phi - level has constant sign.
struct SignRun {
    double lo, hi;
    int sign;
};

namespace detail {

inline int sgn(double v) { return (v > 0) - (v < 0); }

// Root of g(s) - level strictly inside (lo, hi); NaN when there is none.
inline double segment_root(const Segment& g, double level) {
    const double c = g.intercept - level;
    double r = std::numeric_limits<double>::quiet_NaN();
    if (g.has_power()) {
        const double t = -c / g.pcoef;
        if (t > 0) {
            const double m = std::pow(t, 1.0 / g.pexp);
            r = g.lo >= 0 ? m : -m;
        }
    } else if (g.slope != 0.0) {
        r = -c / g.slope;
    }
    if (!(r > g.lo && r < g.hi)) return std::numeric_limits<double>::quiet_NaN();
    return r;
}

inline int sign_on(const Segment& g, double level, double lo, double hi) {
    if (!g.has_power()) {
        if (g.slope == 0.0) return sgn(g.intercept - level);
        if (std::isinf(hi)) return sgn(g.slope);
        if (std::isinf(lo)) return -sgn(g.slope);
    } else if (std::isinf(lo) || std::isinf(hi)) {
        return sgn(g.pcoef);
    }
    return sgn(g(PhiFunction::representative(lo, hi)) - level);
}

}  // namespace detail

/// Sign runs of phi - level over the real line, merged where adjacent runs share a sign.
inline std::vector<SignRun> sign_runs(const PhiFunction& phi, double level) {
    std::vector<SignRun> runs;
    auto push = [&](double lo, double hi, int s) {
        if (!runs.empty() && runs.back().sign == s && lo != 0.0) {
            runs.back().hi = hi;
            return;
        }
        runs.push_back({lo, hi, s});
    };
    for (const auto& g : phi.segments()) {
        const double r = detail::segment_root(g, level);
        if (std::isnan(r)) {
            push(g.lo, g.hi, detail::sign_on(g, level, g.lo, g.hi));
        } else {
            push(g.lo, r, detail::sign_on(g, level, g.lo, r));
            push(r, g.hi, detail::sign_on(g, level, r, g.hi));
        }
    }
    return runs;
}

struct LevelVerdict {
    bool accept = true;
    long level = 0;
    double witness_lo = 0.0;
    double witness_hi = 0.0;
    std::string reason;
    bool heuristic = false;
};

namespace detail {

// First two sign transitions (ignoring zero runs) of a run list.
inline LevelVerdict check_runs(const std::vector<std::pair<double, int>>& signs_at, long level) {
    // signs_at: (boundary position where the run starts, sign), zero runs omitted
    LevelVerdict v;
    std::vector<double> transitions;
    for (std::size_t i = 1; i < signs_at.size(); ++i)
        if (signs_at[i].second != signs_at[i - 1].second) transitions.push_back(signs_at[i].first);
    if (transitions.size() > 1) {
        v.accept = false;
        v.level = level;
        v.witness_lo = transitions[0];
        v.witness_hi = transitions[1];
        std::ostringstream os;
        os << "phi - " << level << " changes sign " << transitions.size() << " times";
        v.reason = os.str();
    }
    return v;
}

}  // namespace detail

/// Level-crossing condition for k in [k_lo, k_hi], plus the sign condition at level 0.
inline LevelVerdict validate_level_crossing(const PhiFunction& phi, long k_lo, long k_hi) {
    if (k_lo > k_hi) std::swap(k_lo, k_hi);
    for (const auto& r : sign_runs(phi, 0.0)) {
        if (r.lo >= 0 && r.sign < 0) {
            LevelVerdict v;
            v.accept = false;
            v.level = 0;
            v.witness_lo = r.lo;
            v.witness_hi = r.hi;
            v.reason = "phi < 0 on part of (0, inf)";
            return v;
        }
        if (r.hi <= 0 && r.sign > 0) {
            LevelVerdict v;
            v.accept = false;
            v.level = 0;
            v.witness_lo = r.lo;
            v.witness_hi = r.hi;
            v.reason = "phi > 0 on part of (-inf, 0)";
            return v;
        }
    }
    for (long k = k_lo; k <= k_hi; ++k) {
        std::vector<std::pair<double, int>> s;
        for (const auto& r : sign_runs(phi, static_cast<double>(k)))
            if (r.sign != 0) s.emplace_back(r.lo, r.sign);
        auto v = detail::check_runs(s, k);
        if (!v.accept) return v;
    }
    return {};
}

struct Integrability {
    bool finite = true;
    double value = 0.0;
};

namespace detail {

// Integral of |g| / t^3 over [l, h] with t = |s| >= 1 on one side; g in mirrored coordinates.
inline double tail_moment(double A, double B, double P, double gamma, double l, double h) {
    auto F = [&](double t) {
        // antiderivative of (A + B t + P t^gamma) / t^3, evaluated so that F(inf) = 0
        if (std::isinf(t)) return 0.0;
        double v = -A / (2 * t * t) - B / t;
        if (P != 0.0) v += P * std::pow(t, gamma - 2.0) / (gamma - 2.0);
        return v;
    };
    return F(h) - F(l);
}

}  // namespace detail

/// Closed-form value of the integral of |phi(s)| / |s|^3 over |s| >= 1.
inline Integrability validate_integrability(const PhiFunction& phi) {
    Integrability out;
    double total = 0.0;
    for (const auto& r : sign_runs(phi, 0.0)) {
        if (r.sign == 0) continue;
        for (int side : {1, -1}) {
            // portion of the run with side * s >= 1, mirrored to t = side * s
            double lo = side > 0 ? std::max(r.lo, 1.0) : std::max(-r.hi, 1.0);
            double hi = side > 0 ? r.hi : -r.lo;
            if (!(hi > lo)) continue;
            // the run may span several segments
            for (const auto& g : phi.segments()) {
                double glo = side > 0 ? std::max(g.lo, lo) : std::max(-g.hi, lo);
                double ghi = side > 0 ? std::min(g.hi, hi) : std::min(-g.lo, hi);
                if (!(ghi > glo)) continue;
                const double A = g.intercept;
                const double B = side * g.slope;
                total += r.sign * detail::tail_moment(A, B, g.pcoef, g.pexp, glo, ghi);
            }
        }
    }
    out.value = total;
    out.finite = std::isfinite(total);
    return out;
}

/// Crossing points s_k for |k| <= k_max.
class CrossingTable {
public:
    CrossingTable(long k_max, std::vector<double> s, std::vector<bool> flags)
        : k_max_(k_max), s_(std::move(s)), flag_(std::move(flags)) {}
    long k_max() const noexcept { return k_max_; }
    double at(long k) const { return s_.at(static_cast<std::size_t>(k + k_max_)); }
    bool nonunique(long k) const { return flag_.at(static_cast<std::size_t>(k + k_max_)); }

private:
    long k_max_;
    std::vector<double> s_;
    std::vector<bool> flag_;
};

/// Crossing point of phi - k for each |k| <= k_max (+-inf when the level is not crossed):
/// for k > 0 the smallest s with phi >= k on [s, inf), for k < 0 the largest s with
/// phi <= k on (-inf, s]. Flagged when phi == k on an interval next to it.
inline CrossingTable crossing_table(const PhiFunction& phi, long k_max) {
    if (k_max < 0) throw DomainError("crossing_table: k_max must be nonnegative");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> s(static_cast<std::size_t>(2 * k_max + 1), 0.0);
    std::vector<bool> flags(s.size(), false);
    for (long k = 1; k <= k_max; ++k) {
        std::vector<SignRun> runs;
        for (const auto& r : sign_runs(phi, static_cast<double>(k)))
            if (r.hi > 0) runs.push_back({std::max(r.lo, 0.0), r.hi, r.sign});
        // start of the final block of nonnegative runs; flagged when it opens with phi == k
        double sk = inf;
        bool flag = false;
        for (std::size_t i = runs.size(); i-- > 0;) {
            if (runs[i].sign < 0) break;
            sk = runs[i].lo;
            flag = runs[i].sign == 0;
        }
        s[static_cast<std::size_t>(k + k_max)] = sk;
        flags[static_cast<std::size_t>(k + k_max)] = flag;
    }
    for (long k = -1; k >= -k_max; --k) {
        std::vector<SignRun> runs;
        for (const auto& r : sign_runs(phi, static_cast<double>(k)))
            if (r.lo < 0) runs.push_back({r.lo, std::min(r.hi, 0.0), r.sign});
        // mirror image: end of the initial block of nonpositive runs
        double sk = -inf;
        bool flag = false;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].sign > 0) break;
            sk = runs[i].hi;
            flag = runs[i].sign == 0;
        }
        s[static_cast<std::size_t>(k + k_max)] = sk;
        flags[static_cast<std::size_t>(k + k_max)] = flag;
    }
    return CrossingTable(k_max, std::move(s), std::move(flags));
}

/// True iff phi is non-decreasing (pieces, tails, jumps at knots and steps).
inline bool is_ggc(const PhiFunction& phi) {
    const auto& segs = phi.segments();
    for (const auto& g : segs) {
        if (g.slope < 0) return false;
        if (g.has_power() && g.pexp > 0) {
            if (g.lo >= 0 && g.pcoef < 0) return false;
            if (g.hi <= 0 && g.pcoef > 0) return false;
        }
    }
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        const double b = segs[i].hi;
        const double left = segs[i](b);
        const double right = segs[i + 1](b);
        if (right < left - 1e-15 * std::max(1.0, std::fabs(left))) return false;
    }
    return true;
}

/// phi given as a callable with declared tail exponents; validated by sampling only.
struct CallablePhi {
    std::function<double(double)> fn;
    double left_exponent = 1.0;
    double right_exponent = 1.0;
};

/// Geometric sampling grid: +-|s| in [1e-6, 1e6] with ratio 1.05, plus 0.
inline std::vector<double> heuristic_grid(double ratio = 1.05, double smin = 1e-6, double smax = 1e6) {
    std::vector<double> pos;
    for (double s = smin; s <= smax * (1 + 1e-12); s *= ratio) pos.push_back(s);
    std::vector<double> grid;
    for (std::size_t i = pos.size(); i-- > 0;) grid.push_back(-pos[i]);
    grid.push_back(0.0);
    grid.insert(grid.end(), pos.begin(), pos.end());
    return grid;
}

inline LevelVerdict validate_level_crossing_sampled(const CallablePhi& phi, long k_lo, long k_hi) {
    const auto grid = heuristic_grid();
    std::vector<double> vals;
    vals.reserve(grid.size());
    for (double s : grid) vals.push_back(s == 0.0 ? 0.0 : phi.fn(s));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if ((grid[i] > 0 && vals[i] < 0) || (grid[i] < 0 && vals[i] > 0)) {
            LevelVerdict v;
            v.accept = false;
            v.witness_lo = v.witness_hi = grid[i];
            v.reason = "sign condition violated at a sample point";
            v.heuristic = true;
            return v;
        }
    }
    for (long k = std::min(k_lo, k_hi); k <= std::max(k_lo, k_hi); ++k) {
        std::vector<std::pair<double, int>> s;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const int sg = detail::sgn(vals[i] - static_cast<double>(k));
            if (sg != 0 && (s.empty() || s.back().second != sg)) s.emplace_back(grid[i], sg);
        }
        auto v = detail::check_runs(s, k);
        if (!v.accept) {
            v.heuristic = true;
            return v;
        }
    }
    LevelVerdict ok;
    ok.heuristic = true;
    return ok;
}

/// Piecewise-linear interpolant of a callable on the heuristic grid with
/// power tails of the declared exponents.
inline PhiFunction sample_to_phi(const CallablePhi& phi) {
    const auto grid = heuristic_grid();
    std::vector<double> knots;
    std::vector<double> vals;
    for (double s : grid) {
        knots.push_back(s);
        vals.push_back(s == 0.0 ? 0.0 : phi.fn(s));
    }
    const std::size_t z = static_cast<std::size_t>(std::find(knots.begin(), knots.end(), 0.0) - knots.begin());
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double v0 = vals[i], v1 = vals[i + 1];
        if (i + 1 == z) v1 = v0;  // constant next to the origin
        if (i == z) v0 = v1;
        const double slope = (v1 - v0) / (knots[i + 1] - knots[i]);
        pieces.push_back({slope, v0 - slope * knots[i]});
    }
    auto tail = [&](double s, double v, double gamma) {
        if (gamma >= 2.0) throw StructuralError("callable phi: declared tail exponent must be < 2");
        return Tail::power(v / std::pow(std::fabs(s), gamma), gamma);
    };
    return PhiFunction(knots, pieces, tail(knots.front(), vals.front(), phi.left_exponent),
                       tail(knots.back(), vals.back(), phi.right_exponent));
}

inline Integrability validate_integrability(const CallablePhi& phi) {
    Integrability out;
    if (phi.left_exponent >= 2.0 || phi.right_exponent >= 2.0) {
        out.finite = false;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    return validate_integrability(sample_to_phi(phi));
}

}  // namespace bellshape
