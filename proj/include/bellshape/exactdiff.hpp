#pragma once

// Exact n-th derivatives of model densities and certified sign-change counts.

#include "bellshape/errors.hpp"
#include "bellshape/exact/polynomial.hpp"
#include "bellshape/exact/rational.hpp"
#include "bellshape/exact/roots.hpp"
#include "bellshape/parallel.hpp"
#include "bellshape/quadrature.hpp"

#include <gmpxx.h>

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace bellshape {

using exact::IntPoly;
using exact::ScaledPoly;

inline constexpr int default_derivative_cap = 60;

struct ExpTerm {
    mpq_class coef;
    mpq_class rate;  // positive
};

/// A density with an exactly differentiable closed form.
class ExactDensity {
public:
    enum class Kind { Gaussian, Rational, Levy, ExpInverse, Shift, ExpSum };

    /// e^{-x^2}
    static ExactDensity gaussian() { return ExactDensity(Kind::Gaussian, "gaussian"); }

    /// numerator / base^power with base > 0 on the real line.
    static ExactDensity rational(const ScaledPoly& numerator, const IntPoly& base, int power, std::string name = "rational") {
        if (power < 1) throw StructuralError("rational density: denominator power must be at least 1");
        if (numerator.is_zero()) throw StructuralError("rational density: zero numerator");
        if (base.degree() < 1) throw StructuralError("rational density: denominator must be non-constant");
        if (!exact::real_roots(base, exact::RootDomain::Real).empty() || base.sign_at(0) < 0)
            throw StructuralError("rational density: denominator must be positive on the real line");
        if (base.degree() * power <= numerator.poly.degree())
            throw StructuralError("rational density: numerator degree must be below denominator degree");
        const auto roots = exact::split_by_parity(exact::real_roots(numerator.poly, exact::RootDomain::Real));
        const int s0 = numerator.poly.sign_at(roots.changes.empty() && roots.touches.empty() ? mpq_class(0) : roots_gap(roots));
        if (!roots.changes.empty() || sgn_q(numerator.scale) * s0 < 0)
            throw StructuralError("rational density: numerator must be nonnegative");
        ExactDensity d(Kind::Rational, std::move(name));
        d.num_ = numerator;
        mpz_class unit;
        d.base_ = base.primitive(&unit);
        if (unit < 0) throw StructuralError("rational density: denominator must be positive");
        d.num_.scale /= pow_z(unit, power);
        d.power_ = power;
        return d;
    }

    /// 1 / prod factors.
    static ExactDensity rational_product(const std::vector<IntPoly>& factors, std::string name = "rational") {
        IntPoly q = IntPoly::constant(1);
        for (const auto& f : factors) q = q * f;
        return rational(ScaledPoly::from_int(IntPoly::constant(1)), q, 1, std::move(name));
    }

    /// (1 + x^2)^{-1}
    static ExactDensity cauchy() { return rational(ScaledPoly::from_int(IntPoly::constant(1)), IntPoly{1, 0, 1}, 1, "cauchy"); }

    /// x^{-3/2} e^{-1/x} on (0, inf)
    static ExactDensity levy() {
        ExactDensity d(Kind::Levy, "levy");
        d.beta0_ = mpq_class(3, 2);
        return d;
    }

    /// e^{-1/x} on (0, inf); not integrable, kept for derivative-profile studies.
    static ExactDensity exp_inverse() {
        ExactDensity d(Kind::ExpInverse, "exp_inverse");
        d.beta0_ = 0;
        return d;
    }

    /// f + p f'.
    static ExactDensity shift(const ExactDensity& base, const mpq_class& p, std::string p_text = {}) {
        if (base.kind_ == Kind::Shift || base.kind_ == Kind::ExpSum)
            throw StructuralError("shifted density: base must be gaussian, rational, levy or exp_inverse");
        ExactDensity d(Kind::Shift, base.name_ + "+p*f'");
        d.base_density_ = std::make_shared<const ExactDensity>(base);
        d.p_ = p;
        d.p_text_ = p_text.empty() ? p.get_str() : std::move(p_text);
        return d;
    }

    /// sum coef_i e^{-rate_i x} on (0, inf); rates distinct and positive.
    static ExactDensity exp_sum(std::vector<ExpTerm> terms, std::string name = "exp_sum") {
        if (terms.empty()) throw StructuralError("exponential sum: no terms");
        mpz_class den = 1;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i].rate <= 0) throw StructuralError("exponential sum: rates must be positive");
            for (std::size_t j = 0; j < i; ++j)
                if (terms[j].rate == terms[i].rate) throw Unsupported("exponential sum: repeated rates");
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), terms[i].rate.get_den_mpz_t());
        }
        for (const auto& t : terms)
            if (mpz_class(t.rate * den) > 1024) throw RangeError("exponential sum: rates span more than 1024 steps of the common denominator");
        ExactDensity d(Kind::ExpSum, std::move(name));
        d.terms_ = std::move(terms);
        d.t_den_ = den;
        return d;
    }

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    const ScaledPoly& numerator() const noexcept { return num_; }
    const IntPoly& base_poly() const noexcept { return base_; }
    int power() const noexcept { return power_; }
    const mpq_class& beta0() const noexcept { return beta0_; }
    const ExactDensity& base() const { return *base_density_; }
    const mpq_class& p() const noexcept { return p_; }
    const std::string& p_text() const noexcept { return p_text_; }
    const std::vector<ExpTerm>& terms() const noexcept { return terms_; }
    const mpz_class& t_denominator() const noexcept { return t_den_; }

    /// Kind of the underlying closed form (the base for a shift).
    Kind core_kind() const { return kind_ == Kind::Shift ? base_density_->kind_ : kind_; }

    /// True when the density lives on (0, inf).
    bool half_line() const {
        const Kind k = core_kind();
        return k == Kind::Levy || k == Kind::ExpInverse || k == Kind::ExpSum;
    }

private:
    ExactDensity(Kind k, std::string name) : kind_(k), name_(std::move(name)) {}

    static int sgn_q(const mpq_class& q) { return sgn(q); }
    static mpz_class pow_z(const mpz_class& b, int e) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
        return r;
    }
    // a point between touches of a nonnegative numerator
    static mpq_class roots_gap(const exact::SignChangeSplit& s) {
        mpq_class x = 0;
        for (const auto& r : s.touches)
            if (r.hi + 1 > x) x = r.hi + 1;
        return x;
    }

    Kind kind_;
    std::string name_;
    ScaledPoly num_;
    IntPoly base_;
    int power_ = 0;
    mpq_class beta0_ = 0;
    std::shared_ptr<const ExactDensity> base_density_;
    mpq_class p_ = 0;
    std::string p_text_;
    std::vector<ExpTerm> terms_;
    mpz_class t_den_ = 1;
};

/// f^(n) = scale * P * prefactor, where the prefactor is
///   Gaussian      e^{-x^2}
///   Rational      base^{-den_power}
///   Levy type     x^{-x_power} e^{-1/x}, x_power = num/2
///   ExpSum        P is a polynomial in t = e^{-x/D}
struct DerivativeForm {
    ExactDensity::Kind kind = ExactDensity::Kind::Gaussian;
    int n = 0;
    ScaledPoly poly;
    IntPoly base;
    int den_power = 0;
    mpq_class x_power = 0;
    mpz_class t_den = 1;

    /// (sign, log|f^(n)(x)|).
    std::pair<int, double> eval_log(double x) const {
        using K = ExactDensity::Kind;
        if (kind == K::Levy || kind == K::ExpInverse || kind == K::ExpSum) {
            if (!(x > 0)) return {0, -INFINITY};
        }
        double arg = x;
        if (kind == K::ExpSum) arg = std::exp(-x / t_den.get_d());
        auto [s, l] = poly.poly.eval_log(arg);
        if (s == 0) return {0, -INFINITY};
        s *= sgn(poly.scale);
        l += log_abs_q(poly.scale);
        switch (kind) {
            case K::Gaussian: l -= x * x; break;
            case K::Rational: l -= den_power * base.eval_log(x).second; break;
            case K::Levy:
            case K::ExpInverse: l += -x_power.get_d() * std::log(x) - 1.0 / x; break;
            default: break;
        }
        return {s, l};
    }

    double eval(double x) const {
        auto [s, l] = eval_log(x);
        return s == 0 ? 0.0 : s * std::exp(l);
    }

    static double log_abs_q(const mpq_class& q) {
        return IntPoly::log_abs(q.get_num()) - IntPoly::log_abs(q.get_den());
    }
};

namespace detail {

using K = ExactDensity::Kind;

inline DerivativeForm base_form(const ExactDensity& f) {
    DerivativeForm d;
    d.kind = f.kind();
    switch (f.kind()) {
        case K::Gaussian: d.poly = ScaledPoly::from_int(IntPoly::constant(1)); break;
        case K::Rational:
            d.poly = f.numerator();
            d.base = f.base_poly();
            d.den_power = f.power();
            break;
        case K::Levy:
        case K::ExpInverse:
            d.poly = ScaledPoly::from_int(IntPoly::constant(1));
            d.x_power = f.beta0();
            break;
        case K::ExpSum: {
            std::vector<mpq_class> c;
            for (const auto& t : f.terms()) {
                const long e = mpz_class(t.rate * f.t_denominator()).get_si();
                if (static_cast<long>(c.size()) <= e) c.resize(static_cast<std::size_t>(e) + 1, mpq_class(0));
                c[static_cast<std::size_t>(e)] += t.coef;
            }
            d.poly = ScaledPoly::from_rationals(c);
            d.t_den = f.t_denominator();
            break;
        }
        default: throw StructuralError("base_form: unexpected kind");
    }
    return d;
}

inline IntPoly x_times(const IntPoly& p) { return IntPoly::x() * p; }

}  // namespace detail

/// One differentiation step of a non-shifted form.
inline DerivativeForm differentiate(const DerivativeForm& d) {
    using K = ExactDensity::Kind;
    DerivativeForm r = d;
    r.n = d.n + 1;
    const IntPoly& P = d.poly.poly;
    switch (d.kind) {
        case K::Gaussian:
            // (P e^{-x^2})' = (P' - 2xP) e^{-x^2}
            r.poly = exact::combine(d.poly.scale, P.derivative(), -2 * d.poly.scale, detail::x_times(P));
            break;
        case K::Rational:
            // (N / Q^k)' = (N'Q - k N Q') / Q^{k+1}
            r.poly = exact::combine(d.poly.scale, P.derivative() * d.base, -d.den_power * d.poly.scale, P * d.base.derivative());
            r.den_power = d.den_power + 1;
            break;
        case K::Levy:
        case K::ExpInverse: {
            // (R x^{-b} e^{-1/x})' = (R'x^2 - b R x + R) x^{-b-2} e^{-1/x}
            const IntPoly x2{0, 0, 1};
            r.poly = exact::combine(d.poly.scale, P.derivative() * x2 + P, -d.x_power * d.poly.scale, detail::x_times(P));
            r.x_power = d.x_power + 2;
            break;
        }
        case K::ExpSum: {
            // d/dx t^e = -(e/D) t^e
            std::vector<mpz_class> c(P.coeffs());
            for (std::size_t e = 0; e < c.size(); ++e) c[e] *= -static_cast<long>(e);
            r.poly = ScaledPoly::from_int(IntPoly(std::move(c)), d.poly.scale / d.t_den);
            break;
        }
        default: throw StructuralError("differentiate: shifted forms are combined, not differentiated");
    }
    return r;
}

namespace detail {

// Gaussian derivative through the Hermite three-term recurrence:
// f^(n) = (-1)^n H_n e^{-x^2}, H_{n+1} = 2x H_n - 2n H_{n-1}.
inline DerivativeForm gaussian_hermite(int n) {
    IntPoly h0 = IntPoly::constant(1), h1{0, 2};
    if (n == 0) return base_form(ExactDensity::gaussian());
    for (int k = 1; k < n; ++k) {
        IntPoly h2 = mpz_class(2) * x_times(h1) - mpz_class(2 * k) * h0;
        h0 = std::move(h1);
        h1 = std::move(h2);
    }
    DerivativeForm d;
    d.kind = K::Gaussian;
    d.n = n;
    d.poly = ScaledPoly::from_int(h1, n % 2 ? -1 : 1);
    return d;
}

}  // namespace detail

/// Exact form of f^(n). RangeError when n exceeds the cap.
inline DerivativeForm nth_derivative(const ExactDensity& f, int n, int cap = default_derivative_cap) {
    using K = ExactDensity::Kind;
    if (n < 0) throw DomainError("nth_derivative: n must be nonnegative");
    if (n > cap) throw RangeError("nth_derivative: order " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
    if (f.kind() == K::Gaussian) return detail::gaussian_hermite(n);
    if (f.kind() != K::Shift) {
        DerivativeForm d = detail::base_form(f);
        for (int k = 0; k < n; ++k) d = differentiate(d);
        return d;
    }
    // f_p^(n) = f^(n) + p f^(n+1), brought to the prefactor of order n + 1
    const DerivativeForm a = nth_derivative(f.base(), n, cap + 1);
    const DerivativeForm b = differentiate(a);
    DerivativeForm r = b;
    r.n = n;
    const mpq_class pb = f.p() * b.poly.scale;
    switch (a.kind) {
        case K::Gaussian: r.poly = exact::combine(a.poly.scale, a.poly.poly, pb, b.poly.poly); break;
        case K::Rational: r.poly = exact::combine(a.poly.scale, a.poly.poly * a.base, pb, b.poly.poly); break;
        case K::Levy:
        case K::ExpInverse: r.poly = exact::combine(a.poly.scale, a.poly.poly * IntPoly{0, 0, 1}, pb, b.poly.poly); break;
        default: throw StructuralError("nth_derivative: unsupported shift base");
    }
    return r;
}

/// A certified zero of f^(n): [lo, hi] contains exactly one root of the given multiplicity.
struct ZeroEnclosure {
    double lo = 0.0;
    double hi = 0.0;
    int multiplicity = 1;
    bool exact = false;
    double mid() const { return exact ? lo : 0.5 * (lo + hi); }
};

struct ZeroTable {
    int n = 0;
    std::vector<ZeroEnclosure> zeros;    // sign changes, sorted
    std::vector<ZeroEnclosure> touches;  // even multiplicity, not counted
    int count = 0;
};

namespace detail {

inline ZeroEnclosure to_enclosure(const exact::RealRoot& r) { return {r.lo_d(), r.hi_d(), r.multiplicity, r.exact()}; }

// t in [lo, hi] maps to x = -D log t in [-D log hi, -D log lo], widened by a few ulps.
inline ZeroEnclosure t_to_x(const exact::RealRoot& r, double D) {
    auto widen = [](double v, double dir) { return std::nextafter(std::nextafter(v, dir), dir); };
    ZeroEnclosure z;
    z.multiplicity = r.multiplicity;
    const double xl = -D * std::log(r.hi_d()), xh = -D * std::log(r.lo_d());
    z.lo = widen(xl, -INFINITY);
    z.hi = widen(xh, INFINITY);
    z.exact = false;
    return z;
}

}  // namespace detail

/// Certified sign changes of f^(n) on the support of f.
inline ZeroTable sign_changes(const ExactDensity& f, int n, int cap = default_derivative_cap) {
    using K = ExactDensity::Kind;
    const auto d = nth_derivative(f, n, cap);
    ZeroTable t;
    t.n = n;
    if (d.poly.is_zero()) throw DomainError("sign_changes: f^(n) vanishes identically");
    exact::SignChangeSplit split;
    if (d.kind == K::ExpSum) {
        IntPoly q = d.poly.poly;
        q.strip_zero_root();
        if (q.degree() >= 1) split = exact::split_by_parity(exact::real_roots(q, exact::RootDomain::UnitInterval));
        const double D = d.t_den.get_d();
        // decreasing map: reverse to keep x sorted
        for (auto it = split.changes.rbegin(); it != split.changes.rend(); ++it) t.zeros.push_back(detail::t_to_x(*it, D));
        for (auto it = split.touches.rbegin(); it != split.touches.rend(); ++it) t.touches.push_back(detail::t_to_x(*it, D));
    } else {
        const auto dom = f.half_line() ? exact::RootDomain::Positive : exact::RootDomain::Real;
        split = exact::split_by_parity(exact::real_roots(d.poly.poly, dom));
        for (const auto& r : split.changes) t.zeros.push_back(detail::to_enclosure(r));
        for (const auto& r : split.touches) t.touches.push_back(detail::to_enclosure(r));
    }
    t.count = static_cast<int>(t.zeros.size());
    return t;
}

struct BellVerdict {
    bool consistent = true;
    int n_max = 0;
    int violating_n = -1;  // first order whose count differs from n
    int count = 0;         // sign changes at violating_n
    std::string label;     // "consistent up to order n_max" or "violated at order n"
};

/// Sign-change counts of f^(n) for n = 0..n_max (parallel across n).
inline std::vector<ZeroTable> zero_tables(const ExactDensity& f, int n_max, int cap = default_derivative_cap) {
    if (n_max > cap) throw RangeError("order " + std::to_string(n_max) + " exceeds the cap " + std::to_string(cap));
    return parallel_map(static_cast<std::size_t>(n_max + 1), [&](std::size_t i) { return sign_changes(f, static_cast<int>(i), cap); });
}

/// Consistent iff f^(n) changes sign exactly n times for every n <= n_max.
inline BellVerdict certify_bellshape(const ExactDensity& f, int n_max, int cap = default_derivative_cap) {
    const auto tables = zero_tables(f, n_max, cap);
    BellVerdict v;
    v.n_max = n_max;
    for (const auto& t : tables) {
        if (t.count != t.n) {
            v.consistent = false;
            v.violating_n = t.n;
            v.count = t.count;
            break;
        }
    }
    v.label = v.consistent ? "consistent up to order " + std::to_string(n_max) : "violated at order " + std::to_string(v.violating_n);
    return v;
}

struct FpVerdict {
    std::string p_text;
    mpq_class p;
    BellVerdict verdict;
};

/// certify_bellshape of f + p f' for each p (parallel across p).
inline std::vector<FpVerdict> fp_scan(const ExactDensity& f, const std::vector<exact::ParsedRational>& ps, int n_max,
                                      int cap = default_derivative_cap) {
    return parallel_map(ps.size(), [&](std::size_t i) {
        const auto fp = ExactDensity::shift(f, ps[i].value, ps[i].text);
        return FpVerdict{ps[i].text, ps[i].value, certify_bellshape(fp, n_max, cap)};
    });
}

struct TailDecay {
    std::vector<double> values;  // |x^n f^(n)(x)|
    double max = 0.0;
    bool decreasing = true;
};

/// |x^n f^(n)(x)| along x_list, evaluated from the exact form in log space.
inline TailDecay tail_decay_check(const ExactDensity& f, int n, const std::vector<double>& xs) {
    const auto d = nth_derivative(f, n);
    TailDecay r;
    for (double x : xs) {
        if (f.half_line() && !(x > 0)) throw DomainError("tail_decay_check: x outside the support");
        auto [s, l] = d.eval_log(x);
        const double v = s == 0 ? 0.0 : std::exp(l + n * std::log(std::fabs(x)));
        if (!r.values.empty() && v >= r.values.back()) r.decreasing = false;
        r.values.push_back(v);
        r.max = std::max(r.max, v);
    }
    return r;
}

/// Integral of f over its support.
inline double integral_of_f(const ExactDensity& f) {
    using K = ExactDensity::Kind;
    switch (f.kind()) {
        case K::Gaussian: return std::sqrt(M_PI);
        case K::Levy: return std::sqrt(M_PI);
        case K::ExpInverse: throw PreconditionError("integral_of_f: e^{-1/x} is not integrable");
        case K::ExpSum: {
            double s = 0.0;
            for (const auto& t : f.terms()) s += mpq_class(t.coef / t.rate).get_d();
            return s;
        }
        case K::Shift: return integral_of_f(f.base());  // f' integrates to 0
        case K::Rational: {
            const auto d = nth_derivative(f, 0);
            quad::Options opt;
            opt.rel_tol = 1e-13;
            opt.what = "integral of f";
            return quad::integrate<double>([&](double x) { return d.eval(x); }, {-quad::inf, -1.0, 0.0, 1.0, quad::inf}, opt).value;
        }
    }
    return 0.0;
}

}  // namespace bellshape
