#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace bellshape::exact {

/// Dense integer polynomial, lowest degree first. The zero polynomial has no
/// coefficients; otherwise the leading coefficient is nonzero.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }
    IntPoly(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static IntPoly constant(const mpz_class& v) { return IntPoly(std::vector<mpz_class>{v}); }
    /// The polynomial x.
    static IntPoly x() { return IntPoly{0, 1}; }

    bool is_zero() const noexcept { return c_.empty(); }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const std::vector<mpz_class>& coeffs() const noexcept { return c_; }
    const mpz_class& operator[](std::size_t i) const { return c_[i]; }
    const mpz_class& leading() const { return c_.back(); }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return IntPoly(std::move(r));
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return IntPoly(std::move(r));
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
        }
        return IntPoly(std::move(r));
    }
    friend IntPoly operator*(const mpz_class& s, const IntPoly& a) {
        if (s == 0) return {};
        std::vector<mpz_class> r(a.c_);
        for (auto& v : r) v *= s;
        return IntPoly(std::move(r));
    }

    IntPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<mpz_class> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<unsigned long>(i);
        return IntPoly(std::move(r));
    }

    /// p(-x).
    IntPoly reflected() const {
        std::vector<mpz_class> r(c_);
        for (std::size_t i = 1; i < r.size(); i += 2) r[i] = -r[i];
        return IntPoly(std::move(r));
    }

    /// x^d p(1/x) with d = degree.
    IntPoly reversed() const {
        std::vector<mpz_class> r(c_.rbegin(), c_.rend());
        return IntPoly(std::move(r));
    }

    /// p(x + 1), classical O(d^2) Taylor shift.
    IntPoly taylor_shift1() const {
        std::vector<mpz_class> a(c_);
        const std::size_t n = a.size();
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = n - 1; j-- > i;) a[j] += a[j + 1];
        return IntPoly(std::move(a));
    }

    /// Integer polynomial whose roots are those of p multiplied by 2^k.
    IntPoly scale_roots_pow2(long k) const {
        std::vector<mpz_class> a(c_);
        const long d = degree();
        for (long i = 0; i <= d; ++i) {
            if (k >= 0)
                mpz_mul_2exp(a[i].get_mpz_t(), a[i].get_mpz_t(), static_cast<unsigned long>(k * (d - i)));
            else
                mpz_mul_2exp(a[i].get_mpz_t(), a[i].get_mpz_t(), static_cast<unsigned long>(-k * i));
        }
        return IntPoly(std::move(a));
    }

    /// Drop a factor x^j so that p(0) != 0; returns j.
    int strip_zero_root() {
        int j = 0;
        while (j < static_cast<int>(c_.size()) && c_[j] == 0) ++j;
        if (j > 0) c_.erase(c_.begin(), c_.begin() + j);
        return j;
    }

    /// Positive gcd of the coefficients.
    mpz_class content() const {
        mpz_class g = 0;
        for (const auto& v : c_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    /// Primitive part with positive leading coefficient; *this == unit * result.
    IntPoly primitive(mpz_class* unit = nullptr) const {
        if (is_zero()) {
            if (unit) *unit = 0;
            return {};
        }
        mpz_class g = content();
        if (leading() < 0) g = -g;
        if (unit) *unit = g;
        std::vector<mpz_class> r(c_);
        for (auto& v : r) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
        return IntPoly(std::move(r));
    }

    /// Number of sign variations in the coefficient sequence.
    int sign_variations() const {
        int v = 0, last = 0;
        for (const auto& c : c_) {
            const int s = sgn(c);
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    }

    mpq_class eval(const mpq_class& x) const {
        mpq_class r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) {
            r *= x;
            r += c_[i];
        }
        return r;
    }

    /// 2^{e*d} p(num / 2^e), exact.
    mpz_class eval_dyadic_scaled(const mpz_class& num, unsigned long e) const {
        if (c_.empty()) return 0;
        mpz_class acc = c_.back();
        mpz_class term;
        const std::size_t d = c_.size() - 1;
        for (std::size_t i = d; i-- > 0;) {
            acc *= num;
            mpz_mul_2exp(term.get_mpz_t(), c_[i].get_mpz_t(), e * (d - i));
            acc += term;
        }
        return acc;
    }

    int sign_at_dyadic(const mpz_class& num, unsigned long e) const { return sgn(eval_dyadic_scaled(num, e)); }

    int sign_at(const mpq_class& x) const { return sgn(eval(x)); }

    /// p(x) for a double x as (sign, natural log of magnitude); the value is
    /// computed exactly from the binary expansion of x and rounded once.
    std::pair<int, double> eval_log(double x) const {
        if (c_.empty()) return {0, -INFINITY};
        if (x == 0.0) {
            if (c_[0] == 0) return {0, -INFINITY};
            return {sgn(c_[0]), log_abs(c_[0])};
        }
        int ex = 0;
        const double m = std::frexp(x, &ex);
        // x = mz * 2^(ex - 53)
        mpz_class mz(std::ldexp(m, 53));
        long shift = static_cast<long>(ex) - 53;
        const unsigned long tz = mpz_scan1(mz.get_mpz_t(), 0);
        mpz_fdiv_q_2exp(mz.get_mpz_t(), mz.get_mpz_t(), tz);
        shift += static_cast<long>(tz);
        mpz_class v;
        long extra = 0;
        if (shift >= 0) {
            mpz_class xm;
            mpz_mul_2exp(xm.get_mpz_t(), mz.get_mpz_t(), static_cast<unsigned long>(shift));
            v = eval_dyadic_scaled(xm, 0);
        } else {
            v = eval_dyadic_scaled(mz, static_cast<unsigned long>(-shift));
            extra = shift * degree();
        }
        const int s = sgn(v);
        if (s == 0) return {0, -INFINITY};
        return {s, log_abs(v) + static_cast<double>(extra) * std::log(2.0)};
    }

    double eval_double(double x) const {
        auto [s, l] = eval_log(x);
        return s == 0 ? 0.0 : s * std::exp(l);
    }

    std::string to_string(const char* var = "x") const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            std::string v = c_[i].get_str();
            const bool neg = v[0] == '-';
            if (neg) v.erase(0, 1);
            if (out.empty())
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            const bool unit = (v == "1") && i > 0;
            if (!unit) out += v;
            if (i >= 1) out += (unit ? "" : "*") + std::string(var);
            if (i >= 2) out += "^" + std::to_string(i);
        }
        return out;
    }

    static double log_abs(const mpz_class& v) {
        long e = 0;
        const double m = mpz_get_d_2exp(&e, v.get_mpz_t());
        return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<mpz_class> c_;
};

/// Rational polynomial stored as scale * primitive integer polynomial.
struct ScaledPoly {
    mpq_class scale = 0;
    IntPoly poly;

    static ScaledPoly from_rationals(const std::vector<mpq_class>& coeffs) {
        mpz_class den = 1;
        for (const auto& q : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
        std::vector<mpz_class> ints;
        ints.reserve(coeffs.size());
        for (const auto& q : coeffs) ints.emplace_back(mpz_class(q * den));
        return from_int(IntPoly(std::move(ints)), mpq_class(1, den));
    }

    static ScaledPoly from_int(const IntPoly& p, const mpq_class& s = 1) {
        mpz_class unit;
        IntPoly prim = p.primitive(&unit);
        mpq_class sc = s * unit;
        sc.canonicalize();
        return {sc, std::move(prim)};
    }

    std::vector<mpq_class> rational_coeffs() const {
        std::vector<mpq_class> r;
        for (const auto& c : poly.coeffs()) r.emplace_back(scale * c);
        return r;
    }

    bool is_zero() const { return scale == 0 || poly.is_zero(); }
};

/// Sum s1*p1 + s2*p2 brought back to scale * primitive form.
inline ScaledPoly combine(const mpq_class& s1, const IntPoly& p1, const mpq_class& s2, const IntPoly& p2) {
    const mpz_class den = [&] {
        mpz_class d;
        mpz_lcm(d.get_mpz_t(), s1.get_den_mpz_t(), s2.get_den_mpz_t());
        return d;
    }();
    const mpz_class a = mpz_class(s1 * den);
    const mpz_class b = mpz_class(s2 * den);
    return ScaledPoly::from_int(a * p1 + b * p2, mpq_class(1, den));
}

/// Primitive pseudo-remainder of a by b.
inline IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> r(a.coeffs());
    const int db = b.degree();
    const mpz_class& lb = b.leading();
    while (static_cast<int>(r.size()) - 1 >= db && !r.empty()) {
        const int dr = static_cast<int>(r.size()) - 1;
        if (r[dr] == 0) {
            r.pop_back();
            continue;
        }
        const mpz_class lr = r[dr];
        for (auto& v : r) v *= lb;
        for (int i = 0; i <= db; ++i) r[dr - db + i] -= lr * b[i];
        r.pop_back();
        mpz_class g = 0;
        for (const auto& v : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g > 1)
            for (auto& v : r) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    }
    return IntPoly(std::move(r)).primitive();
}

/// a / b for b dividing a over Q, as a primitive polynomial.
inline IntPoly exact_quotient(const IntPoly& a, const IntPoly& b) {
    const int db = b.degree();
    const int da = a.degree();
    if (da < db) return {};
    std::vector<mpq_class> r(a.coeffs().begin(), a.coeffs().end());
    std::vector<mpq_class> q(static_cast<std::size_t>(da - db + 1));
    const mpq_class lb(b.leading());
    for (int i = da; i >= db; --i) {
        mpq_class t = r[i] / lb;
        q[i - db] = t;
        if (t == 0) continue;
        for (int j = 0; j <= db; ++j) r[i - db + j] -= t * b[j];
    }
    return ScaledPoly::from_rationals(q).poly;
}

/// gcd over Q by primitive remainder sequence; primitive, positive leading coefficient.
inline IntPoly gcd(IntPoly a, IntPoly b) {
    a = a.primitive();
    b = b.primitive();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPoly r = pseudo_remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.primitive();
}

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline std::vector<u64> reduce_mod(const IntPoly& p, u64 m) {
    std::vector<u64> r;
    r.reserve(p.coeffs().size());
    mpz_class mm;
    mpz_import(mm.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &m);
    mpz_class t;
    for (const auto& c : p.coeffs()) {
        mpz_fdiv_r(t.get_mpz_t(), c.get_mpz_t(), mm.get_mpz_t());
        u64 v = 0;
        mpz_export(&v, nullptr, 1, sizeof(u64), 0, 0, t.get_mpz_t());
        r.push_back(v);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

inline int gcd_degree_mod(std::vector<u64> a, std::vector<u64> b, u64 m) {
    auto trim = [](std::vector<u64>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        const u64 inv = powmod(b.back(), m - 2, m);
        while (a.size() >= b.size() && !a.empty()) {
            const u64 f = mulmod(a.back(), inv, m);
            const std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) {
                const u64 t = mulmod(f, b[i], m);
                a[off + i] = a[off + i] >= t ? a[off + i] - t : a[off + i] + m - t;
            }
            trim(a);
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

}  // namespace detail

/// Sufficient test for square-freeness over Q: gcd(p, p') is constant modulo
/// the prime 2^61 - 1 and the degree does not drop. false means "unknown".
inline bool squarefree_mod_prime(const IntPoly& p) {
    if (p.degree() <= 1) return true;
    constexpr detail::u64 m = (detail::u64{1} << 61) - 1;
    const auto pm = detail::reduce_mod(p, m);
    if (static_cast<int>(pm.size()) - 1 != p.degree()) return false;
    const auto dm = detail::reduce_mod(p.derivative(), m);
    if (static_cast<int>(dm.size()) - 1 != p.degree() - 1) return false;
    return detail::gcd_degree_mod(pm, dm, m) == 0;
}

/// Square-free decomposition: element i holds the product of the irreducible
/// factors of multiplicity i + 1 (primitive; constants where absent).
inline std::vector<IntPoly> squarefree_decomposition(const IntPoly& p) {
    std::vector<IntPoly> out;
    if (p.degree() <= 0) return out;
    const IntPoly a = p.primitive();
    if (squarefree_mod_prime(a)) return {a};
    // Yun's algorithm; rational scales are tracked so that y - w' is exact.
    const IntPoly b = a.derivative();
    const IntPoly c = gcd(a, b);
    auto quot_q = [](const IntPoly& num, const IntPoly& den) {
        const int dn = num.degree(), dd = den.degree();
        std::vector<mpq_class> r(num.coeffs().begin(), num.coeffs().end());
        std::vector<mpq_class> q(static_cast<std::size_t>(std::max(dn - dd + 1, 0)));
        const mpq_class lb(den.leading());
        for (int i = dn; i >= dd; --i) {
            mpq_class t = r[i] / lb;
            q[i - dd] = t;
            if (t == 0) continue;
            for (int j = 0; j <= dd; ++j) r[i - dd + j] -= t * den[j];
        }
        return ScaledPoly::from_rationals(q);
    };
    ScaledPoly W = quot_q(a, c);
    ScaledPoly Y = quot_q(b, c);
    for (int guard = 0; guard <= a.degree() + 1; ++guard) {
        // Z = Y - W'
        ScaledPoly Z = combine(Y.scale, Y.poly, -W.scale, W.poly.derivative());
        if (Z.is_zero()) {
            out.push_back(W.poly);
            break;
        }
        IntPoly f = gcd(W.poly, Z.poly);
        out.push_back(f);
        ScaledPoly W2 = quot_q(W.poly, f);
        W2.scale *= W.scale;
        ScaledPoly Y2 = quot_q(Z.poly, f);
        Y2.scale *= Z.scale;
        W = std::move(W2);
        Y = std::move(Y2);
        if (W.poly.degree() <= 0) break;
    }
    while (!out.empty() && out.back().degree() <= 0) out.pop_back();
    return out;
}

}  // namespace bellshape::exact
