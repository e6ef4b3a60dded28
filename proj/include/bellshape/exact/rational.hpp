#pragma once

// Rational helpers: parsing, a dyadic approximant of pi, exact powers.

#include "bellshape/errors.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bellshape::exact {

namespace detail {

// atan(1/x) * 2^bits for integer x > 1, truncated Taylor series.
inline mpz_class atan_inv_fixed(unsigned long x, unsigned long bits) {
    mpz_class one;
    mpz_ui_pow_ui(one.get_mpz_t(), 2, bits);
    mpz_class term = one / x;
    mpz_class sum = term;
    const unsigned long x2 = x * x;
    for (unsigned long k = 1; term != 0; ++k) {
        term /= x2;
        const mpz_class t = term / (2 * k + 1);
        if (k % 2) sum -= t;
        else sum += t;
    }
    return sum;
}

}  // namespace detail

/// Dyadic rational within 2^-(bits-8) of pi (Machin's formula).
inline mpq_class pi_rational(unsigned long bits = 256) {
    const unsigned long guard = bits + 16;
    mpz_class v = 16 * detail::atan_inv_fixed(5, guard) - 4 * detail::atan_inv_fixed(239, guard);
    mpq_class r(v);
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), guard);
    r.canonicalize();
    return r;
}

/// Parse "3", "-1/4", "0.25", "2.5e-3" exactly (decimals are exact in base 10).
inline mpq_class parse_rational(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
    if (s.empty()) throw StructuralError("empty rational literal");
    try {
        const auto slash = s.find('/');
        if (slash != std::string::npos) {
            mpq_class r(parse_rational(s.substr(0, slash)) / parse_rational(s.substr(slash + 1)));
            r.canonicalize();
            return r;
        }
        long exp10 = 0;
        const auto epos = s.find_first_of("eE");
        if (epos != std::string::npos) {
            exp10 = std::stol(s.substr(epos + 1));
            s = s.substr(0, epos);
        }
        const auto dot = s.find('.');
        if (dot != std::string::npos) {
            exp10 -= static_cast<long>(s.size() - dot - 1);
            s.erase(dot, 1);
        }
        if (s == "+" || s == "-" || s.empty()) throw StructuralError("bad rational literal");
        if (s[0] == '+') s.erase(0, 1);
        mpz_class num(s, 10);
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
        mpq_class r = exp10 >= 0 ? mpq_class(num * p10) : mpq_class(num, p10);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw StructuralError("bad rational literal: " + s);
    } catch (const std::out_of_range&) {
        throw StructuralError("rational literal out of range: " + s);
    }
}

/// Exact value of a finite double.
inline mpq_class from_double(double d) {
    if (!std::isfinite(d)) throw DomainError("non-finite value where a rational is required");
    return mpq_class(d);
}

/// A rational parameter that may carry factors of 1/pi: "r", "r/pi", "r/pi^2".
/// The returned value uses pi_rational(); `exact` is false when pi was involved.
struct ParsedRational {
    mpq_class value;
    bool exact = true;
    std::string text;
};

inline ParsedRational parse_rational_pi(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
    int pi_power = 0;
    for (const char* suffix : {"/pi^2", "/pi**2", "/pi"}) {
        const std::string suf(suffix);
        if (s.size() > suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0) {
            pi_power = suf.find('2') != std::string::npos ? 2 : 1;
            s.erase(s.size() - suf.size());
            break;
        }
    }
    if (s.size() > 1 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    mpq_class v = parse_rational(s);
    if (pi_power > 0) {
        const mpq_class pi = pi_rational();
        for (int i = 0; i < pi_power; ++i) v /= pi;
        v.canonicalize();
    }
    return {v, pi_power == 0, text};
}

inline mpq_class pow_q(const mpq_class& b, unsigned long e) {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), e);
    r.canonicalize();
    return r;
}

inline std::string to_string(const mpq_class& q) { return q.get_str(); }

}  // namespace bellshape::exact
