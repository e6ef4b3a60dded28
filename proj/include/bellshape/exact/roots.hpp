#pragma once

// Certified real root isolation for integer polynomials: Descartes rule of
// signs with dyadic bisection (Vincent-Collins-Akritas), exact sign refinement.

#include "bellshape/errors.hpp"
#include "bellshape/exact/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

namespace bellshape::exact {

enum class RootDomain { Real, Positive, UnitInterval };

/// Requested enclosure width: refine until hi - lo <= max(abs_width, rel_width * |x|).
struct RefineTarget {
    double abs_width = 0x1p-44;
    double rel_width = 0x1p-46;
};

/// A real root enclosed in [lo, hi] (lo == hi for an exactly located root).
struct RealRoot {
    mpq_class lo, hi;
    int multiplicity = 1;

    bool exact() const { return lo == hi; }
    double lo_d() const { return round_down(lo); }
    double hi_d() const { return round_up(hi); }
    double mid() const { return mpq_class((lo + hi) / 2).get_d(); }

    static double round_down(const mpq_class& q) {
        double d = q.get_d();
        if (mpq_class(d) > q) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
        return d;
    }
    static double round_up(const mpq_class& q) {
        double d = q.get_d();
        if (mpq_class(d) < q) d = std::nextafter(d, std::numeric_limits<double>::infinity());
        return d;
    }
};

namespace detail {

// Root of py on (0, 1) enclosed in [c / 2^j, (c + 1) / 2^j], or exactly c / 2^j.
// The original variable is x = sign * 2^k * y.
struct DyadicRoot {
    std::shared_ptr<const IntPoly> py;
    mpz_class c;
    unsigned long j = 0;
    bool is_exact = false;
    int sign_lo = 0;
    long k = 0;
    int sign = 1;
    int multiplicity = 1;

    void bisect() {
        if (is_exact) return;
        mpz_class mid = 2 * c + 1;
        const unsigned long j2 = j + 1;
        const int sm = py->sign_at_dyadic(mid, j2);
        if (sm == 0) {
            c = mid;
            j = j2;
            is_exact = true;
        } else if (sm != sign_lo) {
            c = 2 * c;
            j = j2;
        } else {
            c = mid;
            j = j2;
            sign_lo = sm;
        }
    }

    // Width in x as a double (0 when exact).
    double width() const {
        if (is_exact) return 0.0;
        return std::ldexp(1.0, static_cast<int>(k - static_cast<long>(j)));
    }

    mpq_class y_to_x(const mpz_class& num) const {
        mpq_class r(num);
        if (k >= static_cast<long>(j)) {
            mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned long>(k - static_cast<long>(j)));
        } else {
            mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(static_cast<long>(j) - k));
        }
        r.canonicalize();
        return sign > 0 ? r : mpq_class(-r);
    }

    RealRoot to_root() const {
        RealRoot r;
        mpq_class a = y_to_x(c);
        mpq_class b = is_exact ? a : y_to_x(c + 1);
        if (a > b) std::swap(a, b);
        r.lo = a;
        r.hi = b;
        r.multiplicity = multiplicity;
        return r;
    }

    double abs_mid() const { return std::fabs(to_root().mid()); }
};

// Descartes bisection of a square-free polynomial on the open interval (0, 1).
inline std::vector<DyadicRoot> isolate_unit(const std::shared_ptr<const IntPoly>& py) {
    struct Node {
        IntPoly q;
        mpz_class c;
        unsigned long j;
    };
    std::vector<DyadicRoot> out;
    std::vector<Node> stack;
    IntPoly q0 = py->primitive();
    if (q0.degree() <= 0) return out;
    // a root at y = 0 is outside the open interval
    q0.strip_zero_root();
    stack.push_back({q0, mpz_class(0), 0});
    std::size_t guard = 0;
    while (!stack.empty()) {
        if (++guard > 2000000) throw NumericalError("root isolation did not terminate");
        Node nd = std::move(stack.back());
        stack.pop_back();
        IntPoly q = std::move(nd.q);
        if (q.degree() <= 0) continue;
        if (q[0] == 0 && nd.c != 0) {
            DyadicRoot r;
            r.py = py;
            r.c = nd.c;
            r.j = nd.j;
            r.is_exact = true;
            out.push_back(r);
            q.strip_zero_root();
            if (q.degree() <= 0) continue;
        }
        const int v = q.reversed().taylor_shift1().sign_variations();
        if (v == 0) continue;
        if (v == 1) {
            DyadicRoot r;
            r.py = py;
            r.c = nd.c;
            r.j = nd.j;
            r.sign_lo = py->sign_at_dyadic(nd.c, nd.j);
            if (r.sign_lo == 0) {
                // left endpoint is a root handled elsewhere; step inside
                r.sign_lo = -py->sign_at_dyadic(nd.c + 1, nd.j);
            }
            out.push_back(r);
            continue;
        }
        IntPoly left = q.scale_roots_pow2(1).primitive();
        IntPoly right = left.taylor_shift1();
        stack.push_back({std::move(right), 2 * nd.c + 1, nd.j + 1});
        stack.push_back({std::move(left), 2 * nd.c, nd.j + 1});
    }
    return out;
}

inline long bitlen(const mpz_class& v) { return v == 0 ? 0 : static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)); }

// Positive roots of a square-free polynomial.
inline std::vector<DyadicRoot> isolate_positive(const IntPoly& p, int sign, int mult) {
    IntPoly q = p;
    q.strip_zero_root();
    if (q.degree() <= 0) return {};
    long bm = 0;
    for (const auto& a : q.coeffs()) bm = std::max(bm, bitlen(a));
    const long k = std::max(bm - bitlen(q.leading()) + 2, 1L);
    auto py = std::make_shared<const IntPoly>(q.scale_roots_pow2(-k).primitive());
    auto roots = isolate_unit(py);
    for (auto& r : roots) {
        r.k = k;
        r.sign = sign;
        r.multiplicity = mult;
    }
    return roots;
}

inline bool overlaps(const RealRoot& a, const RealRoot& b) { return !(a.hi < b.lo) && !(b.hi < a.lo); }

}  // namespace detail

/// Real roots of p in the requested domain, sorted, with multiplicities.
/// Enclosures are pairwise disjoint and refined to `target`.
inline std::vector<RealRoot> real_roots(const IntPoly& p, RootDomain domain, RefineTarget target = {}) {
    if (p.is_zero()) throw DomainError("real_roots: zero polynomial");
    std::vector<detail::DyadicRoot> all;
    const auto factors = squarefree_decomposition(p);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const IntPoly& f = factors[i];
        if (f.degree() <= 0) continue;
        const int mult = static_cast<int>(i) + 1;
        if (domain == RootDomain::UnitInterval) {
            auto py = std::make_shared<const IntPoly>(f);
            auto rs = detail::isolate_unit(py);
            for (auto& r : rs) r.multiplicity = mult;
            all.insert(all.end(), rs.begin(), rs.end());
            continue;
        }
        auto pos = detail::isolate_positive(f, 1, mult);
        all.insert(all.end(), pos.begin(), pos.end());
        if (domain == RootDomain::Real) {
            auto neg = detail::isolate_positive(f.reflected(), -1, mult);
            all.insert(all.end(), neg.begin(), neg.end());
            if (f[0] == 0) {
                detail::DyadicRoot z;
                z.py = std::make_shared<const IntPoly>(f);
                z.c = 0;
                z.is_exact = true;
                z.multiplicity = mult;
                all.push_back(z);
            }
        }
    }
    auto refine_to_target = [&](detail::DyadicRoot& r) {
        for (int it = 0; it < 4000 && !r.is_exact; ++it) {
            const double w = r.width();
            const double m = r.abs_mid();
            if (w <= std::max(target.abs_width, target.rel_width * m)) break;
            r.bisect();
        }
    };
    for (auto& r : all) refine_to_target(r);
    auto by_lo = [](const detail::DyadicRoot& a, const detail::DyadicRoot& b) { return a.to_root().lo < b.to_root().lo; };
    std::sort(all.begin(), all.end(), by_lo);
    for (int pass = 0; pass < 4000; ++pass) {
        bool clean = true;
        for (std::size_t i = 0; i + 1 < all.size(); ++i) {
            if (detail::overlaps(all[i].to_root(), all[i + 1].to_root())) {
                all[i].bisect();
                all[i + 1].bisect();
                clean = false;
            }
        }
        if (clean) break;
        std::sort(all.begin(), all.end(), by_lo);
    }
    std::vector<RealRoot> out;
    out.reserve(all.size());
    for (const auto& r : all) out.push_back(r.to_root());
    return out;
}

/// Roots with odd multiplicity (sign changes) and even multiplicity (touches).
struct SignChangeSplit {
    std::vector<RealRoot> changes;
    std::vector<RealRoot> touches;
};

inline SignChangeSplit split_by_parity(const std::vector<RealRoot>& roots) {
    SignChangeSplit s;
    for (const auto& r : roots) (r.multiplicity % 2 ? s.changes : s.touches).push_back(r);
    return s;
}

}  // namespace bellshape::exact
