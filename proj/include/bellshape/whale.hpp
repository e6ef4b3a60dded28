#pragma once

// Whale-shaped functions: m exponential factors convolved with a finite-atom
// completely monotone function, and certification of the min{n, m} profile.

#include "bellshape/errors.hpp"
#include "bellshape/exactdiff.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <string>
#include <vector>

namespace bellshape {

struct WhaleAtom {
    mpq_class location;  // decay rate of the CM term
    mpq_class mass;
};

struct WhaleSpec {
    std::vector<mpq_class> rates;  // scales alpha_j; factor (1/alpha) e^{-x/alpha}
    std::vector<WhaleAtom> cm_part;

    void check() const {
        for (const auto& a : rates)
            if (a <= 0) throw StructuralError("whale spec: rates must be positive");
        if (cm_part.empty()) throw StructuralError("whale spec: the completely monotone part needs at least one atom");
        for (const auto& w : cm_part) {
            if (w.location <= 0) throw StructuralError("whale spec: atom locations must be positive");
            if (w.mass <= 0) throw StructuralError("whale spec: atom masses must be positive");
        }
    }
    int order() const { return static_cast<int>(rates.size()); }
};

/// Exponential-sum closed form by partial fractions of
/// prod_j lambda_j/(lambda_j + z) * sum_i w_i/(s_i + z), lambda_j = 1/alpha_j.
inline ExactDensity whale_build(const WhaleSpec& spec) {
    spec.check();
    std::vector<mpq_class> lam;
    for (const auto& a : spec.rates) lam.push_back(mpq_class(1 / a));
    mpq_class lam_prod = 1;
    for (const auto& l : lam) lam_prod *= l;
    for (std::size_t i = 0; i < lam.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (lam[i] == lam[j]) throw Unsupported("whale_build: coinciding rates");
    for (const auto& w : spec.cm_part)
        for (const auto& l : lam)
            if (l == w.location) throw Unsupported("whale_build: a rate coincides with a CM atom location");

    std::vector<ExpTerm> terms;
    auto add = [&](const mpq_class& rate, const mpq_class& coef) {
        for (auto& t : terms)
            if (t.rate == rate) {
                t.coef += coef;
                return;
            }
        terms.push_back({coef, rate});
    };
    for (const auto& w : spec.cm_part) {
        std::vector<mpq_class> poles = lam;
        poles.push_back(w.location);
        for (std::size_t p = 0; p < poles.size(); ++p) {
            mpq_class den = 1;
            for (std::size_t q = 0; q < poles.size(); ++q)
                if (q != p) den *= poles[q] - poles[p];
            add(poles[p], w.mass * lam_prod / den);
        }
    }
    terms.erase(std::remove_if(terms.begin(), terms.end(), [](const ExpTerm& t) { return t.coef == 0; }), terms.end());
    std::sort(terms.begin(), terms.end(), [](const ExpTerm& a, const ExpTerm& b) { return a.rate < b.rate; });
    return ExactDensity::exp_sum(std::move(terms), "whale");
}

struct WhaleRow {
    int n = 0;
    int count = 0;
    std::vector<ZeroEnclosure> zeros;
};

struct WhaleVerdict {
    bool pass = true;           // counts equal min{n, m} and boundary sums vanish
    bool boundary_flat = true;  // sum c_i (-lambda_i)^j = 0 for j < m, exactly
    int first_bad_n = -1;
    std::vector<WhaleRow> rows;
};

/// Counts sign changes of f^(n) on (0, inf) for n <= n_max through t = e^{-x/D}.
inline WhaleVerdict whale_certify(const ExactDensity& f, int m, int n_max) {
    if (f.kind() != ExactDensity::Kind::ExpSum) throw PreconditionError("whale_certify: an exponential sum is required");
    if (m < 0) throw DomainError("whale_certify: m must be nonnegative");
    WhaleVerdict v;
    for (int j = 0; j < m; ++j) {
        mpq_class s = 0;
        for (const auto& t : f.terms()) s += t.coef * exact::pow_q(-t.rate, static_cast<unsigned long>(j));
        if (s != 0) v.boundary_flat = false;
    }
    const auto tables = zero_tables(f, n_max, std::max(n_max, default_derivative_cap));
    for (const auto& t : tables) {
        v.rows.push_back({t.n, t.count, t.zeros});
        if (t.count != std::min(t.n, m) && v.first_bad_n < 0) v.first_bad_n = t.n;
    }
    v.pass = v.boundary_flat && v.first_bad_n < 0;
    return v;
}

}  // namespace bellshape
