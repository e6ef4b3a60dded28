#include "bellshape/exact/polynomial.hpp"
#include "bellshape/exact/rational.hpp"
#include "bellshape/exact/roots.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bellshape::exact;

TEST(IntPoly, ArithmeticAndDerivative) {
    const IntPoly p{1, 0, 1};  // 1 + x^2
    const IntPoly q{-1, 1};    // x - 1
    EXPECT_EQ(p * q, (IntPoly{-1, 1, -1, 1}));
    EXPECT_EQ(p + q, (IntPoly{0, 1, 1}));
    EXPECT_EQ(p - p, IntPoly{});
    EXPECT_EQ((p * q).derivative(), (IntPoly{1, -2, 3}));
    EXPECT_EQ(p.degree(), 2);
    EXPECT_EQ(p.eval(mpq_class(1, 2)), mpq_class(5, 4));
}

TEST(IntPoly, PrimitivePartAndGcd) {
    const IntPoly p{6, 0, -6};
    mpz_class unit;
    EXPECT_EQ(p.primitive(&unit), (IntPoly{-1, 0, 1}));
    EXPECT_EQ(unit, -6);
    const IntPoly a = IntPoly{-1, 1} * IntPoly{2, 1};
    const IntPoly b = IntPoly{-1, 1} * IntPoly{3, 1};
    auto g = gcd(a, b).primitive();
    EXPECT_EQ(g, (IntPoly{-1, 1}));
}

TEST(IntPoly, SquarefreeDecomposition) {
    // (x - 1)^3 (x + 2)
    const IntPoly l{-1, 1};
    const IntPoly p = l * l * l * IntPoly{2, 1};
    const auto parts = squarefree_decomposition(p);
    ASSERT_GE(parts.size(), 3u);
    IntPoly prod = IntPoly::constant(1);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t k = 0; k <= i; ++k) prod = prod * parts[i];
    EXPECT_EQ(prod.primitive(), p.primitive());
}

TEST(IntPoly, LogEvaluationMatchesDouble) {
    const IntPoly p{3, -4, 0, 1};
    for (double x : {-3.5, -0.25, 0.7, 2.0, 40.0}) {
        const double v = 3 - 4 * x + x * x * x;
        auto [s, l] = p.eval_log(x);
        EXPECT_EQ(s, (v > 0) - (v < 0));
        EXPECT_NEAR(std::exp(l), std::fabs(v), 1e-13 * std::fabs(v));
    }
}

TEST(RealRoots, QuadraticSurds) {
    const auto r = real_roots(IntPoly{-2, 0, 1}, RootDomain::Real);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_LE(r[0].lo_d(), -std::sqrt(2.0));
    EXPECT_GE(r[0].hi_d(), -std::sqrt(2.0));
    EXPECT_LE(r[1].lo_d(), std::sqrt(2.0));
    EXPECT_GE(r[1].hi_d(), std::sqrt(2.0));
    EXPECT_LT(r[1].hi_d() - r[1].lo_d(), 1e-12);
}

TEST(RealRoots, DomainsAndMultiplicity) {
    // (x + 1)(x - 1/2)^2 (x - 3)
    const IntPoly h{-1, 2};
    const IntPoly p = IntPoly{1, 1} * h * h * IntPoly{-3, 1};
    const auto all = real_roots(p, RootDomain::Real);
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(all[1].multiplicity, 2);
    EXPECT_EQ(real_roots(p, RootDomain::Positive).size(), 2u);
    const auto unit = real_roots(p, RootDomain::UnitInterval);
    ASSERT_EQ(unit.size(), 1u);
    EXPECT_NEAR(unit[0].mid(), 0.5, 1e-15);
    const auto split = split_by_parity(all);
    EXPECT_EQ(split.changes.size(), 2u);
    EXPECT_EQ(split.touches.size(), 1u);
}

TEST(RealRoots, NoRealRoots) { EXPECT_TRUE(real_roots(IntPoly{1, 0, 1}, RootDomain::Real).empty()); }

TEST(Rational, ParsesDecimalsAndFractions) {
    EXPECT_EQ(parse_rational("0.25"), mpq_class(1, 4));
    EXPECT_EQ(parse_rational("-3/6"), mpq_class(-1, 2));
    EXPECT_EQ(parse_rational("1e-3"), mpq_class(1, 1000));
    EXPECT_THROW(parse_rational("abc"), std::exception);
}

TEST(Rational, PiOverPowers) {
    EXPECT_NEAR(pi_rational().get_d(), M_PI, 1e-16);
    const auto a = parse_rational_pi("1/pi");
    EXPECT_FALSE(a.exact);
    EXPECT_NEAR(a.value.get_d(), 1.0 / M_PI, 1e-16);
    const auto b = parse_rational_pi("4/pi^2");
    EXPECT_NEAR(b.value.get_d(), 4.0 / (M_PI * M_PI), 1e-16);
    EXPECT_TRUE(parse_rational_pi("0.5").exact);
}
