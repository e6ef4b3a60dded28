#include "bellshape/factor.hpp"
#include "bellshape/post.hpp"
#include "bellshape/whale.hpp"
#include "bellshape/zeromeasure.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace bellshape;

TEST(Factor, SplitStaircaseWithRamp) {
    // phi = s on (0, 2.5) then 2.5; mirrored as -s on the left down to -1.5
    const PhiFunction phi({-1.5, 0.0, 2.5}, {{1.0, 0.0}, {1.0, 0.0}}, Tail::constant(-1.5), Tail::constant(2.5));
    const auto split = split_phi(phi, 5);
    ASSERT_EQ(split.crossings.size(), 3u);
    EXPECT_DOUBLE_EQ(split.crossings[0], -1.0);
    EXPECT_DOUBLE_EQ(split.crossings[1], 1.0);
    EXPECT_DOUBLE_EQ(split.crossings[2], 2.0);
    std::vector<double> grid;
    for (int i = -400; i <= 400; ++i) grid.push_back(i * 0.01 + 0.003);
    EXPECT_TRUE(sandwich_check(phi, split, grid).ok);
}

TEST(Factor, CauchyRoundTrip) {
    const auto f = factorise(cauchy_params(), 50, 1e-6);
    EXPECT_LE(f.residual, 1e-6);
    ASSERT_EQ(f.pff.atoms.size(), 100u);
    // crossings of s/pi at k pi
    EXPECT_NEAR(f.split.crossings.front(), -50 * M_PI, 1e-10);
    EXPECT_NEAR(f.split.crossings.back(), 50 * M_PI, 1e-10);
}

TEST(Factor, GaussianHasNoAtoms) {
    const auto f = factorise(gaussian_params(1.0), 50, 1e-10);
    EXPECT_TRUE(f.pff.atoms.empty());
    EXPECT_DOUBLE_EQ(f.pff.a, 1.0);
    EXPECT_LE(f.residual, 1e-10);
}

TEST(Factor, WindowTooSmall) { EXPECT_THROW(split_phi(PhiFunction({0.0, 10.0}, {{1.0, 0.0}}, Tail::constant(0.0), Tail::constant(10.0)), 3), RangeError); }

TEST(Factor, WhaleHasStepRepresentation) {
    // e^{-x} - e^{-2x} = (1/2) (e^{-x} * 2 e^{-2x}): PFF atoms 1 and 1/2, phi in [0, 2]
    const auto f = whale_build(WhaleSpec{{mpq_class(1)}, {{mpq_class(2), mpq_class(1)}}});
    const auto d = nth_derivative(f, 0);
    const auto p = pff_phi(PolyaFrequency{0.0, 0.0, {1.0, 0.5}});
    boost::math::quadrature::exp_sinh<double> es;
    for (double xi : {0.3, 1.0, 4.0}) {
        const double re = es.integrate([&](double x) { return d.eval(x) * std::cos(xi * x); });
        const double im = -es.integrate([&](double x) { return d.eval(x) * std::sin(xi * x); });
        const auto want = std::complex<double>(re, im);
        const auto got = 0.5 * transform(p, xi) * std::exp(std::complex<double>(0.0, -1.5 * xi));
        EXPECT_NEAR(std::abs(got - want), 0.0, 1e-9) << xi;
    }
    const auto fp = factorise(p, 4, 1e-9);
    EXPECT_EQ(fp.pff.atoms, (std::vector<double>{1.0, 0.5}));
    for (double s : {0.5, 1.5, 3.0}) EXPECT_DOUBLE_EQ(fp.split.phi_g(s), 0.0);
}

TEST(Post, CauchyApproachesClosedForm) {
    const auto f = ExactDensity::cauchy();
    double prev = INFINITY;
    for (int n : {10, 40, 160}) {
        const auto v = post_approximant(f, 1.0, n);
        const double err = std::abs(v - M_PI / M_E) / (M_PI / M_E);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 0.02);
}

TEST(Post, IntegrationByPartsMatchesLiteralForm) {
    for (const auto& f : {ExactDensity::cauchy(), ExactDensity::gaussian()})
        for (int n : {1, 3, 6}) {
            const auto a = post_approximant(f, 0.8, n), b = post_approximant_literal(f, 0.8, n);
            EXPECT_NEAR(std::abs(a - b) / std::abs(a), 0.0, 1e-7) << f.name() << " " << n;
        }
}

TEST(Post, GaussianLimit) {
    const auto v = post_approximant(ExactDensity::gaussian(), 1.5, 200);
    const double want = std::sqrt(M_PI) * std::exp(-1.5 * 1.5 / 4);
    EXPECT_LT(std::abs(v - want) / want, 0.02);
}

TEST(Post, RejectsOrders) {
    EXPECT_THROW(post_approximant(ExactDensity::cauchy(), 1.0, 0), DomainError);
    EXPECT_THROW(post_approximant(ExactDensity::cauchy(), 1.0, 401), RangeError);
}

TEST(Gn, MassAndPositivity) {
    for (const auto& f : {ExactDensity::cauchy(), ExactDensity::gaussian()})
        for (int n : {1, 4, 9}) {
            GnCheck c;
            const auto g = gn_build(f, n, 1e-9, &c);
            EXPECT_GE(c.grid_min, -1e-9 * c.grid_max);
            EXPECT_NEAR(c.mass, c.target_mass, 1e-8 * c.target_mass) << f.name() << " " << n;
            EXPECT_EQ(static_cast<int>(g.zeros().size()), n);
        }
}

TEST(Gn, FactorIdentity) {
    for (double xi : {0.5, 2.0}) EXPECT_LE(verify_factor_identity(ExactDensity::cauchy(), 6, xi), 1e-8);
}

TEST(Gn, PffCrossingsAreReciprocalZeros) {
    EXPECT_TRUE(gn_pff_crossings_match(GnFunction(ExactDensity::cauchy(), 7)));
    EXPECT_TRUE(gn_pff_crossings_match(GnFunction(ExactDensity::levy(), 5)));
}

TEST(ZeroMeasure, CauchyMassFormula) {
    for (int n : {5, 12}) {
        double want = 0.0;
        for (int k = 1; k <= n; ++k) {
            const long double c = std::cos(k * M_PIl / (n + 1)) / std::sin(k * M_PIl / (n + 1)) / n;
            want += static_cast<double>(c * c);
        }
        EXPECT_NEAR(zero_measure(ExactDensity::cauchy(), n).total_mass(), want, 1e-12);
    }
}

TEST(ZeroMeasure, HatIntegralsMatchCotZeros) {
    const auto lim = LimitMeasure::cauchy();
    const HatFunction u{0.2, 0.45};
    for (int n : {10, 20, 40}) {
        // exact zero locations give the analytic finite-n value
        double analytic = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double a = static_cast<double>(std::cos(k * M_PIl / (n + 1)) / std::sin(k * M_PIl / (n + 1))) / n;
            analytic += a * a * u(a);
        }
        const double got = integrate_against(zero_measure(ExactDensity::cauchy(), n).atoms, u);
        EXPECT_NEAR(got, analytic, 1e-10);
    }
    // hats centred on limit atoms: discrepancy shrinks with n
    for (const auto& row : compare_to_limit({zero_measure(ExactDensity::cauchy(), 10), zero_measure(ExactDensity::cauchy(), 20),
                                             zero_measure(ExactDensity::cauchy(), 40)},
                                            lim, default_tests(lim))) {
        for (std::size_t i = 1; i < row.discrepancy.size(); ++i) EXPECT_LT(row.discrepancy[i], row.discrepancy[i - 1]);
    }
}

TEST(ZeroMeasure, Figure3RowCount) {
    const auto rows = figure3_data(ExactDensity::cauchy(), 12);
    EXPECT_EQ(rows.size(), 78u);
    EXPECT_EQ(rows.front().k, 1);
    EXPECT_NEAR(rows.front().alpha, 0.0, 1e-15);  // n = 1: zero at 0
}
