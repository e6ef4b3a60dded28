#include "bellshape/amcm.hpp"
#include "bellshape/pff.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace bellshape;

namespace {

// Centered exponential with transform e^{i alpha xi} / (1 + i alpha xi).
double atom_density(double alpha, double x) {
    const double y = x + alpha;
    if (alpha > 0) return y > 0 ? std::exp(-y / alpha) / alpha : 0.0;
    return y < 0 ? std::exp(y / -alpha) / -alpha : 0.0;
}

}  // namespace

TEST(Pff, TransformMatchesPhiRepresentation) {
    const PolyaFrequency h{0.3, 0.2, {1.5, -0.4, 0.7}};
    const auto p = pff_phi(h);
    for (double xi : {0.1, 0.9, 4.0, 15.0}) {
        const auto a = pff_transform(h, xi), b = transform(p, xi);
        EXPECT_NEAR(std::abs(a - b) / std::abs(a), 0.0, 1e-8) << xi;
    }
}

TEST(Pff, TransformOfSingleAtomIsFourierIntegral) {
    const double alpha = 0.8;
    boost::math::quadrature::exp_sinh<double> es;
    for (double xi : {0.5, 2.0}) {
        const double re = es.integrate([&](double y) { return std::exp(-y / alpha) / alpha * std::cos(xi * (y - alpha)); });
        const double im = -es.integrate([&](double y) { return std::exp(-y / alpha) / alpha * std::sin(xi * (y - alpha)); });
        const auto v = pff_transform(PolyaFrequency{0.0, 0.0, {alpha}}, xi);
        EXPECT_NEAR(v.real(), re, 1e-10);
        EXPECT_NEAR(v.imag(), im, 1e-10);
    }
}

TEST(Pff, SampleSingleAtomClosedForm) {
    const PolyaFrequency h{0.0, 0.0, {-0.5}};
    const std::vector<double> xs{-2.0, -0.3, 0.2, 0.6, 1.4};
    const auto s = pff_sample(h, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(s.h[i], atom_density(-0.5, xs[i]), 1e-12);
}

TEST(Pff, SampleTwoAtomsMatchesConvolution) {
    const PolyaFrequency h{0.0, 0.0, {1.0, -0.5}};
    boost::math::quadrature::tanh_sinh<double> ts;
    const std::vector<double> xs{-2.0, -1.0, 0.0, 1.0, 2.0};
    const auto s = pff_sample(h, xs, 1e-10);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        // supports: y > -1 and x - y < 1/2
        const double want = ts.integrate([&](double y) { return atom_density(1.0, y) * atom_density(-0.5, x - y); }, std::max(-1.0, x - 0.5), INFINITY);
        EXPECT_NEAR(s.h[i], want, 1e-7) << x;
    }
}

TEST(Pff, InversionAgreesWithPartialFractions) {
    const PolyaFrequency h{0.0, 0.3, {1.0, -0.5, 0.25}};
    const std::vector<double> xs{-1.5, -0.2, 0.4, 2.0};
    const auto s = pff_sample(h, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(detail::invert_point(h, xs[i], 1e-10), s.h[i], 1e-8) << xs[i];
}

TEST(Pff, GaussianWithAtomMatchesConvolution) {
    const PolyaFrequency h{0.25, 0.0, {0.5}};
    boost::math::quadrature::tanh_sinh<double> ts;
    const auto s = pff_sample(h, {-1.0, 0.0, 1.5});
    for (std::size_t i = 0; i < 3; ++i) {
        const double x = s.x[i];
        // e^{-y^2}/sqrt(pi) convolved with the atom density, supported where x - y > -1/2
        const double want = ts.integrate([&](double y) { return std::exp(-y * y) / std::sqrt(M_PI) * atom_density(0.5, x - y); }, -INFINITY, x + 0.5);
        EXPECT_NEAR(s.h[i], want, 1e-8) << x;
    }
}

TEST(Pff, GaussianFactorSample) {
    const PolyaFrequency h{0.25, 0.0, {}};
    const auto s = pff_sample(h, {0.0, 1.0});
    // Phi = e^{-xi^2/4}: density e^{-x^2} / sqrt(pi)
    EXPECT_NEAR(s.h[0], 1.0 / std::sqrt(M_PI), 1e-8);
    EXPECT_NEAR(s.h[1], std::exp(-1.0) / std::sqrt(M_PI), 1e-8);
}

TEST(Pff, RejectsZeroAtom) { EXPECT_THROW((PolyaFrequency{0.0, 0.0, {0.0}}.check()), DomainError); }

TEST(Pff, VariationDiminishingRandomTrials) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> grid;
    for (int i = 0; i <= 600; ++i) grid.push_back(-15.0 + 30.0 * i / 600.0);
    for (int trial = 0; trial < 10; ++trial) {
        PolyaFrequency h;
        for (int k = 0; k < 1 + trial % 3; ++k) {
            double a = u(rng);
            if (std::fabs(a) < 0.1) a = 0.1;
            h.atoms.push_back(a);
        }
        StepTest t;
        for (int k = 0; k < 6; ++k) t.breaks.push_back(-6.0 + 2.0 * k + 0.3 * u(rng));
        for (int k = 0; k < 7; ++k) t.values.push_back(u(rng));
        const auto r = variation_diminishing_check(h, t, grid);
        EXPECT_LE(r.after, r.before) << trial;
        EXPECT_NEAR(r.kernel_mass, 1.0, 0.5);
    }
}

TEST(Pff, CountSignChangesIgnoresBand) {
    EXPECT_EQ(count_sign_changes({1.0, -1.0, 1e-12, 1.0}, 1e-9), 2);
    EXPECT_EQ(count_sign_changes({1.0, -1e-12, 1.0}, 1e-9), 0);
}

TEST(AmCm, EvalAndTransformAgainstFourierIntegral) {
    AmCmFunction g;
    g.mu_plus = BernsteinMeasure({{1.0, 1.0}, {3.0, 0.5}});
    g.mu_minus = BernsteinMeasure({{2.0, 1.0}});
    EXPECT_NEAR(amcm_eval(g, 0.5), std::exp(-0.5) + 0.5 * std::exp(-1.5), 1e-15);
    EXPECT_NEAR(amcm_eval(g, -0.5), std::exp(-1.0), 1e-15);
    boost::math::quadrature::exp_sinh<double> es;
    for (double xi : {0.3, 1.0, 4.0}) {
        auto part = [&](double sgn) {
            const double re = es.integrate([&](double x) { return amcm_eval(g, sgn * x) * std::cos(xi * x); });
            const double im = -sgn * es.integrate([&](double x) { return amcm_eval(g, sgn * x) * std::sin(xi * x); });
            return std::complex<double>(re, im);
        };
        const auto want = part(1.0) + part(-1.0);
        const auto got = amcm_transform(g, xi);
        EXPECT_NEAR(std::abs(got - want), 0.0, 1e-9) << xi;
    }
}

TEST(AmCm, DensityPart) {
    AmCmFunction g;
    g.mu_plus = BernsteinMeasure({}, {1.0, 2.0}, {1.0, 1.0});
    // int_1^2 e^{-s x} ds
    const double x = 0.7;
    EXPECT_NEAR(amcm_eval(g, x), (std::exp(-x) - std::exp(-2 * x)) / x, 1e-12);
    EXPECT_THROW(cm_spotcheck(g, {1.0}, 3), Unsupported);
}

TEST(AmCm, SpotcheckSigns) {
    AmCmFunction g;
    g.mu_plus = BernsteinMeasure({{1.0, 2.0}, {5.0, 0.1}});
    const auto v = cm_spotcheck(g, {0.1, 1.0, 10.0}, 8);
    EXPECT_TRUE(v.pass);
    EXPECT_GE(v.min_value, 0.0);
}

TEST(AmCm, RejectsInvalidMeasures) {
    EXPECT_THROW(BernsteinMeasure({{-1.0, 1.0}}), StructuralError);
    EXPECT_THROW(BernsteinMeasure({{1.0, -1.0}}), StructuralError);
    EXPECT_THROW(BernsteinMeasure({}, {2.0, 1.0}, {1.0, 1.0}), StructuralError);
}
