#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "fttsim/greens.hpp"
#include "fttsim/specfun.hpp"

using namespace fttsim;

namespace {

// Oracle: the defining tau-integral evaluated with Boost quadrature on the raw Wright
// function (no cached kernel), for real sigma.
double green_oracle(double x, double t, double alpha, double sigma, double g) {
    const double ax = std::abs(x);
    auto f = [&](double tau) {
        const double w = std::sqrt(std::max(0.0, tau * tau - x * x));
        const double z = tau / std::pow(t, alpha);
        return boost::math::cyl_bessel_j(0, sigma * w) * std::pow(t, -g - 1.0) *
               wright_phi(alpha, -g, Complex(-z, 0.0)).real();
    };
    const double upper = ax + 40.0 * std::pow(t, alpha);
    double err = 0;
    return 0.5 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, ax, upper, 15, 1e-13, &err);
}

}  // namespace

TEST(GreenClassical, Values) {
    EXPECT_NEAR(green_classical({0.0, 2.0, 1.0, 1.0}).real(), 0.5 * boost::math::cyl_bessel_j(0, 2.0), 1e-15);
    EXPECT_NEAR(green_classical({0.0, 2.0, 1.0, 1.0}).real(), 0.1119453896, 1e-10);
    EXPECT_EQ(green_classical({3.0, 2.0, 1.0, 1.0}), Complex(0.0));
    const Complex s(-1.0, 0.05);
    EXPECT_LE(std::abs(green_classical({0.0, 2.0, 1.0, s}) - 0.5 * bessel_j0(Complex(-2.0, 0.1))), 1e-15);
}

TEST(GreenClassical, LightConeSupportAndBoundaryConvention) {
    for (double x : {-5.0, -2.0001, 2.0001, 3.5}) EXPECT_EQ(green_classical({x, 2.0, 1.0, 1.0}), Complex(0.0));
    EXPECT_EQ(green_classical({2.0, 2.0, 1.0, 1.0}), Complex(0.25));
    EXPECT_EQ(green_classical({-2.0, 2.0, 1.0, 1.0}), Complex(0.25));
}

TEST(GreensQuery, Validation) {
    EXPECT_THROW(green_classical({0.0, 0.0, 1.0, 1.0}), DomainError);
    EXPECT_THROW(green_fractional({0.0, 1.0, 1.5, 1.0}), DomainError);
    EXPECT_THROW(green_fractional({0.0, 1.0, 0.0, 1.0}), DomainError);
}

TEST(GreenFractional, MatchesRawQuadratureOracle) {
    for (double alpha : {0.5, 0.8})
        for (double x : {0.0, 0.3, 1.2})
            for (double t : {0.5, 1.0, 2.0}) {
                const GreensQuery q{x, t, alpha, 1.0};
                EXPECT_NEAR(green_fractional(q).real(), green_oracle(x, t, alpha, 1.0, 0.0), 1e-9)
                    << alpha << " " << x << " " << t;
                EXPECT_NEAR(green_fractional_rl(q).real(), green_oracle(x, t, alpha, 1.0, alpha - 1.0), 1e-9)
                    << alpha << " " << x << " " << t;
                EXPECT_NEAR(green_fractional_rl2(q).real(), green_oracle(x, t, alpha, 1.0, 2 * alpha - 1.0), 1e-9)
                    << alpha << " " << x << " " << t;
            }
}

TEST(GreenFractional, SigmaZeroNormalisation) {
    // J0 = 1: 1/2 int_0^inf phi(-1/2, 1/2; -tau) dtau = 1/2
    EXPECT_NEAR(green_fractional_rl({0.0, 1.0, 0.5, 0.0}).real(), 0.5, 1e-12);
}

TEST(GreenFractional, FarOutsideTheLightCone) {
    for (double alpha : {0.3, 0.6, 0.9}) {
        // slow stretched-exponential decay for small alpha: compare with the oracle
        const double ref = green_oracle(5.0, 0.1, alpha, 1.0, alpha - 1.0);
        EXPECT_NEAR(green_fractional_rl({5.0, 0.1, alpha, 1.0}).real(), ref, 1e-12 + 1e-8 * std::abs(ref)) << alpha;
        EXPECT_LT(std::abs(green_fractional({40.0, 1.0, alpha, 1.0})), 1e-13) << alpha;
    }
}

TEST(GreenFractional, EvenInX) {
    for (double alpha : {0.4, 0.7, 0.95})
        for (double x : {0.1, 0.6, 1.3}) {
            const Complex s(-1.0, 0.05);
            EXPECT_LE(std::abs(green_fractional({x, 1.0, alpha, s}) - green_fractional({-x, 1.0, alpha, s})), 1e-15);
            EXPECT_LE(std::abs(green_fractional_rl({x, 1.0, alpha, s}) - green_fractional_rl({-x, 1.0, alpha, s})),
                      1e-15);
        }
}

TEST(GreenFractional, RealForRealSigma) {
    for (double alpha : {0.5, 0.9}) EXPECT_LE(std::abs(green_fractional({0.4, 1.3, alpha, -1.0}).imag()), 1e-14);
}

TEST(GreenFractional, AlphaOneIsClassical) {
    const GreensQuery q{0.3, 1.0, 1.0, 1.0};
    EXPECT_EQ(green_fractional(q), green_classical(q));
    EXPECT_EQ(green_fractional_rl(q), green_classical(q));
    EXPECT_THROW(green_fractional_rl2(q), DomainError);
}

TEST(GreenFractional, LimitApproachIsMonotone) {
    const Complex g = green_classical({0.3, 1.0, 1.0, 1.0});
    double prev_g = 1e9, prev_rl = 1e9;
    for (double alpha : {0.9, 0.95, 0.99}) {
        const GreensQuery q{0.3, 1.0, alpha, 1.0};
        const double dg = std::abs(green_fractional(q) - g);
        const double drl = std::abs(green_fractional_rl(q) - g);
        EXPECT_LT(dg, prev_g);
        EXPECT_LT(drl, prev_rl);
        prev_g = dg;
        prev_rl = drl;
    }
}

// Integrating D^{a-1}G_a over x gives t^a E_{2a,a+1}(-sigma^2 t^{2a}).
TEST(GreenFractional, SpatialIntegralMatchesMittagLeffler) {
    for (double alpha : {0.5, 0.75}) {
        const double t = 1.0;
        const Complex s(-1.0, 0.0);
        const SubordinationKernel k(alpha, GreensKind::rl);
        const double xmax = k.support_end() * std::pow(t, alpha);
        auto f = [&](double x) { return green_fractional_with(k, {x, t, alpha, s}); };
        const Complex lhs = 2.0 * integrate(f, make_breaks(0.0, xmax, {0.5, 1.0, 2.0}), {}).value;
        const Complex rhs = std::pow(t, alpha) * mittag_leffler(2 * alpha, alpha + 1, -s * s * std::pow(t, 2 * alpha));
        EXPECT_LE(std::abs(lhs - rhs), 1e-8) << alpha;
    }
}

TEST(GreenFractional, StrongAbsorptionIsRejected) {
    EXPECT_THROW(green_fractional({0.0, 50.0, 0.5, Complex(-1.0, 5.0)}), DomainError);
}

namespace {

// Grünwald-Letnikov derivative of order nu in t of G_a(x, .) from 0 to t with step h.
Complex gl_derivative(double x, double t, double alpha, double nu, int steps) {
    const double h = t / steps;
    Complex sum = 0.0;
    double w = 1.0;
    for (int k = 0; k < steps; ++k) {
        sum += w * green_fractional({x, t - k * h, alpha, 1.0});
        w *= (k - nu) / (k + 1.0);
    }
    return sum * std::pow(h, -nu);
}

}  // namespace

// The two derived kernels are fractional derivatives of G_a in t: order a-1 and 2a-1.
TEST(GreenFractional, DerivedKernelsMatchGrunwaldLetnikov) {
    const double x = 0.5, t = 1.0, alpha = 0.8;
    for (double nu : {alpha - 1.0, 2 * alpha - 1.0}) {
        const Complex a = gl_derivative(x, t, alpha, nu, 400), b = gl_derivative(x, t, alpha, nu, 800);
        const Complex extrap = 2.0 * b - a;
        const GreensQuery q{x, t, alpha, 1.0};
        const Complex ref = nu < 0 ? green_fractional_rl(q) : green_fractional_rl2(q);
        EXPECT_LE(std::abs(extrap - ref), 1e-4) << nu;
    }
}
