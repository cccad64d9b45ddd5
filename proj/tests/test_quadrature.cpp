#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fttsim/quadrature.hpp"

using namespace fttsim;

TEST(Quadrature, PolynomialsAreExact) {
    auto r = integrate([](double x) { return 3 * x * x - 2 * x + 1; }, 0.0, 2.0);
    EXPECT_NEAR(r.value, 8.0 - 4.0 + 2.0, 1e-14);
    EXPECT_EQ(r.evaluations, 15);
}

TEST(Quadrature, ComplexIntegrand) {
    auto r = integrate([](double x) { return std::exp(std::complex<double>(0.0, x)); }, 0.0, std::numbers::pi);
    EXPECT_NEAR(r.value.real(), 0.0, 1e-13);
    EXPECT_NEAR(r.value.imag(), 2.0, 1e-13);
}

TEST(Quadrature, AgreesWithTanhSinhOnEndpointSingularity) {
    auto f = [](double x) { return std::log(x) * std::sqrt(x); };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double ref = ts.integrate(f, 0.0, 1.0);
    QuadratureControl qc;
    qc.abs_tol = 1e-13;
    EXPECT_NEAR(integrate(f, 0.0, 1.0, qc).value, ref, 1e-11);
    EXPECT_NEAR(ref, -4.0 / 9.0, 1e-14);
}

TEST(Quadrature, BreakpointsHandleKinks) {
    auto f = [](double x) { return std::abs(x - 0.3); };
    const double exact = 0.5 * 0.3 * 0.3 + 0.5 * 0.7 * 0.7;
    EXPECT_NEAR(integrate(f, make_breaks(0.0, 1.0, {0.3}), {}).value, exact, 1e-15);
}

TEST(Quadrature, ReportsExhaustedBudget) {
    QuadratureControl qc;
    qc.max_subdivisions = 3;
    qc.abs_tol = 1e-15;
    qc.rel_tol = 1e-15;
    auto f = [](double x) { return std::sin(1.0 / (x + 1e-3)); };
    EXPECT_THROW(integrate(f, 0.0, 1.0, qc), ConvergenceError);
    EXPECT_NO_THROW(integrate(f, 0.0, 1.0, qc, false));
}

TEST(Quadrature, MakeBreaksSortsClipsAndDeduplicates) {
    const auto b = make_breaks(0.0, 2.0, {3.0, 1.0, 1.0, -1.0, 0.5});
    ASSERT_EQ(b.size(), 4u);
    EXPECT_EQ(b[0], 0.0);
    EXPECT_EQ(b[1], 0.5);
    EXPECT_EQ(b[2], 1.0);
    EXPECT_EQ(b[3], 2.0);
}
