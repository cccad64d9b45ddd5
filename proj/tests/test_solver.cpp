#include <gtest/gtest.h>

#include <cmath>

#include "fttsim/solver.hpp"

using namespace fttsim;

namespace {

DiffractionParams perfect(double alpha) { return {alpha, 0.0, PhaseExpr()}; }

}  // namespace

TEST(GridSpec, RejectsCflViolationAndBadShapes) {
    EXPECT_THROW(GridSpec(-1.0, 1.0, 16, 2.0, 8), CFLViolation);
    EXPECT_NO_THROW(GridSpec(-1.0, 1.0, 16, 2.0, 16));
    EXPECT_NO_THROW(GridSpec(-1.0, 1.0, 16, 1.0, 8));
    EXPECT_THROW(GridSpec(1.0, -1.0, 16, 1.0, 16), ConfigError);
    EXPECT_THROW(GridSpec(-1.0, 1.0, 0, 1.0, 16), ConfigError);
    EXPECT_THROW(GridSpec(-1.0, 1.0, 16, 0.0, 16), ConfigError);
}

TEST(L1Weights, Properties) {
    for (double a : {0.3, 0.7, 1.0}) {
        const L1Weights b(a, 64);
        EXPECT_EQ(b[0], 1.0);
        double sum = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (j > 0) {
                EXPECT_LE(b[j], b[j - 1]);
            }
            sum += b[j];
        }
        EXPECT_NEAR(sum, std::pow(64.0, 1.0 - a), 1e-11);
    }
    EXPECT_NEAR(L1Weights(0.5, 4).scale(0.25), 2.0 / std::tgamma(1.5), 1e-14);
    EXPECT_THROW(L1Weights(0.0, 4), DomainError);
}

TEST(L1Weights, ExactForLinearFunctions) {
    // Caputo derivative of t is t^{1-a}/Gamma(2-a); L1 is exact for piecewise-linear data.
    const double a = 0.6, dt = 0.05;
    const int n = 20;
    const L1Weights b(a, n);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += b[j] * dt;
    EXPECT_NEAR(b.scale(dt) * sum, std::pow(n * dt, 1.0 - a) / std::tgamma(2.0 - a), 1e-13);
}

TEST(SolveFd, InitialRowIsExact) {
    const auto init = InitialProfile::gaussian(0.1, 0.4);
    const GridSpec g(-1.0, 1.0, 64, 0.5, 32);
    const auto f = solve_fd(perfect(0.7), init, g);
    for (int i = 0; i <= g.nx; ++i) {
        EXPECT_EQ(f.e0(0, i), init.e0(g.x(i)));
        EXPECT_EQ(f.eh(0, i), Complex(0.0));
    }
}

TEST(SolveFd, ClassicalPlaneWaveConvergesAtSecondOrder) {
    const auto est = refine_and_estimate_order(perfect(1.0), InitialProfile::plane_wave(), GridSpec(-1, 1, 32, 2.0, 32), 4);
    for (std::size_t k = 1; k < est.errors.size(); ++k) EXPECT_LT(est.errors[k], est.errors[k - 1]);
    EXPECT_GT(est.order, 1.7);
    EXPECT_LT(est.errors.back(), 1e-4);
}

TEST(SolveFd, FractionalPlaneWaveOrderAtLeastAlpha) {
    const double a = 0.7;
    const auto est = refine_and_estimate_order(perfect(a), InitialProfile::plane_wave(), GridSpec(-1, 1, 32, 1.0, 32), 4);
    for (std::size_t k = 1; k < est.errors.size(); ++k) EXPECT_LT(est.errors[k], est.errors[k - 1]);
    EXPECT_GE(est.order, a);
}

TEST(SolveFd, UncoupledPlaneWaveIsExact) {
    DiffractionParams p = perfect(0.6);
    p.sigma_override = Complex(0.0);
    const auto est = refine_and_estimate_order(p, InitialProfile::plane_wave(), GridSpec(-1, 1, 8, 1.0, 8), 3);
    for (double e : est.errors) EXPECT_EQ(e, 0.0);
    EXPECT_TRUE(std::isinf(est.order));
}

TEST(SolveFd, ClassicalTransportIsExactAtUnitCourant) {
    DiffractionParams p = perfect(1.0);
    p.sigma_override = Complex(0.0);
    const auto init = InitialProfile::gaussian(0.0, 0.3);
    const GridSpec g(-1.0, 1.0, 64, 0.5, 16);
    const auto f = solve_fd(p, init, g);
    // E0 travels toward -x: E0(x, t) = e0(x + t)
    for (int i = 0; i <= g.nx; ++i) EXPECT_NEAR(std::abs(f.e0(g.nt, i) - init.e0(g.x(i) + g.t_max)), 0.0, 1e-14);
}

TEST(SolveFd, ConservesIntensityWithoutAbsorption) {
    DiffractionParams p{1.0, 0.0, PhaseExpr::parse("linear:0,0.5")};
    const GridSpec g(-1.0, 1.0, 256, 2.0, 256);
    const auto f = solve_fd(p, InitialProfile::plane_wave(), g);
    double worst = 0.0;
    for (int n = 0; n <= g.nt; ++n)
        for (int i = 0; i <= g.nx; ++i)
            worst = std::max(worst, std::abs(std::norm(f.e0(n, i)) + std::norm(f.eh(n, i)) - 1.0));
    EXPECT_LE(worst, 1e-6);
}

TEST(SolveFd, ClassicalFieldStaysInsideLightCone) {
    // compactly supported start (table that vanishes outside |x| <= 0.25)
    std::vector<double> xs;
    std::vector<Complex> e0, eh;
    for (int k = 0; k <= 200; ++k) {
        const double x = -2.0 + 4.0 * k / 200;
        xs.push_back(x);
        const double u = std::max(0.0, 0.0625 - x * x);
        e0.push_back(u * u);
        eh.push_back(0.0);
    }
    const auto init = InitialProfile::table(xs, e0, eh);
    const GridSpec g(-2.0, 2.0, 256, 1.0, 64);
    const auto f = solve_fd(perfect(1.0), init, g);
    double outside = 0.0;
    for (int n = 0; n <= g.nt; ++n)
        for (int i = 0; i <= g.nx; ++i)
            if (std::abs(g.x(i)) > 0.25 + g.t(n) + 2 * g.dx())
                outside = std::max({outside, std::abs(f.e0(n, i)), std::abs(f.eh(n, i))});
    EXPECT_LT(outside, 1e-8);
}

TEST(SolveFd, AbsorptionDecaysIntensity) {
    const GridSpec g(-1.0, 1.0, 64, 2.0, 64);
    const auto f = solve_fd({0.8, 0.2, PhaseExpr()}, InitialProfile::plane_wave(), g);
    EXPECT_LT(std::norm(f.e0(g.nt, 32)) + std::norm(f.eh(g.nt, 32)), 1.0);
}

TEST(FieldGrid, ReportsNonFiniteEntries) {
    FieldGrid f(GridSpec(0.0, 1.0, 4, 1.0, 4));
    EXPECT_NO_THROW(f.check_finite());
    f.eh(2, 3) = Complex(std::nan(""), 0.0);
    try {
        f.check_finite();
        FAIL();
    } catch (const NonFiniteField& e) {
        EXPECT_EQ(e.time_index(), 2u);
        EXPECT_EQ(e.x_index(), 3u);
    }
}

TEST(Picard, PlaneWaveMatchesPendellosung) {
    const GridSpec g(-1.0, 1.0, 64, 2.0, 64);
    const auto f = solve_picard_classical(perfect(1.0), InitialProfile::plane_wave(), g);
    EXPECT_LE(pendellosung_error(f, perfect(1.0)), 1e-4);
}

TEST(Picard, RequiresClassicalOrderAndUnitCourant) {
    EXPECT_THROW(solve_picard_classical(perfect(0.8), InitialProfile::plane_wave(), GridSpec(-1, 1, 16, 1.0, 8)),
                 ConfigError);
    EXPECT_THROW(solve_picard_classical(perfect(1.0), InitialProfile::plane_wave(), GridSpec(-1, 1, 16, 0.25, 4)),
                 ConfigError);
}

TEST(Picard, ReportsNonConvergence) {
    DiffractionParams p{1.0, 0.0, PhaseExpr::parse("bent:0.2")};
    EXPECT_THROW(solve_picard_classical(p, InitialProfile::gaussian(0.0, 0.5), GridSpec(-2, 2, 32, 2.0, 16), 1, 1e-14),
                 NoConvergence);
}

TEST(Picard, AgreesWithFdOnBentCrystalUnderRefinement) {
    DiffractionParams p{1.0, 0.0, PhaseExpr::parse("bent:0.2")};
    const auto init = InitialProfile::gaussian(0.0, 0.5);
    double prev = 1e9;
    for (int n : {32, 64}) {
        const GridSpec g(-2.0, 2.0, 2 * n, 2.0, n);
        const double gap = sup_distance(solve_fd(p, init, g), solve_picard_classical(p, init, g));
        EXPECT_LT(gap, prev);
        prev = gap;
    }
    EXPECT_LT(prev, 5e-3);
}

TEST(SupDistance, RequiresNestedGrids) {
    FieldGrid a(GridSpec(0, 1, 4, 1, 4)), b(GridSpec(0, 1, 6, 1, 6));
    EXPECT_THROW(sup_distance(a, b), DomainError);
}
