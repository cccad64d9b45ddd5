#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "fttsim/specfun.hpp"

using namespace fttsim;
namespace mp = boost::multiprecision;
using Big = mp::cpp_bin_float_100;
using BigC = mp::cpp_complex_100;

namespace {

// 1/Gamma(x) in 100 digits, exactly zero at the poles.
Big big_recip_gamma(const Big& x) {
    if (x <= 0 && mp::floor(x) == x) return Big(0);
    return 1 / boost::math::tgamma(x);
}

Complex to_c(const BigC& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

// Oracle: J0 power series in 100-digit complex arithmetic.
Complex j0_oracle(Complex z) {
    BigC q = BigC(Big(z.real()), Big(z.imag()));
    q = -q * q / 4;
    BigC term = 1, sum = 1;
    for (int k = 1; k < 400; ++k) {
        term *= q / Big(k * k);
        sum += term;
    }
    return to_c(sum);
}

// Oracle: Wright series sum z^n / (n! Gamma(mu - beta n)) in 100 digits.
Complex wright_oracle(double beta, double mu, Complex z, int terms = 1500) {
    const BigC zz(Big(z.real()), Big(z.imag()));
    BigC pow = 1, sum = 0;
    Big fact = 1;
    for (int n = 0; n < terms; ++n) {
        if (n > 0) {
            pow *= zz;
            fact *= n;
        }
        sum += pow / fact * big_recip_gamma(Big(mu) - Big(beta) * n);
    }
    return to_c(sum);
}

// Oracle: Mittag-Leffler series in 100 digits.
// Summed until the terms are past their peak (rho k well beyond |z|^{1/rho}) and negligible.
Complex ml_oracle(double rho, double mu, Complex z) {
    const BigC zz(Big(z.real()), Big(z.imag()));
    const double peak = std::pow(std::abs(z), 1.0 / rho) / rho;
    BigC pow = 1, sum = 0;
    for (int k = 0;; ++k) {
        if (k > 0) pow *= zz;
        const BigC term = pow * big_recip_gamma(Big(mu) + Big(rho) * k);
        sum += term;
        if (k > 2 * peak + 20 && mp::abs(term) < Big(1e-40) * (mp::abs(sum) + 1)) break;
    }
    return to_c(sum);
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// Error relative to max(1, |b|): contour methods are accurate on that scale, not relative
// to exponentially small values.
double mixed(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Gamma, KnownValues) {
    EXPECT_DOUBLE_EQ(fttsim::gamma(1.0), 1.0);
    EXPECT_NEAR(fttsim::gamma(0.5), std::sqrt(std::numbers::pi), 1e-15);
    EXPECT_NEAR(fttsim::gamma(0.5) * fttsim::gamma(0.5), std::numbers::pi, 1e-14);
    EXPECT_NEAR(fttsim::gamma(5.0), 24.0, 1e-12);
}

TEST(Gamma, MatchesMultiprecision) {
    for (double x : {-3.7, -1.5, -0.2, 0.1, 0.9, 1.7, 3.3, 10.25, 41.5}) {
        const double ref = static_cast<double>(boost::math::tgamma(Big(x)));
        EXPECT_LE(std::abs(fttsim::gamma(x) - ref), 1e-13 * std::abs(ref)) << x;
        EXPECT_LE(std::abs(recip_gamma(x) - 1.0 / ref), 1e-13 * std::abs(1.0 / ref)) << x;
    }
}

TEST(Gamma, PolesAndReciprocal) {
    for (double x : {0.0, -1.0, -2.0, -17.0}) {
        EXPECT_THROW(fttsim::gamma(x), PoleError);
        EXPECT_EQ(recip_gamma(x), 0.0);
    }
    EXPECT_THROW(fttsim::gamma(200.0), OverflowError);
    EXPECT_GT(recip_gamma(170.0), 0.0);
    EXPECT_EQ(recip_gamma(200.0), 0.0);  // 1/Gamma(200) ~ 2.5e-373 underflows
}

TEST(SeriesControl, Validation) {
    EXPECT_NO_THROW((SeriesControl{}.validate()));
    EXPECT_THROW((SeriesControl{0.0, 0.0, 10}.validate()), DomainError);
    EXPECT_THROW((SeriesControl{1e-12, 1e-10, 0}.validate()), DomainError);
}

TEST(BesselJ0, TrivialValuesAndEvenness) {
    EXPECT_EQ(bessel_j0(0.0), Complex(1.0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-30.0, 30.0), v(-5.0, 5.0);
    for (int k = 0; k < 50; ++k) {
        const Complex z(u(rng), v(rng));
        EXPECT_LE(std::abs(bessel_j0(z) - bessel_j0(-z)), 1e-14 * std::max(1.0, std::abs(bessel_j0(z))));
    }
}

TEST(BesselJ0, MatchesComplexSeriesOracle) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> r(0.0, 50.0), th(0.0, 2 * std::numbers::pi);
    for (int k = 0; k < 60; ++k) {
        const double rad = r(rng);
        Complex z = std::polar(rad, th(rng));
        z = {z.real(), std::clamp(z.imag(), -8.0, 8.0)};  // keep the oracle's cancellation bounded
        const Complex ref = j0_oracle(z);
        EXPECT_LE(std::abs(bessel_j0(z) - ref), 1e-10 * std::max(1.0, std::abs(ref))) << z;
    }
    const Complex z(-2.0, 0.1);
    EXPECT_LE(rel(bessel_j0(z), j0_oracle(z)), 1e-13);
}

TEST(BesselJ0, RealAxisAgreesWithRealBranch) {
    for (double x = 0.0; x <= 50.0; x += 0.37) {
        EXPECT_NEAR(bessel_j0(x).real(), boost::math::cyl_bessel_j(0, x), 1e-12) << x;
        EXPECT_EQ(bessel_j0(x).imag(), 0.0);
        EXPECT_NEAR(bessel_j1(x).real(), boost::math::cyl_bessel_j(1, x), 1e-12) << x;
    }
}

TEST(BesselJ0, FirstZeroByBisectionOnOracle) {
    double lo = 2.0, hi = 3.0;
    for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        (j0_oracle(mid).real() > 0 ? lo : hi) = mid;
    }
    EXPECT_NEAR(lo, 2.4048255577, 1e-9);
    EXPECT_NEAR(std::abs(bessel_j0(2.4048255577)), 0.0, 1e-9);
}

TEST(BesselJ0, OverflowIsReported) {
    EXPECT_THROW(bessel_j0(Complex(0.0, 1000.0)), OverflowError);
    EXPECT_THROW(bessel_j1(Complex(3.0, -800.0)), OverflowError);
}

TEST(Wright, TrivialValues) {
    for (double a : {0.2, 0.5, 0.9}) {
        EXPECT_EQ(wright_phi(a, 0.0, 0.0), Complex(0.0));
        EXPECT_EQ(wright_phi(a, 1.0, 0.0), Complex(1.0));
    }
}

TEST(Wright, MainardiHalfIsGaussian) {
    EXPECT_NEAR(wright_phi(0.5, 0.5, -1.0).real(), 0.4393912894, 1e-10);
    for (double r = 0.0; r <= 5.0; r += 0.25) {
        const double ref = std::exp(-r * r / 4) / std::sqrt(std::numbers::pi);
        EXPECT_NEAR(wright_phi(0.5, 0.5, -r).real(), ref, 1e-13) << r;
    }
}

TEST(Wright, MatchesMultiprecisionSeries) {
    for (double beta : {0.25, 0.5, 0.7})
        for (double mu : {0.0, 1.0 - beta, beta, 1.0, -0.4})
            for (Complex z : {Complex(-0.5), Complex(-2.0), Complex(-4.5), Complex(1.5, 2.0), Complex(-3.0, -1.0)}) {
                const Complex ref = wright_oracle(beta, mu, z);
                EXPECT_LE(std::abs(wright_phi(beta, mu, z) - ref), 1e-11 * std::max(1.0, std::abs(ref)))
                    << beta << " " << mu << " " << z;
            }
}

TEST(Wright, BetaOneClosedForm) {
    EXPECT_NEAR(wright_phi(1.0, 1.0, -0.5).real(), 1.0, 1e-15);
    EXPECT_NEAR(wright_phi(1.0, 2.5, -0.3).real(), std::pow(0.7, 1.5) / std::tgamma(2.5), 1e-14);
}

TEST(Wright, RealOnNegativeAxis) {
    for (double beta : {0.3, 0.6, 0.9})
        for (double mu : {0.0, 1.0 - beta, beta})
            for (double s : {0.1, 1.0, 3.0, 12.0, 40.0})
                EXPECT_LE(std::abs(wright_phi(beta, mu, -s).imag()), 1e-12);
}

// Mellin moments: int_0^inf s^{k-1} phi(-b, m; -s) ds = Gamma(k) / Gamma(m + b k), computed
// with Boost's own adaptive quadrature on the raw function.
TEST(Wright, MellinMomentsByIndependentQuadrature) {
    for (double beta : {0.3, 0.5, 0.7, 0.9}) {
        for (double mu : {1.0 - beta, beta}) {
            for (int k : {1, 2, 3}) {
                auto f = [&](double s) { return std::pow(s, k - 1) * wright_phi(beta, mu, -s).real(); };
                double err = 0;
                const double upper = 40.0;
                const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, upper, 12, 1e-12, &err);
                EXPECT_NEAR(q, std::tgamma(k) * recip_gamma(mu + beta * k), 1e-8) << beta << " " << mu << " " << k;
            }
        }
    }
}

TEST(Wright, NormalisationOfProbabilityKernel) {
    for (double a : {0.3, 0.5, 0.7, 0.9}) {
        auto f = [&](double s) { return wright_phi(a, 1.0 - a, -s).real(); };
        const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 60.0, 12, 1e-12);
        EXPECT_NEAR(q, 1.0, 1e-6) << a;
    }
}

TEST(Wright, ZeroMuRelation) {
    // phi(-v, 0; -z) = v z phi(-v, 1 - v; -z)
    for (double v : {0.3, 0.6, 0.95})
        for (double z : {0.2, 1.0, 2.5, 7.0}) {
            const double lhs = wright_phi(v, 0.0, -z).real();
            const double rhs = v * z * wright_phi(v, 1.0 - v, -z).real();
            EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs))) << v << " " << z;
        }
}

TEST(MittagLeffler, TrivialAndTrigonometric) {
    EXPECT_EQ(mittag_leffler(2.0, 1.0, 0.0), Complex(1.0));
    EXPECT_NEAR(mittag_leffler(2.0, 1.0, -1.0).real(), 0.5403023059, 1e-10);
    EXPECT_NEAR(mittag_leffler(2.0, 2.0, -1.0).real(), 0.8414709848, 1e-10);
    for (double b = 0.5; b <= 10.0; b += 1.5)
        for (double t = 0.1; t <= 10.0; t += 0.7) {
            if (b * t > 10.0) continue;
            const double bt = b * t;
            EXPECT_NEAR(mittag_leffler(2.0, 1.0, -bt * bt).real(), std::cos(bt), 1e-9);
            EXPECT_NEAR(bt * mittag_leffler(2.0, 2.0, -bt * bt).real(), std::sin(bt), 1e-9);
        }
}

TEST(MittagLeffler, ExponentialAndErfcForms) {
    for (Complex z : {Complex(-30.0), Complex(-100.0), Complex(20.0), Complex(3.0, 40.0), Complex(-60.0, 70.0)})
        EXPECT_LE(mixed(mittag_leffler(1.0, 1.0, z), std::exp(z)), 1e-12) << z;
    // E_{1/2,1}(-x) = exp(x^2) erfc(x)
    for (double x : {0.5, 2.0, 6.0, 9.5}) {
        const double ref = static_cast<double>(mp::exp(Big(x) * x) * boost::math::erfc(Big(x)));
        EXPECT_LE(std::abs(mittag_leffler(0.5, 1.0, -x).real() - ref), 1e-9 * ref) << x;
    }
}

TEST(MittagLeffler, MatchesMultiprecisionSeries) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.4, 2.0), um(0.5, 3.0), rad(0.0, 12.0), ang(0.0, 2 * std::numbers::pi);
    for (int k = 0; k < 40; ++k) {
        const double rho = ur(rng), mu = um(rng);
        const Complex z = std::polar(rad(rng), ang(rng));
        const Complex ref = ml_oracle(rho, mu, z);
        EXPECT_LE(rel(mittag_leffler(rho, mu, z), ref), 1e-9) << rho << " " << mu << " " << z;
    }
}

TEST(MittagLeffler, RecurrenceSweep) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ur(0.2, 2.0), um(0.5, 3.0), u(0.0, 1.0);
    int done = 0;
    while (done < 100) {
        const double rho = ur(rng), mu = um(rng);
        const Complex z = std::polar(10.0 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
        // skip draws whose value is beyond double range
        if (std::pow(std::abs(z), 1.0 / rho) > 600.0) continue;
        const Complex e = mittag_leffler(rho, mu, z);
        const Complex res = e - recip_gamma(mu) - z * mittag_leffler(rho, mu + rho, z);
        EXPECT_LE(std::abs(res), 1e-8 * (1.0 + std::abs(e))) << rho << " " << mu << " " << z;
        ++done;
    }
}

TEST(MittagLeffler, RealArgumentGivesRealValue) {
    for (double z : {-50.0, -7.0, -0.3, 4.0})
        EXPECT_EQ(mittag_leffler(0.8, 1.2, z).imag(), 0.0);
}

TEST(MittagLeffler, InvalidParameters) {
    EXPECT_THROW(mittag_leffler(0.0, 1.0, 1.0), DomainError);
    EXPECT_THROW(mittag_leffler(1.0, -1.0, 1.0), DomainError);
}
