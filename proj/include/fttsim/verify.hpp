#pragma once

// Numerical checks of the limit theorems and transform identities: the beta -> 1 limits
// for Wright-kernel integrals, the Bessel table integral, the Stankovic transform and the
// Green-function limits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "fttsim/closedform.hpp"
#include "fttsim/greens.hpp"
#include "fttsim/quadrature.hpp"
#include "fttsim/specfun.hpp"
#include "fttsim/wright_kernel.hpp"

namespace fttsim {

using TestFunction = std::function<double(double)>;

namespace detail {

inline double kernel_integral(const TestFunction& g, double beta, double mu, const QuadratureControl& qc) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("kernel integral: beta must lie in (0, 1)");
    const auto k = WrightKernel::shared(beta, mu, qc.tail_epsilon * 1e-2);
    const double end = k->support_end();
    auto f = [&](double s) { return g(s) * (*k)(s); };
    return integrate(f, make_breaks(0.0, end, {0.5, 1.0, 1.5, 2.0, 4.0}), qc).value;
}

}  // namespace detail

/// ( int_0^inf g(s) phi(-b, 0; -s) ds,  int_0^inf g(s) phi(-b, b; -s) ds ).
/// As b -> 1 the first tends to g(1), the second to int_0^1 g.
inline std::pair<double, double> wright_mean_limits(const TestFunction& g, double beta, const QuadratureControl& qc = {}) {
    return {detail::kernel_integral(g, beta, 0.0, qc), detail::kernel_integral(g, beta, beta, qc)};
}

/// int_0^inf g(s) phi(-b, 1-b; -s) ds, tending to g(1) as b -> 1.
inline double wright_point_limit(const TestFunction& g, double beta, const QuadratureControl& qc = {}) {
    return detail::kernel_integral(g, beta, 1.0 - beta, qc);
}

/// | int_0^tau J0(sigma sqrt(tau^2 - xi^2)) dxi - sin(sigma tau)/sigma |.
inline double table_integral_check(Complex sigma, double tau, const QuadratureControl& qc = {}) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("table_integral_check: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    // xi = tau sin(theta) removes the square-root endpoint behaviour of the Bessel argument
    auto f = [&](double th) { return bessel_j0(sigma * (tau * std::cos(th))) * (tau * std::cos(th)); };
    const Complex quad = integrate(f, 0.0, std::numbers::pi / 2, qc).value;
    return std::abs(quad - detail::sin_over(sigma, tau));
}

/// | int_0^inf t^{-a} phi(-a, 1-a; -tau/t^a) sin(sigma tau)/sigma dtau - t^a E_{2a,a+1}(-sigma^2 t^{2a}) |.
/// The left side is integrated in z = tau/t^a against the sampled Wright kernel; at
/// a = 1 the kernel is a point mass at z = 1 and the left side is sin(sigma t)/sigma.
inline double stankovic_check(double alpha, Complex sigma, double t, const QuadratureControl& qc = {}) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("stankovic_check: alpha must lie in (0, 1]");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("stankovic_check: t must be >= 0");
    if (t == 0.0) return 0.0;
    const double ta = std::pow(t, alpha);
    const Complex rhs = ta * mittag_leffler(2.0 * alpha, alpha + 1.0, -sigma * sigma * ta * ta);
    Complex lhs;
    if (alpha == 1.0) {
        lhs = detail::sin_over(sigma, t);
    } else {
        const auto k = WrightKernel::shared(alpha, 1.0 - alpha, qc.tail_epsilon * 1e-2);
        auto f = [&](double z) { return (*k)(z) * detail::sin_over(sigma, z * ta); };
        lhs = integrate(f, make_breaks(0.0, k->support_end(), {0.5, 1.0, 2.0, 4.0}), qc).value;
    }
    return std::abs(lhs - rhs);
}

struct LimitSample {
    double alpha;
    double gap_green;  // |G_a - G|
    double gap_rl;     // |D^{a-1} G_a - G|
};

/// Gaps of both fractional Green functions to the classical one at (x, t) along `alphas`.
inline std::vector<LimitSample> green_limit_sequence(double x, double t, Complex sigma, const std::vector<double>& alphas,
                                                     const QuadratureControl& qc = {}) {
    std::vector<LimitSample> out;
    const Complex g = green_classical({x, t, 1.0, sigma});
    for (double a : alphas) {
        const GreensQuery q{x, t, a, sigma};
        out.push_back({a, std::abs(green_fractional(q, qc) - g), std::abs(green_fractional_rl(q, qc) - g)});
    }
    return out;
}

/// Largest rise between consecutive entries (0 for a non-increasing sequence).
inline double max_increase(const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) worst = std::max(worst, v[k] - v[k - 1]);
    return worst;
}

/// True when `v` is non-increasing up to `noise`.
inline bool monotone_nonincreasing(const std::vector<double>& v, double noise = 0.0) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] > v[k - 1] + noise) return false;
    return true;
}

}  // namespace fttsim
