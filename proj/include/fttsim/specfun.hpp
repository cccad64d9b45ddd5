#pragma once

// Special functions: Gamma, Bessel J0/J1 of complex argument, the Wright
// function phi(-beta, mu; z) and the two-parameter Mittag-Leffler function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fttsim/errors.hpp"
#include "fttsim/quadrature.hpp"

namespace fttsim {

using Complex = std::complex<double>;

/// Tolerances shared by the series evaluators.
struct SeriesControl {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_terms = 2000;

    void validate() const {
        if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
        if (abs_tol < 0 || rel_tol < 0 || (abs_tol == 0 && rel_tol == 0))
            throw DomainError("SeriesControl: tolerances must be >= 0 and not both zero");
    }
};

namespace detail {

inline bool is_nonpositive_integer(double x) { return x <= 0 && x == std::floor(x); }

// sin(pi x), exactly zero at integers.
template <class R>
R sin_pi(R x) {
    const R n = std::round(x);
    const R r = x - n;
    const R s = std::sin(std::numbers::pi_v<R> * r);
    return std::fmod(n, R(2)) == 0 ? s : -s;
}

// log|1/Gamma(x)| and its sign; sign 0 at the poles of Gamma.
struct LogRecipGamma {
    long double log_abs;
    int sign;
};

inline LogRecipGamma log_recip_gamma(long double x) {
    if (x > 0) return {-std::lgamma(x), 1};
    const long double s = sin_pi(x);
    if (s == 0) return {-std::numeric_limits<long double>::infinity(), 0};
    // 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi
    return {std::lgamma(1 - x) + std::log(std::fabs(s)) - std::log(std::numbers::pi_v<long double>),
            s > 0 ? 1 : -1};
}

// Kahan-compensated accumulator for complex long double terms.
struct CompensatedSum {
    long double re = 0, im = 0, cre = 0, cim = 0;

    static void add(long double& sum, long double& c, long double v) {
        const long double y = v - c;
        const long double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    void add(std::complex<long double> v) {
        add(re, cre, v.real());
        add(im, cim, v.imag());
    }
    Complex value() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

}  // namespace detail

/// Euler Gamma function. Throws PoleError at non-positive integers.
inline double gamma(double x) {
    if (detail::is_nonpositive_integer(x))
        throw PoleError("gamma: pole at non-positive integer " + std::to_string(x));
    const double g = std::tgamma(x);
    if (!std::isfinite(g)) throw OverflowError("gamma: overflow at x = " + std::to_string(x));
    return g;
}

/// 1/Gamma(x); a total function that is exactly 0 at the poles of Gamma.
inline double recip_gamma(double x) {
    if (detail::is_nonpositive_integer(x)) return 0.0;
    if (x > 0) {
        if (x > 171.0) return std::exp(-std::lgamma(x));
        return 1.0 / std::tgamma(x);
    }
    const auto r = detail::log_recip_gamma(x);
    return r.sign * static_cast<double>(std::exp(r.log_abs));
}

namespace detail {

// Trapezoidal rule on the periodic integral representations
//   J0(z) = (1/2pi) int cos(z sin th) dth,  J1(z) = (1/2pi) int sin th sin(z sin th) dth,
// which converges geometrically once the node count exceeds e|z|/2.
template <class G>
Complex bessel_trapezoid(double abs_z, G&& g) {
    int quarter = static_cast<int>(std::ceil((2.0 * abs_z + 40.0) / 4.0));
    const int n = 4 * quarter;
    Complex sum = 2.0 * g(0.0) + 2.0 * g(1.0);
    for (int k = 1; k < quarter; ++k) sum += 4.0 * g(std::sin(2.0 * std::numbers::pi * k / n));
    return sum / static_cast<double>(n);
}

inline void check_bessel_argument(Complex z, const char* name) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError(std::string(name) + ": non-finite argument");
    if (std::abs(z.imag()) > 700.0)
        throw OverflowError(std::string(name) + ": |Im z| too large, result overflows");
}

inline constexpr double kBesselSeriesRadius = 4.0;

}  // namespace detail

/// Bessel function J0 of complex argument.
inline Complex bessel_j0(Complex z) {
    detail::check_bessel_argument(z, "bessel_j0");
    const double az = std::abs(z);
    if (az <= detail::kBesselSeriesRadius) {
        const Complex q = -0.25 * z * z;
        Complex term = 1.0, sum = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= q / static_cast<double>(k * k);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return detail::bessel_trapezoid(az, [z](double s) { return std::cos(z * s); });
}

/// Bessel function J1 of complex argument.
inline Complex bessel_j1(Complex z) {
    detail::check_bessel_argument(z, "bessel_j1");
    const double az = std::abs(z);
    if (az <= detail::kBesselSeriesRadius) {
        const Complex q = -0.25 * z * z;
        Complex term = 1.0, sum = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= q / static_cast<double>(k * (k + 1));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return 0.5 * z * sum;
    }
    return detail::bessel_trapezoid(az, [z](double s) { return s * std::sin(z * s); });
}

namespace detail {

struct SeriesOutcome {
    Complex value;
    double error_estimate;
    bool converged;
};

// Direct series for phi(-beta, mu; z) = sum z^n / (n! Gamma(mu - beta n)).
inline SeriesOutcome wright_series(double beta, double mu, Complex z, const SeriesControl& sc) {
    constexpr long double eps = std::numeric_limits<long double>::epsilon();
    CompensatedSum sum;
    const long double log_abs_z = z == 0.0 ? 0.0L : std::log(static_cast<long double>(std::abs(z)));
    const long double arg_z = std::arg(z);
    long double abs_sum = 0.0L;
    long double rounding = 0.0L;
    int small_run = 0;
    for (int n = 0; n < sc.max_terms; ++n) {
        if (z == 0.0 && n > 0) return {sum.value(), 0.0, true};
        const long double x = static_cast<long double>(mu) - static_cast<long double>(beta) * n;
        const auto rg = log_recip_gamma(x);
        const long double log_fact = std::lgamma(static_cast<long double>(n) + 1);
        const long double log_mag = (n == 0 ? 0.0L : n * log_abs_z) - log_fact + rg.log_abs;
        // magnitude envelope ignoring the sin factor, used for the stopping rule
        const long double env_log = (n == 0 ? 0.0L : n * log_abs_z) - log_fact +
                                    (x > 0 ? -std::lgamma(x) : std::lgamma(1 - x));
        if (rg.sign != 0) {
            const long double mag = std::exp(log_mag);
            const long double ph = n * arg_z;
            sum.add(std::polar(mag * rg.sign, ph));
            abs_sum += mag;
            rounding += mag * (std::fabs(log_mag) + n + 4) * eps;
        }
        const long double envelope = std::exp(env_log);
        const double current = std::abs(sum.value());
        if (envelope <= 1e-3L * eps * std::max<long double>(current, sc.abs_tol) && n > 2) {
            if (++small_run >= 3) {
                (void)abs_sum;
                return {sum.value(), static_cast<double>(rounding), true};
            }
        } else {
            small_run = 0;
        }
    }
    return {sum.value(), static_cast<double>(rounding), false};
}

// Steepest-descent representation of the Hankel integral for real z = -s < 0:
//   phi(-b, mu; -s) = (1/pi) int_0^pi r^{-mu} [r' sin((1-mu)p) + r cos((1-mu)p)] e^{h} dp
// with r(p) = (s sin(b p)/sin p)^{1/(1-b)} and h(p) = -r sin((1-b)p)/sin(b p). The path
// satisfies Im(zeta - s zeta^b) = 0, so the integrand carries no oscillation.
inline double wright_steepest_descent(double beta, double mu, double s, const SeriesControl& sc) {
    const double pi = std::numbers::pi;
    const double one_m_beta = 1.0 - beta;
    const double log_s = std::log(s);
    auto integrand = [&](double p) -> double {
        double ratio_log;       // log(sin(beta p) / sin p)
        double dlog;            // beta cot(beta p) - cot p
        if (p < 1e-4) {
            ratio_log = std::log(beta) + (1.0 - beta * beta) * p * p / 6.0;
            dlog = p * (1.0 - beta * beta) / 3.0;
        } else {
            ratio_log = std::log(std::sin(beta * p)) - std::log(std::sin(p));
            dlog = beta / std::tan(beta * p) - 1.0 / std::tan(p);
        }
        const double log_r = (log_s + ratio_log) / one_m_beta;
        if (log_r > 700.0) return 0.0;
        const double r = std::exp(log_r);
        const double h = p < 1e-8 ? -r * one_m_beta / beta
                                  : -r * std::sin(one_m_beta * p) / std::sin(beta * p);
        const double log_mag = (1.0 - mu) * log_r + h;
        if (log_mag < -740.0) return 0.0;
        const double rp_over_r = dlog / one_m_beta;
        const double w = (1.0 - mu) * p;
        return std::exp(log_mag) * (rp_over_r * std::sin(w) + std::cos(w));
    };
    QuadratureControl qc;
    qc.abs_tol = 1e-300;
    qc.rel_tol = std::min(1e-13, 0.01 * sc.rel_tol);
    qc.max_subdivisions = 4000;
    // The integrand is steep near p = pi when beta is close to 1; seed breakpoints there.
    const double d = std::max(1e-12, 10.0 * one_m_beta);
    auto res = integrate(integrand, make_breaks(0.0, pi, {0.5 * pi, pi - d, pi - 0.1 * d, pi - 0.01 * d}),
                         qc, false);
    const double value = res.value / pi;
    const double err = res.error / pi;
    if (!std::isfinite(value) || err > std::max(sc.abs_tol * 1e-2, sc.rel_tol * std::abs(value)))
        throw ConvergenceError("wright_phi: contour quadrature failed to reach tolerance (beta=" +
                               std::to_string(beta) + ", mu=" + std::to_string(mu) +
                               ", z=-" + std::to_string(s) + ")");
    return value;
}

}  // namespace detail

/// Wright function phi(-beta, mu; z) = sum_n z^n / (n! Gamma(mu - beta n)), beta in (0, 1].
///
/// Small arguments use the direct series with compensated long-double summation. On the
/// negative real axis, where the series suffers cancellation (and, for beta near 1, needs
/// impractically many terms), the Hankel integral is evaluated along its steepest-descent
/// path. beta = 1 is the degenerate closed form (1 + z)^{mu-1} / Gamma(mu).
inline Complex wright_phi(double beta, double mu, Complex z, const SeriesControl& sc = {}) {
    sc.validate();
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("wright_phi: beta must lie in (0, 1]");
    if (!std::isfinite(mu) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("wright_phi: non-finite argument");
    if (z == 0.0) return recip_gamma(mu);
    if (beta == 1.0) {
        const double rg = recip_gamma(mu);
        if (rg == 0.0) return 0.0;
        const Complex base = 1.0 + z;
        if (base == 0.0) {
            if (mu > 1.0) return 0.0;
            if (mu == 1.0) return rg;
            throw OverflowError("wright_phi: singular at z = -1 for beta = 1");
        }
        return std::pow(base, mu - 1.0) * rg;
    }
    const bool negative_real = z.imag() == 0.0 && z.real() < 0.0;
    const double s = -z.real();
    if (negative_real && s >= 1.0) return detail::wright_steepest_descent(beta, mu, s, sc);
    if (negative_real) {
        // Terms decay like |z|^n n^{-(1-beta) n}; skip the series when it cannot finish.
        const long double n = sc.max_terms;
        const long double env = n * std::log(static_cast<long double>(s)) - std::lgamma(n + 1) +
                                std::lgamma(1.0L - mu + beta * n);
        if (env > -45.0L) return detail::wright_steepest_descent(beta, mu, s, sc);
    }
    const auto series = detail::wright_series(beta, mu, z, sc);
    const double tol = std::max(sc.abs_tol, sc.rel_tol * std::abs(series.value));
    if (series.converged && series.error_estimate <= tol) {
        return negative_real || z.imag() == 0.0 ? Complex(series.value.real(), 0.0) : series.value;
    }
    if (negative_real) return detail::wright_steepest_descent(beta, mu, s, sc);
    throw ConvergenceError("wright_phi: series failed to reach tolerance within max_terms");
}

namespace detail {

// Parameters (mu, h, N) of the parabolic contour s(u) = mu (iu + 1)^2 for the
// Laplace-transform inversion of the Mittag-Leffler function, following the
// error-balancing rules of Garrappa (SIAM J. Numer. Anal. 53, 2015).
struct ContourParams {
    double mu = 0;
    double h = 0;
    double n = std::numeric_limits<double>::infinity();
};

inline constexpr double kLogMachineEps = -36.043653389117154;  // log(2^-52)

inline ContourParams optimal_param_bounded(double phi_j, double phi_j1, double p, double q,
                                           double log_eps_target) {
    const double fac = 1.01;
    const double f_max = std::exp(log_eps_target - kLogMachineEps);
    const double sq_phi_j = std::sqrt(phi_j);
    const double threshold = 2.0 * std::sqrt(log_eps_target - kLogMachineEps);
    const double sq_phi_j1 = std::min(std::sqrt(phi_j1), threshold - sq_phi_j);
    double sq_bar_j = 0, sq_bar_j1 = 0, f_bar = 1;
    bool admissible = false;
    if (p < 1e-14 && q < 1e-14) {
        sq_bar_j = sq_phi_j;
        sq_bar_j1 = sq_phi_j1;
        admissible = true;
    } else if (p < 1e-14) {
        sq_bar_j = sq_phi_j;
        const double f_min = sq_phi_j > 0 ? fac * std::pow(sq_phi_j / (sq_phi_j1 - sq_phi_j), q) : fac;
        if (f_min < f_max) {
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fq = std::pow(f_bar, -1.0 / q);
            sq_bar_j1 = (2.0 * sq_phi_j1 - fq * sq_phi_j) / (2.0 + fq);
            admissible = true;
        }
    } else if (q < 1e-14) {
        sq_bar_j1 = sq_phi_j1;
        const double f_min = fac * std::pow(sq_phi_j1 / (sq_phi_j1 - sq_phi_j), p);
        if (f_min < f_max) {
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fp = std::pow(f_bar, -1.0 / p);
            sq_bar_j = (2.0 * sq_phi_j + fp * sq_phi_j1) / (2.0 - fp);
            admissible = true;
        }
    } else {
        double f_min = fac * (sq_phi_j + sq_phi_j1) / std::pow(sq_phi_j1 - sq_phi_j, std::max(p, q));
        if (f_min < f_max) {
            f_min = std::max(f_min, 1.5);
            f_bar = f_min + f_min / f_max * (f_max - f_min);
            const double fp = std::pow(f_bar, -1.0 / p);
            const double fq = std::pow(f_bar, -1.0 / q);
            const double w = -phi_j1 / log_eps_target;
            const double den = 2.0 + w - (1.0 + w) * fp + fq;
            sq_bar_j = ((2.0 + w + fq) * sq_phi_j + fp * sq_phi_j1) / den;
            sq_bar_j1 = (-(1.0 + w) * fq * sq_phi_j + (2.0 + w - (1.0 + w) * fp) * sq_phi_j1) / den;
            admissible = true;
        }
    }
    if (!admissible) return {};
    const double log_eps = log_eps_target - std::log(f_bar);
    const double w = -sq_bar_j1 * sq_bar_j1 / log_eps;
    ContourParams out;
    out.mu = std::pow(((1.0 + w) * sq_bar_j + sq_bar_j1) / (2.0 + w), 2);
    out.h = -2.0 * std::numbers::pi / log_eps * (sq_bar_j1 - sq_bar_j) /
            ((1.0 + w) * sq_bar_j + sq_bar_j1);
    out.n = std::ceil(std::sqrt(1.0 - log_eps / out.mu) / out.h);
    return out;
}

inline ContourParams optimal_param_unbounded(double phi_j, double p, double log_eps_target) {
    const double sq_phi_j = std::sqrt(phi_j);
    double phibar = phi_j > 0 ? phi_j * 1.01 : 0.01;
    double sq_phibar = std::sqrt(phibar);
    const double f_min = 1.0, f_max = 10.0, f_tar = 5.0;
    double n = 0, a = 0, sq_mu = 0;
    for (int iter = 0; iter < 200; ++iter) {
        const double log_eps_phi = log_eps_target / phibar;
        n = std::ceil(phibar / std::numbers::pi *
                      (1.0 - 1.5 * log_eps_phi + std::sqrt(1.0 - 2.0 * log_eps_phi)));
        a = std::numbers::pi * n / phibar;
        sq_mu = sq_phibar * std::abs(4.0 - a) / std::abs(7.0 - std::sqrt(1.0 + 12.0 * a));
        const double fbar = std::pow((sq_phibar - sq_phi_j) / sq_mu, -p);
        if (p < 1e-14 || (f_min < fbar && fbar < f_max)) break;
        sq_phibar = std::pow(f_tar, -1.0 / p) * sq_mu + sq_phi_j;
        phibar = sq_phibar * sq_phibar;
    }
    ContourParams out;
    out.mu = sq_mu * sq_mu;
    out.h = (-3.0 * a - 2.0 + 2.0 * std::sqrt(1.0 + 12.0 * a)) / (4.0 - a) / n;
    out.n = n;
    const double threshold = log_eps_target - kLogMachineEps;
    if (out.mu > threshold) {
        const double q = std::abs(p) < 1e-14 ? 0.0 : std::pow(f_tar, -1.0 / p) * std::sqrt(out.mu);
        const double pb = std::pow(q + std::sqrt(phi_j), 2);
        if (pb < threshold) {
            const double w = std::sqrt(kLogMachineEps / (kLogMachineEps - log_eps_target));
            const double u = std::sqrt(-pb / kLogMachineEps);
            out.mu = threshold;
            out.n = std::ceil(w * log_eps_target / 2.0 / std::numbers::pi / (u * w - 1.0));
            out.h = w / out.n;
        } else {
            out.n = std::numeric_limits<double>::infinity();
            out.h = 0;
        }
    }
    return out;
}

inline Complex mittag_leffler_contour(double rho, double mu, Complex z) {
    const double pi = std::numbers::pi;
    double log_eps_target = std::log(1e-15);
    const double theta = std::arg(z);
    const int kmin = static_cast<int>(std::ceil(-rho / 2.0 - theta / (2.0 * pi)));
    const int kmax = static_cast<int>(std::floor(rho / 2.0 - theta / (2.0 * pi)));
    struct Pole {
        Complex s;
        double phi;
    };
    std::vector<Pole> poles;
    const double modulus = std::pow(std::abs(z), 1.0 / rho);
    for (int k = kmin; k <= kmax; ++k) {
        const Complex s = std::polar(modulus, (theta + 2.0 * pi * k) / rho);
        const double phi = 0.5 * (s.real() + std::abs(s));
        if (phi > 1e-15) poles.push_back({s, phi});
    }
    std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) { return a.phi < b.phi; });
    // Singularities: the branch point at the origin followed by the poles.
    std::vector<double> phis{0.0};
    for (const auto& p : poles) phis.push_back(p.phi);
    const std::size_t j1_count = phis.size();
    std::vector<double> pw(j1_count), qw(j1_count);
    pw[0] = std::max(0.0, -2.0 * (rho - mu + 1.0));
    for (std::size_t j = 1; j < j1_count; ++j) pw[j] = 1.0;
    for (std::size_t j = 0; j + 1 < j1_count; ++j) qw[j] = 1.0;
    qw[j1_count - 1] = std::numeric_limits<double>::infinity();
    phis.push_back(std::numeric_limits<double>::infinity());

    ContourParams best;
    std::size_t best_region = 0;
    for (int attempt = 0; attempt < 30; ++attempt) {
        std::vector<std::size_t> admissible;
        for (std::size_t j = 0; j < j1_count; ++j)
            if (phis[j] < log_eps_target - kLogMachineEps && phis[j] < phis[j + 1]) admissible.push_back(j);
        best = ContourParams{};
        for (std::size_t j : admissible) {
            const ContourParams cp = j + 1 < j1_count
                                         ? optimal_param_bounded(phis[j], phis[j + 1], pw[j], qw[j], log_eps_target)
                                         : optimal_param_unbounded(phis[j], pw[j], log_eps_target);
            if (cp.n < best.n) {
                best = cp;
                best_region = j;
            }
        }
        if (best.n <= 200) break;
        log_eps_target += std::log(10.0);
    }
    if (!std::isfinite(best.n) || best.n <= 0)
        throw ConvergenceError("mittag_leffler: no admissible integration contour");

    const int n = static_cast<int>(best.n);
    detail::CompensatedSum sum;
    for (int k = -n; k <= n; ++k) {
        const double u = best.h * k;
        const Complex s = best.mu * std::pow(Complex(1.0, u), 2);
        const Complex ds = Complex(-2.0 * best.mu * u, 2.0 * best.mu);
        const Complex f = std::exp(s) * std::pow(s, rho - mu) / (std::pow(s, rho) - z) * ds;
        sum.add(std::complex<long double>(f.real(), f.imag()));
    }
    Complex result = best.h * sum.value() / Complex(0.0, 2.0 * pi);
    // Poles lying outside the chosen parabola contribute their residues.
    for (std::size_t j = best_region; j < poles.size(); ++j) {
        const Complex s = poles[j].s;
        result += std::pow(s, 1.0 - mu) * std::exp(s) / rho;
    }
    return result;
}

}  // namespace detail

/// Largest |z| for which the Mittag-Leffler series is used.
inline constexpr double kMittagLefflerSeriesRadius = 5.0;

/// Two-parameter Mittag-Leffler function E_{rho,mu}(z) = sum z^k / Gamma(mu + rho k).
///
/// Direct compensated series for |z| <= 5 (and |z|^{1/rho} <= 12, which bounds the
/// cancellation); otherwise inversion of the Laplace transform s^{rho-mu}/(s^rho - z)
/// on an optimally placed parabolic contour plus the residues of the enclosed poles.
inline Complex mittag_leffler(double rho, double mu, Complex z, const SeriesControl& sc = {}) {
    sc.validate();
    if (!(rho > 0.0) || !(mu > 0.0)) throw DomainError("mittag_leffler: rho and mu must be positive");
    if (!std::isfinite(rho) || !std::isfinite(mu) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("mittag_leffler: non-finite argument");
    const double az = std::abs(z);
    if (az == 0.0) return recip_gamma(mu);
    Complex value;
    if (az <= kMittagLefflerSeriesRadius && std::pow(az, 1.0 / rho) <= 12.0) {
        detail::CompensatedSum sum;
        const long double log_az = std::log(static_cast<long double>(az));
        const long double arg = std::arg(z);
        long double abs_sum = 0;
        bool converged = false;
        for (int k = 0; k < sc.max_terms; ++k) {
            const long double log_mag =
                k * log_az - std::lgamma(static_cast<long double>(mu) + static_cast<long double>(rho) * k);
            const long double mag = std::exp(log_mag);
            sum.add(std::polar(mag, k * arg));
            abs_sum += mag;
            if (k > 2 && mag < 1e-22L * std::max<long double>(1e-300L, std::abs(sum.value())) &&
                static_cast<long double>(rho) * k + mu > az) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ConvergenceError("mittag_leffler: series did not converge within max_terms");
        value = sum.value();
    } else {
        value = detail::mittag_leffler_contour(rho, mu, z);
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        throw OverflowError("mittag_leffler: result overflows double precision");
    if (z.imag() == 0.0) value = Complex(value.real(), 0.0);
    return value;
}

}  // namespace fttsim
