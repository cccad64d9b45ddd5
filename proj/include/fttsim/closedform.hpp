#pragma once

// Closed-form solutions for the perfect crystal (f = 0): the Pendelloesung for a plane
// incident wave and the free-space propagator for arbitrary initial profiles.
//
// The propagator is evaluated by subordination: with the classical convolution
//
//   C[g](x, tau) = 1/2 int_{-tau}^{tau} J0(sigma sqrt(tau^2 - v^2)) g(x - v) dv
//
// the fractional kernels D^{2a-1}G_a, D^{a-1}G_a convolved with g become
//
//   T1[g](x, t) = t^{-a} int_0^inf phi(-a, 1-2a; -z) C[g](x, z t^a) dz
//   T2[g](x, t) =        int_0^inf phi(-a, 1-a;  -z) C[g](x, z t^a) dz
//
// and   E0 = T1[E0] + T2[E0'] + i sigma T2[Eh],   Eh = T1[Eh] - T2[Eh'] + i sigma T2[E0].

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fttsim/greens.hpp"
#include "fttsim/phasefn.hpp"
#include "fttsim/quadrature.hpp"
#include "fttsim/specfun.hpp"
#include "fttsim/wright_kernel.hpp"

namespace fttsim {

struct DiffractionParams {
    double alpha = 1.0;
    double kappa = 0.0;
    PhaseExpr phase;
    /// Replaces -1 + i kappa when set (e.g. sigma = 0 for pure transport).
    std::optional<Complex> sigma_override;

    Complex sigma() const { return sigma_override ? *sigma_override : coupling(kappa); }

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
        if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be finite and >= 0");
    }
};

/// Field pair (E0, Eh) at one point.
struct FieldValue {
    Complex e0;
    Complex eh;
};

/// Initial data E0(x, 0), Eh(x, 0) with their x-derivatives.
class InitialProfile {
public:
    enum class Kind { plane_wave, gaussian, table };
    using Fn = std::function<Complex(double)>;

    /// Uniform amplitudes (a0, ah); the Pendelloesung case is (1, 0).
    static InitialProfile plane_wave(Complex a0 = 1.0, Complex ah = 0.0) {
        InitialProfile p(Kind::plane_wave);
        p.e0_ = [a0](double) { return a0; };
        p.eh_ = [ah](double) { return ah; };
        p.e0_dx_ = p.eh_dx_ = [](double) { return Complex(0.0); };
        p.description_ = "plane_wave";
        return p;
    }

    /// E0 = amplitude * exp(-((x - center)/width)^2), Eh = 0.
    static InitialProfile gaussian(double center, double width, Complex amplitude = 1.0) {
        if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
        InitialProfile p(Kind::gaussian);
        p.e0_ = [=](double x) {
            const double u = (x - center) / width;
            return amplitude * std::exp(-u * u);
        };
        p.e0_dx_ = [=](double x) {
            const double u = (x - center) / width;
            return amplitude * (-2.0 * u / width) * std::exp(-u * u);
        };
        p.eh_ = p.eh_dx_ = [](double) { return Complex(0.0); };
        p.center_ = center;
        p.width_ = width;
        p.description_ = "gaussian";
        return p;
    }

    /// Tabulated profile, linearly interpolated and held constant beyond the table.
    /// Derivatives use 4th-order central differences with the table spacing.
    static InitialProfile table(std::vector<double> xs, std::vector<Complex> e0, std::vector<Complex> eh) {
        if (xs.size() < 2 || xs.size() != e0.size() || xs.size() != eh.size())
            throw ConfigError("initial table needs at least two rows of equal length");
        if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end())
            throw ConfigError("initial table abscissae must be strictly increasing");
        for (std::size_t k = 0; k < xs.size(); ++k)
            if (!std::isfinite(xs[k]) || !std::isfinite(std::abs(e0[k])) || !std::isfinite(std::abs(eh[k])))
                throw ConfigError("initial table contains non-finite values");
        InitialProfile p(Kind::table);
        auto data = std::make_shared<const Table>(Table{std::move(xs), std::move(e0), std::move(eh)});
        const double h = (data->x.back() - data->x.front()) / static_cast<double>(data->x.size() - 1);
        p.e0_ = [data](double x) { return data->interp(data->e0, x); };
        p.eh_ = [data](double x) { return data->interp(data->eh, x); };
        p.e0_dx_ = [data, h](double x) { return data->derivative(data->e0, x, h); };
        p.eh_dx_ = [data, h](double x) { return data->derivative(data->eh, x, h); };
        p.description_ = "table";
        return p;
    }

    Kind kind() const noexcept { return kind_; }
    bool x_uniform() const noexcept { return kind_ == Kind::plane_wave; }
    const std::string& description() const noexcept { return description_; }

    Complex e0(double x) const { return e0_(x); }
    Complex eh(double x) const { return eh_(x); }
    Complex e0_dx(double x) const { return e0_dx_(x); }
    Complex eh_dx(double x) const { return eh_dx_(x); }

    /// Interior breakpoints where the profile has structure (gaussian centre).
    std::vector<double> features() const {
        if (kind_ == Kind::gaussian) return {center_};
        return {};
    }
    /// Length scale of the profile features, used to seed quadrature panels.
    double feature_width() const noexcept { return width_; }

private:
    struct Table {
        std::vector<double> x;
        std::vector<Complex> e0, eh;

        Complex interp(const std::vector<Complex>& v, double at) const {
            if (at <= x.front()) return v.front();
            if (at >= x.back()) return v.back();
            const auto it = std::upper_bound(x.begin(), x.end(), at);
            const std::size_t k = static_cast<std::size_t>(it - x.begin());
            const double w = (at - x[k - 1]) / (x[k] - x[k - 1]);
            return (1.0 - w) * v[k - 1] + w * v[k];
        }
        Complex derivative(const std::vector<Complex>& v, double at, double h) const {
            return (interp(v, at - 2 * h) - 8.0 * interp(v, at - h) + 8.0 * interp(v, at + h) - interp(v, at + 2 * h)) /
                   (12.0 * h);
        }
    };

    explicit InitialProfile(Kind k) : kind_(k) {}

    Kind kind_;
    Fn e0_, eh_, e0_dx_, eh_dx_;
    double center_ = 0.0;
    double width_ = 1.0;
    std::string description_;
};

/// Plane-wave solution with initial data (1, 0):
///   E0 = E_{2a,1}(-sigma^2 t^{2a}),  Eh = i sigma t^a E_{2a,a+1}(-sigma^2 t^{2a}).
inline FieldValue pendellosung(const DiffractionParams& params, double t) {
    params.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("pendellosung: t must be finite and >= 0");
    if (t == 0.0) return {1.0, 0.0};
    const double a = params.alpha;
    const Complex s = params.sigma();
    const Complex z = -s * s * std::pow(t, 2.0 * a);
    const Complex e0 = mittag_leffler(2.0 * a, 1.0, z);
    const Complex eh = Complex(0.0, 1.0) * s * std::pow(t, a) * mittag_leffler(2.0 * a, a + 1.0, z);
    return {e0, eh};
}

namespace detail {

// sin(sigma w) / sigma, continuous at sigma = 0.
inline Complex sin_over(Complex sigma, double w) {
    const Complex u = sigma * w;
    if (std::abs(u) < 1e-6) return w * (1.0 - u * u / 6.0);
    return std::sin(u) / sigma;
}

// J1(sigma w) / w, continuous at w = 0.
inline Complex j1_over(Complex sigma, double w) {
    const Complex u = sigma * w;
    if (std::abs(u) < 1e-6) return 0.5 * sigma * (1.0 - u * u / 8.0);
    return bessel_j1(u) / w;
}

/// Fixed-size complex vector, used to integrate several convolutions at once.
template <std::size_t N>
struct CVec {
    std::array<Complex, N> v{};

    CVec& operator+=(const CVec& o) {
        for (std::size_t k = 0; k < N; ++k) v[k] += o.v[k];
        return *this;
    }
    friend CVec operator+(CVec a, const CVec& b) { return a += b; }
    friend CVec operator-(CVec a, const CVec& b) {
        for (std::size_t k = 0; k < N; ++k) a.v[k] -= b.v[k];
        return a;
    }
    friend CVec operator*(CVec a, double s) {
        for (auto& c : a.v) c *= s;
        return a;
    }
    double norm() const {
        double m = 0.0;
        for (const auto& c : v) m = std::max(m, std::abs(c));
        return m;
    }
};

// Convolutions of (e0, eh, e0', eh') with the classical kernel 1/2 J0(sigma sqrt(tau^2 - v^2)).
inline CVec<4> classical_convolution(const InitialProfile& init, Complex sigma, double x, double tau,
                                     const QuadratureControl& qc) {
    if (tau <= 0.0) return {};
    auto f = [&](double v) {
        const Complex k = 0.5 * bessel_j0(sigma * light_cone_radius(tau, std::abs(v)));
        const double u = x - v;
        return CVec<4>{{k * init.e0(u), k * init.eh(u), k * init.e0_dx(u), k * init.eh_dx(u)}};
    };
    std::vector<double> br{-tau, tau};
    const double w = init.feature_width();
    for (double c : init.features())
        for (double off : {-2.0 * w, 0.0, 2.0 * w})
            if (x - c + off > -tau && x - c + off < tau) br.push_back(x - c + off);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return integrate(f, br, qc).value;
}

// d/dt of the classical convolution:
//   1/2 [g(x+t) + g(x-t)] - 1/2 int sigma t J1(sigma w)/w g(x - v) dv,  w = sqrt(t^2 - v^2).
inline CVec<2> classical_convolution_dt(const InitialProfile& init, Complex sigma, double x, double t,
                                        const QuadratureControl& qc) {
    CVec<2> edge{{0.5 * (init.e0(x + t) + init.e0(x - t)), 0.5 * (init.eh(x + t) + init.eh(x - t))}};
    if (t <= 0.0) return {{init.e0(x), init.eh(x)}};
    auto f = [&](double v) {
        const Complex k = -0.5 * sigma * t * j1_over(sigma, light_cone_radius(t, std::abs(v)));
        return CVec<2>{{k * init.e0(x - v), k * init.eh(x - v)}};
    };
    std::vector<double> br{-t, t};
    for (double c : init.features())
        if (x - c > -t && x - c < t) br.push_back(x - c);
    std::sort(br.begin(), br.end());
    return edge + integrate(f, br, qc).value;
}

}  // namespace detail

/// Solution of the perfect-crystal problem (f = 0) at (x, t) for the given initial profile.
inline FieldValue free_space_solution(const DiffractionParams& params, const InitialProfile& init, double x, double t,
                                      const QuadratureControl& qc = {}) {
    params.validate();
    if (!params.phase.is_zero())
        throw ConfigError("free_space_solution: closed form requires the perfect crystal (phase 0)");
    if (!(t >= 0.0) || !std::isfinite(t) || !std::isfinite(x)) throw DomainError("free_space_solution: bad (x, t)");
    if (t == 0.0) return {init.e0(x), init.eh(x)};

    const double a = params.alpha;
    const Complex s = params.sigma();
    const Complex is = Complex(0.0, 1.0) * s;

    if (init.x_uniform()) {
        // Pre-integrated kernels: int dx C[1](x, tau) = sin(sigma tau)/sigma.
        const Complex a0 = init.e0(x), ah = init.eh(x);
        Complex t1, t2;
        if (a == 1.0) {
            t1 = std::cos(s * t);
            t2 = detail::sin_over(s, t);
        } else {
            const double ta = std::pow(t, a);
            const auto k1 = WrightKernel::shared(a, 1.0 - 2.0 * a, qc.tail_epsilon * 1e-2);
            const auto k2 = WrightKernel::shared(a, 1.0 - a, qc.tail_epsilon * 1e-2);
            const double zmax = std::max(k1->support_end(), k2->support_end());
            if (std::abs(s.imag()) * zmax * ta > 20.0)
                throw DomainError("free_space_solution: absorption too strong for the kernel tail cutoff");
            auto f = [&](double z) {
                const Complex c = detail::sin_over(s, z * ta);
                return detail::CVec<2>{{(*k1)(z) * c, (*k2)(z) * c}};
            };
            const auto r = integrate(f, make_breaks(0.0, zmax, {0.5, 1.0, 2.0, 4.0}), qc).value;
            t1 = r.v[0] / ta;
            t2 = r.v[1];
        }
        return {a0 * t1 + is * ah * t2, ah * t1 + is * a0 * t2};
    }

    if (a == 1.0) {
        const auto c = detail::classical_convolution(init, s, x, t, qc);
        const auto d = detail::classical_convolution_dt(init, s, x, t, qc);
        return {d.v[0] + c.v[2] + is * c.v[1], d.v[1] - c.v[3] + is * c.v[0]};
    }

    const double ta = std::pow(t, a);
    const auto k1 = WrightKernel::shared(a, 1.0 - 2.0 * a, qc.tail_epsilon * 1e-2);
    const auto k2 = WrightKernel::shared(a, 1.0 - a, qc.tail_epsilon * 1e-2);
    const double zmax = std::max(k1->support_end(), k2->support_end());
    if (std::abs(s.imag()) * zmax * ta > 20.0)
        throw DomainError("free_space_solution: absorption too strong for the kernel tail cutoff");
    QuadratureControl inner = qc;
    inner.abs_tol = qc.abs_tol * 1e-1;
    inner.rel_tol = qc.rel_tol * 1e-1;
    auto f = [&](double z) {
        const auto c = detail::classical_convolution(init, s, x, z * ta, inner);
        const double w1 = (*k1)(z), w2 = (*k2)(z);
        // [T1 e0, T1 eh, T2 e0', T2 eh', T2 e0, T2 eh]
        return detail::CVec<6>{{w1 * c.v[0], w1 * c.v[1], w2 * c.v[2], w2 * c.v[3], w2 * c.v[0], w2 * c.v[1]}};
    };
    std::vector<double> br{0.0, 0.5, 1.0, 2.0, 4.0};
    for (double c : init.features()) {
        const double z = std::abs(x - c) / ta;
        if (z > 0.0) br.push_back(z);
    }
    br.push_back(zmax);
    std::sort(br.begin(), br.end());
    br.erase(std::remove_if(br.begin(), br.end(), [zmax](double b) { return b > zmax; }), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    const auto r = integrate(f, br, qc).value;
    return {r.v[0] / ta + r.v[2] + is * r.v[5], r.v[1] / ta - r.v[3] + is * r.v[4]};
}

/// Residual |E_{rho,mu}(z) - 1/Gamma(mu) - z E_{rho,mu+rho}(z)|.
inline double mlf_identity_check(double rho, double mu, Complex z) {
    if (!(rho > 0.0 && mu > 0.0)) throw DomainError("mlf_identity_check: rho and mu must be positive");
    return std::abs(mittag_leffler(rho, mu, z) - recip_gamma(mu) - z * mittag_leffler(rho, mu + rho, z));
}

enum class DerivativeKind { riemann_liouville, caputo };

/// Term-by-term check of  d^mu t^{beta-1} E_{a,beta}(lambda t^a) = t^{beta-mu-1} E_{a,beta-mu}(lambda t^a):
/// both sides are power series in t, the left one differentiated termwise
/// (d^mu t^p = Gamma(p+1)/Gamma(p+1-mu) t^{p-mu}). Returns the largest coefficient
/// mismatch over the first `terms` powers, relative to the coefficient size.
///
/// The Caputo derivative annihilates the constant k = 0 term when beta = 1, so the
/// identity holds for it only when beta != 1; the Riemann-Liouville form holds always.
inline double mlf_derivative_identity_check(double a, double beta, double mu, Complex lambda, int terms = 60,
                                            DerivativeKind kind = DerivativeKind::riemann_liouville) {
    if (!(a > 0.0 && beta > 0.0 && mu > 0.0 && mu <= 1.0))
        throw DomainError("mlf_derivative_identity_check: need a, beta > 0 and mu in (0, 1]");
    double worst = 0.0;
    Complex lk = 1.0;
    for (int k = 0; k < terms; ++k, lk *= lambda) {
        const double p = a * k + beta - 1.0;
        Complex lhs = 0.0;
        if (!(kind == DerivativeKind::caputo && p == 0.0)) {
            // lambda^k / Gamma(ak + beta) * Gamma(p + 1) / Gamma(p + 1 - mu)
            lhs = lk * recip_gamma(a * k + beta) * gamma(p + 1.0) * recip_gamma(p + 1.0 - mu);
        }
        const Complex rhs = lk * recip_gamma(a * k + beta - mu);
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        if (std::abs(lhs) == 0.0 && std::abs(rhs) == 0.0) continue;
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

}  // namespace fttsim
