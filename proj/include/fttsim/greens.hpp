#pragma once

// Classical and fractional Green functions of the (fractional) Takagi-Taupin system.
//
//   G(x,t)          = 1/2 J0(sigma sqrt(t^2 - x^2)) Theta(t - |x|)
//   D^g_{0t} G_a    = 1/2 int_{|x|}^inf J0(sigma sqrt(tau^2 - x^2)) t^{-g-1} phi(-a, -g; -tau/t^a) dtau
//
// for g = 0 (G_a itself), g = a - 1 and g = 2a - 1. With tau = z t^a the Wright factor
// becomes a fixed kernel in z, which is what WrightKernel caches.

#include <cmath>
#include <complex>
#include <memory>

#include "fttsim/quadrature.hpp"
#include "fttsim/specfun.hpp"
#include "fttsim/wright_kernel.hpp"

namespace fttsim {

struct GreensQuery {
    double x = 0.0;
    double t = 1.0;
    double alpha = 1.0;
    Complex sigma{-1.0, 0.0};

    void validate() const {
        if (!(t > 0.0)) throw DomainError("GreensQuery: t must be positive");
        if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("GreensQuery: alpha must lie in (0, 1]");
        if (!std::isfinite(x) || !std::isfinite(sigma.real()) || !std::isfinite(sigma.imag()))
            throw DomainError("GreensQuery: non-finite argument");
    }
};

/// Which Riemann-Liouville transform of G_alpha is wanted.
enum class GreensKind {
    green,          ///< G_alpha
    rl,             ///< D^{alpha-1}_{0t} G_alpha
    rl_two_alpha,   ///< D^{2alpha-1}_{0t} G_alpha
};

/// Coupling coefficient sigma = -1 + i kappa.
inline Complex coupling(double kappa) { return {-1.0, kappa}; }

/// sqrt(a^2 - b^2) for a >= b >= 0 without cancellation.
inline double light_cone_radius(double a, double b) { return std::sqrt(std::max(0.0, (a - b) * (a + b))); }

/// Classical Green function; at the light-cone boundary t = |x| the Heaviside
/// factor takes the midpoint value 1/2.
inline Complex green_classical(const GreensQuery& q) {
    q.validate();
    const double ax = std::abs(q.x);
    if (q.t < ax) return 0.0;
    if (q.t == ax) return 0.25;
    return 0.5 * bessel_j0(q.sigma * light_cone_radius(q.t, ax));
}

namespace detail {

inline double wright_mu(GreensKind kind, double alpha) {
    switch (kind) {
        case GreensKind::green: return 0.0;
        case GreensKind::rl: return 1.0 - alpha;
        case GreensKind::rl_two_alpha: return 1.0 - 2.0 * alpha;
    }
    return 0.0;
}

// Exponent e in the prefactor t^e of the z-integral: e = alpha - g - 1.
inline double time_exponent(GreensKind kind, double alpha) {
    switch (kind) {
        case GreensKind::green: return alpha - 1.0;
        case GreensKind::rl: return 0.0;
        case GreensKind::rl_two_alpha: return -alpha;
    }
    return 0.0;
}

}  // namespace detail

/// Subordination kernel for a given order: holds the cached Wright kernel and the
/// scaling needed to express the fractional Green function as an integral over z.
class SubordinationKernel {
public:
    SubordinationKernel(double alpha, GreensKind kind, double tail_epsilon = 1e-15)
        : alpha_(alpha),
          kind_(kind),
          kernel_(WrightKernel::shared(alpha, detail::wright_mu(kind, alpha), tail_epsilon)) {}

    double alpha() const noexcept { return alpha_; }
    GreensKind kind() const noexcept { return kind_; }
    const WrightKernel& wright() const noexcept { return *kernel_; }
    double support_end() const noexcept { return kernel_->support_end(); }
    double time_prefactor(double t) const { return std::pow(t, detail::time_exponent(kind_, alpha_)); }

    /// Breakpoints for z-integrals on [a, b]: the kernel peak near z = 1 and the
    /// classical wavefront z = t^{1-alpha} (tau = t).
    std::vector<double> breaks(double a, double b, double t) const {
        return make_breaks(a, b, {1.0, std::pow(t, 1.0 - alpha_), 0.5, 2.0});
    }

private:
    double alpha_;
    GreensKind kind_;
    std::shared_ptr<const WrightKernel> kernel_;
};

namespace detail {

inline QuadratureControl greens_control(const QuadratureControl& qc) {
    QuadratureControl c = qc;
    c.abs_tol = std::max(qc.abs_tol, 1e-14);
    return c;
}

// Bound on the J0 growth factor e^{|Im sigma| tau} that the kernel tail cutoff tolerates.
inline void check_tail_growth(const SubordinationKernel& k, const GreensQuery& q) {
    const double growth = std::abs(q.sigma.imag()) * k.support_end() * std::pow(q.t, q.alpha);
    if (growth > 20.0)
        throw DomainError("fractional Green function: absorption too strong for the kernel tail cutoff");
}

}  // namespace detail

/// D^g_{0t} G_alpha(x, t) for an already constructed kernel.
inline Complex green_fractional_with(const SubordinationKernel& kernel, const GreensQuery& q,
                                     const QuadratureControl& qc = {}) {
    q.validate();
    detail::check_tail_growth(kernel, q);
    const double ta = std::pow(q.t, q.alpha);
    const double ax = std::abs(q.x);
    const double z0 = ax / ta;
    const double z1 = kernel.support_end();
    if (z0 >= z1) return 0.0;
    const auto& w = kernel.wright();
    auto integrand = [&](double z) -> Complex {
        return bessel_j0(q.sigma * light_cone_radius(z * ta, ax)) * w(z);
    };
    auto res = integrate(integrand, kernel.breaks(z0, z1, q.t), detail::greens_control(qc));
    return 0.5 * kernel.time_prefactor(q.t) * res.value;
}

/// Fractional Green function G_alpha(x, t). alpha = 1 returns the classical G.
inline Complex green_fractional(const GreensQuery& q, const QuadratureControl& qc = {}) {
    q.validate();
    if (q.alpha == 1.0) return green_classical(q);
    return green_fractional_with(SubordinationKernel(q.alpha, GreensKind::green, qc.tail_epsilon * 1e-2), q, qc);
}

/// D^{alpha-1}_{0t} G_alpha(x, t). alpha = 1 returns the classical G.
inline Complex green_fractional_rl(const GreensQuery& q, const QuadratureControl& qc = {}) {
    q.validate();
    if (q.alpha == 1.0) return green_classical(q);
    return green_fractional_with(SubordinationKernel(q.alpha, GreensKind::rl, qc.tail_epsilon * 1e-2), q, qc);
}

/// D^{2alpha-1}_{0t} G_alpha(x, t) for alpha < 1 (at alpha = 1 it is the distribution d/dt G).
inline Complex green_fractional_rl2(const GreensQuery& q, const QuadratureControl& qc = {}) {
    q.validate();
    if (q.alpha == 1.0)
        throw DomainError("green_fractional_rl2: at alpha = 1 the kernel is the distribution dG/dt");
    return green_fractional_with(SubordinationKernel(q.alpha, GreensKind::rl_two_alpha, qc.tail_epsilon * 1e-2),
                                 q, qc);
}

}  // namespace fttsim
