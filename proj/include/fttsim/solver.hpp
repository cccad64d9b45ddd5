#pragma once

// Numerical solvers for the Cauchy problem
//
//   d^a_t E0 - d_x E0 = i sigma e^{ if} Eh
//   d^a_t Eh + d_x Eh = i sigma e^{-if} E0,      E(x, 0) given,
//
// (a) solve_fd: L1 Caputo discretisation in t, upwind differences in x;
// (b) solve_picard_classical: fixed-point iteration of the classical (a = 1) integral
//     equation E = A E + B E(., 0) with the Green function 1/2 J0(sigma sqrt(t^2 - x^2)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "fttsim/closedform.hpp"
#include "fttsim/greens.hpp"
#include "fttsim/specfun.hpp"

namespace fttsim {

struct GridSpec {
    double x_min = -1.0;
    double x_max = 1.0;
    int nx = 128;
    double t_max = 1.0;
    int nt = 128;

    GridSpec() = default;
    GridSpec(double x0, double x1, int nx_, double tmax, int nt_) : x_min(x0), x_max(x1), nx(nx_), t_max(tmax), nt(nt_) {
        validate();
    }

    double dx() const { return (x_max - x_min) / nx; }
    double dt() const { return t_max / nt; }
    double x(int i) const { return x_min + (x_max - x_min) * i / nx; }
    double t(int n) const { return t_max * n / nt; }

    void validate() const {
        if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
            throw ConfigError("grid: need finite x_min < x_max");
        if (nx < 1 || nt < 1) throw ConfigError("grid: nx and nt must be positive");
        if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("grid: t_max must be positive");
        if (dt() > dx() * (1.0 + 1e-12))
            throw CFLViolation("grid: dt = " + std::to_string(dt()) + " exceeds dx = " + std::to_string(dx()));
    }
};

/// E0, Eh sampled on the (nt+1) x (nx+1) lattice of a GridSpec, row n = time level.
class FieldGrid {
public:
    FieldGrid() = default;
    explicit FieldGrid(const GridSpec& spec)
        : spec_(spec),
          e0_(static_cast<std::size_t>(spec.nt + 1) * (spec.nx + 1)),
          eh_(static_cast<std::size_t>(spec.nt + 1) * (spec.nx + 1)) {}

    const GridSpec& spec() const noexcept { return spec_; }
    Complex& e0(int n, int i) { return e0_[index(n, i)]; }
    Complex& eh(int n, int i) { return eh_[index(n, i)]; }
    const Complex& e0(int n, int i) const { return e0_[index(n, i)]; }
    const Complex& eh(int n, int i) const { return eh_[index(n, i)]; }

    /// Throws NonFiniteField at the first non-finite entry (time-major order).
    void check_finite() const {
        for (int n = 0; n <= spec_.nt; ++n)
            for (int i = 0; i <= spec_.nx; ++i)
                if (!finite(e0(n, i)) || !finite(eh(n, i))) throw NonFiniteField(n, i);
    }

private:
    static bool finite(const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }
    std::size_t index(int n, int i) const { return static_cast<std::size_t>(n) * (spec_.nx + 1) + i; }

    GridSpec spec_;
    std::vector<Complex> e0_;
    std::vector<Complex> eh_;
};

/// Weights of the L1 discretisation of the Caputo derivative,
///   d^a u(t_n) ~ dt^{-a}/Gamma(2-a) sum_{j<n} b_j (u^{n-j} - u^{n-j-1}),  b_j = (j+1)^{1-a} - j^{1-a}.
class L1Weights {
public:
    L1Weights(double alpha, int count) : alpha_(alpha), b_(static_cast<std::size_t>(std::max(count, 1))) {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("L1Weights: alpha must lie in (0, 1]");
        const double e = 1.0 - alpha;
        b_[0] = 1.0;  // also at a = 1, where 0^0 would give 0
        for (std::size_t j = 1; j < b_.size(); ++j)
            b_[j] = std::pow(static_cast<double>(j + 1), e) - std::pow(static_cast<double>(j), e);
    }

    double alpha() const noexcept { return alpha_; }
    double operator[](std::size_t j) const { return b_[j]; }
    std::size_t size() const noexcept { return b_.size(); }
    const std::vector<double>& weights() const noexcept { return b_; }
    /// dt^{-a} / Gamma(2 - a)
    double scale(double dt) const { return std::pow(dt, -alpha_) * recip_gamma(2.0 - alpha_); }

private:
    double alpha_;
    std::vector<double> b_;
};

namespace detail {

/// Working window: the region of interest padded so that lateral truncation does
/// not reach back into it by t_max.
struct PaddedWindow {
    GridSpec grid;
    int offset = 0;  // index of roi.x_min inside the padded grid
};

inline double padding_width(const DiffractionParams& params, const InitialProfile& init, const GridSpec& roi) {
    const bool uniform = init.x_uniform() && !params.phase.depends_on(Variable::x);
    if (uniform) return 0.0;
    double pad = roi.t_max;
    if (params.alpha < 1.0) {
        // Fractional dynamics leak beyond the light cone: widen until the Green function
        // at the window edge is negligible.
        const SubordinationKernel kernel(params.alpha, GreensKind::green, 1e-15);
        const double ta = std::pow(roi.t_max, params.alpha);
        pad = std::max(pad, kernel.support_end() * ta);  // beyond this G_a vanishes identically
        GreensQuery q{0.0, roi.t_max, params.alpha, params.sigma()};
        double lo = roi.t_max, hi = pad;
        q.x = lo;
        if (std::abs(green_fractional_with(kernel, q)) < 1e-8) return lo;
        for (int it = 0; it < 40 && hi - lo > roi.dx(); ++it) {
            q.x = 0.5 * (lo + hi);
            if (std::abs(green_fractional_with(kernel, q)) < 1e-8) hi = q.x;
            else lo = q.x;
        }
        pad = hi;
    }
    return pad;
}

inline PaddedWindow make_window(const GridSpec& roi, double pad) {
    const double dx = roi.dx();
    const int extra = static_cast<int>(std::ceil(pad / dx - 1e-9));
    PaddedWindow w;
    w.offset = extra;
    w.grid.x_min = roi.x_min - extra * dx;
    w.grid.x_max = roi.x_max + extra * dx;
    w.grid.nx = roi.nx + 2 * extra;
    w.grid.t_max = roi.t_max;
    w.grid.nt = roi.nt;
    return w;
}

inline FieldGrid crop(const FieldGrid& full, const GridSpec& roi, int offset) {
    FieldGrid out(roi);
    for (int n = 0; n <= roi.nt; ++n)
        for (int i = 0; i <= roi.nx; ++i) {
            out.e0(n, i) = full.e0(n, i + offset);
            out.eh(n, i) = full.eh(n, i + offset);
        }
    return out;
}

// Row 0 of the ROI is the initial profile sampled exactly at the ROI abscissae.
inline void sample_initial(FieldGrid& g, const InitialProfile& init) {
    const auto& s = g.spec();
    for (int i = 0; i <= s.nx; ++i) {
        g.e0(0, i) = init.e0(s.x(i));
        g.eh(0, i) = init.eh(s.x(i));
    }
}

inline Complex phase_factor(const PhaseExpr& f, double x, double t, double sign) {
    const double v = f(x, t);
    return {std::cos(sign * v), std::sin(sign * v)};
}

// alpha = 1: characteristics x + t = const (E0) and x - t = const (Eh), Heun along each.
inline void march_classical(FieldGrid& g, const DiffractionParams& params) {
    const auto& s = g.spec();
    const int nx = s.nx;
    const double dt = s.dt();
    const double lam = dt / s.dx();
    const Complex is = Complex(0.0, 1.0) * params.sigma();
    const bool has_phase = !params.phase.is_zero();
    std::vector<Complex> p0(nx + 1), ph(nx + 1), f0(nx + 1), fh(nx + 1), s0(nx + 1), sh(nx + 1), q0(nx + 1), qh(nx + 1);
    std::vector<Complex> rot_now(nx + 1, 1.0), rot_next(nx + 1, 1.0);
    for (int n = 0; n < s.nt; ++n) {
        const double tn = s.t(n), tn1 = s.t(n + 1);
        if (has_phase)
            for (int i = 0; i <= nx; ++i) {
                rot_now[i] = phase_factor(params.phase, s.x(i), tn, 1.0);
                rot_next[i] = phase_factor(params.phase, s.x(i), tn1, 1.0);
            }
        for (int i = 0; i <= nx; ++i) {
            s0[i] = is * rot_now[i] * g.eh(n, i);
            sh[i] = is * std::conj(rot_now[i]) * g.e0(n, i);
        }
        // foot of the characteristic: E0 comes from x + dt, Eh from x - dt (zero-gradient inflow)
        for (int i = 0; i <= nx; ++i) {
            const int r = std::min(i + 1, nx), l = std::max(i - 1, 0);
            f0[i] = (1.0 - lam) * g.e0(n, i) + lam * g.e0(n, r);
            fh[i] = (1.0 - lam) * g.eh(n, i) + lam * g.eh(n, l);
            q0[i] = (1.0 - lam) * s0[i] + lam * s0[r];
            qh[i] = (1.0 - lam) * sh[i] + lam * sh[l];
            p0[i] = f0[i] + dt * q0[i];
            ph[i] = fh[i] + dt * qh[i];
        }
        for (int i = 0; i <= nx; ++i) {
            g.e0(n + 1, i) = f0[i] + 0.5 * dt * (q0[i] + is * rot_next[i] * ph[i]);
            g.eh(n + 1, i) = fh[i] + 0.5 * dt * (qh[i] + is * std::conj(rot_next[i]) * p0[i]);
        }
    }
}

// alpha < 1: implicit L1 step with upwind x-differences; the coupling is taken at the
// new level through a predictor and two corrector sweeps.
inline void march_fractional(FieldGrid& g, const DiffractionParams& params) {
    const auto& s = g.spec();
    const int nx = s.nx;
    const L1Weights w(params.alpha, s.nt + 1);
    const double a0 = w.scale(s.dt());
    const double c = 1.0 / s.dx();
    const Complex is = Complex(0.0, 1.0) * params.sigma();
    const bool has_phase = !params.phase.is_zero();
    std::vector<Complex> m0(nx + 1), mh(nx + 1), rot(nx + 1, 1.0), n0(nx + 1), nh(nx + 1);
    for (int n = 0; n < s.nt; ++n) {
        const double tn1 = s.t(n + 1);
        // memory: a0 sum_{j=1}^{n} b_j (u^{n+1-j} - u^{n-j})
        std::fill(m0.begin(), m0.end(), Complex(0.0));
        std::fill(mh.begin(), mh.end(), Complex(0.0));
        for (int j = 1; j <= n; ++j) {
            const double bj = a0 * w[j];
            const int hi = n + 1 - j, lo = n - j;
            for (int i = 0; i <= nx; ++i) {
                m0[i] += bj * (g.e0(hi, i) - g.e0(lo, i));
                mh[i] += bj * (g.eh(hi, i) - g.eh(lo, i));
            }
        }
        if (has_phase)
            for (int i = 0; i <= nx; ++i) rot[i] = phase_factor(params.phase, s.x(i), tn1, 1.0);
        // predictor uses the coupling at the old level
        for (int i = 0; i <= nx; ++i) {
            nh[i] = g.eh(n, i);
            n0[i] = g.e0(n, i);
        }
        for (int sweep = 0; sweep < 3; ++sweep) {
            // E0: a0 (u_i - u^n_i) + m0_i - (u_{i+1} - u_i)/dx = S0, swept right to left
            for (int i = nx; i >= 0; --i) {
                const Complex src = is * rot[i] * nh[i];
                const Complex rhs = a0 * g.e0(n, i) - m0[i] + src;
                g.e0(n + 1, i) = i == nx ? rhs / a0 : (rhs + c * g.e0(n + 1, i + 1)) / (a0 + c);
            }
            // Eh: a0 (u_i - u^n_i) + mh_i + (u_i - u_{i-1})/dx = Sh, swept left to right
            for (int i = 0; i <= nx; ++i) {
                const Complex src = is * std::conj(rot[i]) * n0[i];
                const Complex rhs = a0 * g.eh(n, i) - mh[i] + src;
                g.eh(n + 1, i) = i == 0 ? rhs / a0 : (rhs + c * g.eh(n + 1, i - 1)) / (a0 + c);
            }
            for (int i = 0; i <= nx; ++i) {
                n0[i] = g.e0(n + 1, i);
                nh[i] = g.eh(n + 1, i);
            }
        }
    }
}

}  // namespace detail

/// Finite-difference solution on `grid` (the region of interest). The computation runs
/// on a laterally padded window which is cropped on return.
inline FieldGrid solve_fd(const DiffractionParams& params, const InitialProfile& init, const GridSpec& grid) {
    params.validate();
    grid.validate();
    const auto window = detail::make_window(grid, detail::padding_width(params, init, grid));
    FieldGrid full(window.grid);
    detail::sample_initial(full, init);
    for (int i = 0; i <= window.grid.nx; ++i)
        if (!std::isfinite(std::abs(full.e0(0, i))) || !std::isfinite(std::abs(full.eh(0, i))))
            throw NonFiniteField(0, i - window.offset);
    if (params.alpha == 1.0) detail::march_classical(full, params);
    else detail::march_fractional(full, params);
    auto out = detail::crop(full, grid, window.offset);
    detail::sample_initial(out, init);
    out.check_finite();
    return out;
}

/// Picard iteration of the classical integral equation (alpha = 1). Requires dx = dt so
/// that the edges of the integration triangle pass through lattice points.
///
/// Each sweep updates the levels in time order with the newest values (the discrete
/// operator is strictly causal), so the iteration reaches its fixed point after one
/// sweep and the second sweep certifies it; `max_iters` bounds the sweep count.
inline FieldGrid solve_picard_classical(const DiffractionParams& params, const InitialProfile& init,
                                        const GridSpec& grid, int max_iters = 20, double fix_tol = 1e-10) {
    params.validate();
    grid.validate();
    if (params.alpha != 1.0) throw ConfigError("picard solver requires alpha = 1");
    if (std::abs(grid.dx() - grid.dt()) > 1e-9 * grid.dx())
        throw ConfigError("picard solver requires dx = dt");
    if (max_iters < 1 || !(fix_tol > 0.0)) throw ConfigError("picard solver: need max_iters >= 1, fix_tol > 0");

    const bool uniform = init.x_uniform() && !params.phase.depends_on(Variable::x);
    const auto window = detail::make_window(grid, uniform ? 0.0 : grid.t_max);
    const auto& s = window.grid;
    const int nx = s.nx, nt = s.nt;
    const double h = s.dx();
    const Complex sigma = params.sigma();
    const Complex is = Complex(0.0, 1.0) * sigma;
    const PhaseExpr& f = params.phase;

    // Green function table G[d][k] = 1/2 J0(sigma h sqrt(d^2 - k^2)), |k| <= d, and dG/dt.
    std::vector<std::vector<Complex>> gt(nt + 1), gdt(nt + 1);
    for (int d = 0; d <= nt; ++d) {
        gt[d].resize(d + 1);
        gdt[d].resize(d + 1);
        for (int k = 0; k <= d; ++k) {
            const double w = h * std::sqrt(static_cast<double>(d - k) * (d + k));
            gt[d][k] = 0.5 * bessel_j0(sigma * w);
            gdt[d][k] = -0.5 * sigma * (d * h) * detail::j1_over(sigma, w);
        }
    }
    auto clamp = [nx](int i) { return std::clamp(i, 0, nx); };

    // Initial row and its x-derivatives (4th-order differences on the lattice).
    std::vector<Complex> e0(nx + 1), eh(nx + 1), d0(nx + 1), dh(nx + 1), r0(nx + 1), rh(nx + 1);
    for (int i = 0; i <= nx; ++i) {
        e0[i] = init.e0(s.x(i));
        eh[i] = init.eh(s.x(i));
    }
    auto deriv = [&](const std::vector<Complex>& v, int i) {
        if (i >= 2 && i <= nx - 2) return (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
        if (i >= 1 && i <= nx - 1) return (v[i + 1] - v[i - 1]) / (2.0 * h);
        return i == 0 ? (v[1] - v[0]) / h : (v[nx] - v[nx - 1]) / h;
    };
    for (int i = 0; i <= nx; ++i) {
        d0[i] = deriv(e0, i);
        dh[i] = deriv(eh, i);
        const Complex rot = detail::phase_factor(f, s.x(i), 0.0, 1.0);
        r0[i] = is * rot * eh[i];             // i sigma e^{if} Eh(u, 0)
        rh[i] = is * std::conj(rot) * e0[i];  // i sigma e^{-if} E0(u, 0)
    }

    // B term: d/dt (G * E0) + G * E0' + G * (i sigma e^{if} Eh), likewise for Eh with -E0'.
    FieldGrid b(s);
    for (int n = 0; n <= nt; ++n)
        for (int i = 0; i <= nx; ++i) {
            if (n == 0) {
                b.e0(0, i) = e0[i];
                b.eh(0, i) = eh[i];
                continue;
            }
            Complex s0 = 0.0, sh = 0.0;
            for (int k = -n; k <= n; ++k) {
                const int u = clamp(i - k);
                const double wt = (k == -n || k == n) ? 0.5 * h : h;
                const Complex gv = gt[n][std::abs(k)], gd = gdt[n][std::abs(k)];
                s0 += wt * (gd * e0[u] + gv * (d0[u] + r0[u]));
                sh += wt * (gd * eh[u] + gv * (-dh[u] + rh[u]));
            }
            // boundary terms of d/dt int_{x-t}^{x+t}: G(+-t, t) = 1/2
            s0 += 0.5 * (e0[clamp(i - n)] + e0[clamp(i + n)]);
            sh += 0.5 * (eh[clamp(i - n)] + eh[clamp(i + n)]);
            b.e0(n, i) = s0;
            b.eh(n, i) = sh;
        }

    // A-term sources: (O+ e^{if}) Eh = i (f_t + f_x) e^{if} Eh,  (O- e^{-if}) E0 = -i (f_t - f_x) e^{-if} E0.
    const bool has_phase = !f.is_zero();
    std::vector<Complex> k0, kh;
    if (has_phase) {
        k0.resize(static_cast<std::size_t>(nt + 1) * (nx + 1));
        kh.resize(k0.size());
        for (int n = 0; n <= nt; ++n)
            for (int i = 0; i <= nx; ++i) {
                const double x = s.x(i), t = s.t(n);
                const double fx = f.dx(x, t), ft = f.dt(x, t);
                const Complex rot = detail::phase_factor(f, x, t, 1.0);
                k0[static_cast<std::size_t>(n) * (nx + 1) + i] = is * Complex(0.0, ft + fx) * rot;
                kh[static_cast<std::size_t>(n) * (nx + 1) + i] = is * Complex(0.0, -(ft - fx)) * std::conj(rot);
            }
    }

    FieldGrid e = b;
    if (!has_phase) {
        auto out = detail::crop(e, grid, window.offset);
        detail::sample_initial(out, init);
        out.check_finite();
        return out;
    }

    // Quadrature-weighted Green table for the triangle rows (end points carry h/2).
    std::vector<std::vector<Complex>> gw(nt + 1);
    for (int d = 0; d <= nt; ++d) {
        gw[d].resize(2 * d + 1);
        for (int k = -d; k <= d; ++k) gw[d][k + d] = ((k == -d || k == d) ? 0.5 * h : h) * gt[d][std::abs(k)];
    }
    // Source rows (O+ e^{if}) Eh and (O- e^{-if}) E0, padded by nt on each side so that
    // the clamped (zero-gradient) extension needs no index arithmetic in the inner loop.
    const int wide = nx + 1 + 2 * nt;
    std::vector<Complex> src0(static_cast<std::size_t>(nt + 1) * wide), srch(src0.size());
    auto fill_sources = [&](int m) {
        const std::size_t row = static_cast<std::size_t>(m) * (nx + 1);
        Complex* p0 = &src0[static_cast<std::size_t>(m) * wide];
        Complex* ph = &srch[static_cast<std::size_t>(m) * wide];
        for (int j = 0; j < wide; ++j) {
            const int u = clamp(j - nt);
            p0[j] = k0[row + u] * e.eh(m, u);
            ph[j] = kh[row + u] * e.e0(m, u);
        }
    };

    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iters; ++iter) {
        double change = 0.0;
        fill_sources(0);
        for (int n = 1; n <= nt; ++n) {
            for (int i = 0; i <= nx; ++i) {
                Complex a0 = 0.0, ah = 0.0;
                // triangle rows m = 0..n-1 (the apex row has zero length)
                for (int m = 0; m < n; ++m) {
                    const int d = n - m;
                    const double wv = m == 0 ? 0.5 * h : h;
                    const Complex* g = gw[d].data();
                    // u = i - k for k = -d..d, stored at offset u + nt
                    const Complex* p0 = &src0[static_cast<std::size_t>(m) * wide + (i + nt)];
                    const Complex* ph = &srch[static_cast<std::size_t>(m) * wide + (i + nt)];
                    Complex r0s = 0.0, rhs = 0.0;
                    for (int k = -d; k <= d; ++k) {
                        r0s += g[k + d] * p0[-k];
                        rhs += g[k + d] * ph[-k];
                    }
                    a0 += wv * r0s;
                    ah += wv * rhs;
                }
                const Complex n0 = b.e0(n, i) + a0, nh = b.eh(n, i) + ah;
                change = std::max({change, std::abs(n0 - e.e0(n, i)), std::abs(nh - e.eh(n, i))});
                e.e0(n, i) = n0;
                e.eh(n, i) = nh;
            }
            fill_sources(n);
        }
        residual = change;
        if (!std::isfinite(change)) break;
        if (change < fix_tol) {
            auto out = detail::crop(e, grid, window.offset);
            detail::sample_initial(out, init);
            out.check_finite();
            return out;
        }
    }
    throw NoConvergence(max_iters, residual);
}

/// Sup-norm distance between two grids; `coarse` must embed in `fine` by an integer
/// refinement factor in both directions.
inline double sup_distance(const FieldGrid& coarse, const FieldGrid& fine) {
    const auto& c = coarse.spec();
    const auto& f = fine.spec();
    const int rx = f.nx / c.nx, rt = f.nt / c.nt;
    if (rx * c.nx != f.nx || rt * c.nt != f.nt) throw DomainError("sup_distance: grids are not nested");
    double worst = 0.0;
    for (int n = 0; n <= c.nt; ++n)
        for (int i = 0; i <= c.nx; ++i)
            worst = std::max({worst, std::abs(coarse.e0(n, i) - fine.e0(n * rt, i * rx)),
                              std::abs(coarse.eh(n, i) - fine.eh(n * rt, i * rx))});
    return worst;
}

/// Sup-norm error of a perfect-crystal plane-wave run against the Pendelloesung.
inline double pendellosung_error(const FieldGrid& g, const DiffractionParams& params) {
    double worst = 0.0;
    for (int n = 0; n <= g.spec().nt; ++n) {
        const auto p = pendellosung(params, g.spec().t(n));
        for (int i = 0; i <= g.spec().nx; ++i)
            worst = std::max({worst, std::abs(g.e0(n, i) - p.e0), std::abs(g.eh(n, i) - p.eh)});
    }
    return worst;
}

struct OrderEstimate {
    double order = 0.0;
    std::vector<double> errors;  // per level (oracle error, or successive differences)
};

/// Runs solve_fd on `levels` dyadically refined grids (dx and dt halved together) and
/// estimates the convergence order: against the Pendelloesung when the data allow it,
/// otherwise by Richardson from successive differences.
inline OrderEstimate refine_and_estimate_order(const DiffractionParams& params, const InitialProfile& init,
                                               const GridSpec& base, int levels) {
    if (levels < 3) throw ConfigError("refine_and_estimate_order: need at least 3 levels");
    const bool oracle = params.phase.is_zero() && init.kind() == InitialProfile::Kind::plane_wave &&
                        init.e0(0.0) == Complex(1.0) && init.eh(0.0) == Complex(0.0);
    std::vector<FieldGrid> runs;
    OrderEstimate est;
    for (int l = 0; l < levels; ++l) {
        GridSpec g = base;
        g.nx = base.nx << l;
        g.nt = base.nt << l;
        runs.push_back(solve_fd(params, init, g));
        if (oracle) est.errors.push_back(pendellosung_error(runs.back(), params));
    }
    if (!oracle)
        for (int l = 0; l + 1 < levels; ++l) est.errors.push_back(sup_distance(runs[l], runs[l + 1]));
    // least-squares slope of log2(error) against level
    const auto& e = est.errors;
    const int m = static_cast<int>(e.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int k = 0; k < m; ++k) {
        if (!(e[k] > 0.0)) continue;
        const double y = std::log2(e[k]);
        sx += k;
        sy += y;
        sxx += double(k) * k;
        sxy += k * y;
        ++used;
    }
    if (used < 2) {
        est.order = std::numeric_limits<double>::infinity();  // exact at every level
        return est;
    }
    est.order = -(used * sxy - sx * sy) / (used * sxx - sx * sx);
    return est;
}

}  // namespace fttsim
