#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <queue>
#include <type_traits>
#include <vector>

#include "fttsim/errors.hpp"

namespace fttsim {

/// Tolerances for the adaptive integrators. `tail_epsilon` is the kernel
/// magnitude below which integration domains may be truncated.
struct QuadratureControl {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    double tail_epsilon = 1e-13;
};

template <class T>
struct QuadratureResult {
    T value{};
    double error = 0.0;
    double l1_norm = 0.0;  // integral of |f|, used for cancellation estimates
    int evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes (indices 1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
double magnitude(const T& v) {
    if constexpr (requires { v.norm(); })
        return v.norm();
    else
        return std::abs(v);
}

template <class T>
struct Panel {
    double a;
    double b;
    T value;
    double error;
    double l1;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class T, class F>
Panel<T> gauss_kronrod_panel(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(center);
    T kronrod = fc * kKronrodWeights[7];
    T gauss = fc * kGaussWeights[3];
    double l1 = magnitude(fc) * kKronrodWeights[7];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const T f1 = f(center - dx);
        const T f2 = f(center + dx);
        kronrod += (f1 + f2) * kKronrodWeights[i];
        l1 += (magnitude(f1) + magnitude(f2)) * kKronrodWeights[i];
        if (i % 2 == 1) gauss += (f1 + f2) * kGaussWeights[i / 2];
    }
    return {a, b, kronrod * half, magnitude((kronrod - gauss) * half), l1 * std::abs(half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of `f` over the
/// consecutive intervals defined by `breaks` (sorted, at least two entries).
/// Works for real or complex valued integrands. Throws ConvergenceError when
/// the subdivision budget is exhausted before the tolerance is met.
template <class F>
auto integrate(F&& f, const std::vector<double>& breaks, const QuadratureControl& qc = {},
               bool throw_on_failure = true) {
    using T = std::decay_t<decltype(f(0.0))>;
    std::priority_queue<detail::Panel<T>> panels;
    T total{};
    double total_error = 0.0;
    double total_l1 = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (!(breaks[k + 1] > breaks[k])) continue;
        auto p = detail::gauss_kronrod_panel<T>(f, breaks[k], breaks[k + 1]);
        total += p.value;
        total_error += p.error;
        total_l1 += p.l1;
        panels.push(p);
    }
    int evaluations = static_cast<int>(15 * panels.size());
    int subdivisions = 0;
    auto tolerance = [&] { return std::max(qc.abs_tol, qc.rel_tol * detail::magnitude(total)); };
    while (!panels.empty() && total_error > tolerance()) {
        if (subdivisions >= qc.max_subdivisions) {
            if (throw_on_failure)
                throw ConvergenceError("adaptive quadrature exhausted " +
                                       std::to_string(qc.max_subdivisions) +
                                       " subdivisions (error estimate " +
                                       std::to_string(total_error) + ")");
            break;
        }
        auto worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval can no longer be split in floating point
            total_error -= worst.error;
            continue;
        }
        auto left = detail::gauss_kronrod_panel<T>(f, worst.a, mid);
        auto right = detail::gauss_kronrod_panel<T>(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        total_l1 += left.l1 + right.l1 - worst.l1;
        panels.push(left);
        panels.push(right);
        ++subdivisions;
    }
    // Recompute the sum from the retained panels to shed accumulated rounding.
    T sum{};
    double err = 0.0;
    double l1 = 0.0;
    while (!panels.empty()) {
        sum += panels.top().value;
        err += panels.top().error;
        l1 += panels.top().l1;
        panels.pop();
    }
    return QuadratureResult<T>{sum, err, l1, evaluations};
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadratureControl& qc = {},
               bool throw_on_failure = true) {
    return integrate(std::forward<F>(f), std::vector<double>{a, b}, qc, throw_on_failure);
}

/// Sorted, deduplicated breakpoints clipped to [a, b].
inline std::vector<double> make_breaks(double a, double b, std::initializer_list<double> interior) {
    std::vector<double> out{a};
    for (double p : interior)
        if (p > a && p < b) out.push_back(p);
    out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace fttsim
