#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "fttsim/specfun.hpp"

namespace fttsim {

/// Piecewise Chebyshev approximation of s -> phi(-beta, mu; -s) on [0, s_max], where
/// s_max is the point beyond which |phi| stays below `tail_epsilon`. The subordination
/// kernels of the fractional Green functions are evaluated thousands of times per
/// quadrature, so they are sampled once and interpolated.
class WrightKernel {
public:
    static constexpr int kPanelOrder = 24;

    WrightKernel(double beta, double mu, double tail_epsilon = 1e-15, double rel_tol = 1e-13)
        : beta_(beta), mu_(mu), tail_epsilon_(tail_epsilon) {
        if (!(beta > 0.0 && beta < 1.0))
            throw DomainError("WrightKernel: beta must lie in (0, 1); beta = 1 is the classical limit");
        find_support();
        build(rel_tol);
    }

    double beta() const noexcept { return beta_; }
    double mu() const noexcept { return mu_; }
    /// End of the retained support; the kernel is treated as 0 beyond it.
    double support_end() const noexcept { return s_max_; }
    double sup_norm() const noexcept { return scale_; }
    std::size_t panel_count() const noexcept { return panels_.size(); }

    double operator()(double s) const {
        if (s < 0.0 || s > s_max_) return 0.0;
        auto it = std::upper_bound(edges_.begin(), edges_.end(), s);
        std::size_t k = it == edges_.begin() ? 0 : static_cast<std::size_t>(it - edges_.begin()) - 1;
        if (k >= panels_.size()) k = panels_.size() - 1;
        return panels_[k].eval(s);
    }

    /// Process-wide cache keyed by (beta, mu, tail_epsilon). Thread safe.
    static std::shared_ptr<const WrightKernel> shared(double beta, double mu, double tail_epsilon = 1e-15) {
        static std::mutex mutex;
        static std::map<std::tuple<double, double, double>, std::shared_ptr<const WrightKernel>> cache;
        const auto key = std::make_tuple(beta, mu, tail_epsilon);
        {
            std::lock_guard lock(mutex);
            if (auto it = cache.find(key); it != cache.end()) return it->second;
        }
        auto kernel = std::make_shared<const WrightKernel>(beta, mu, tail_epsilon);
        std::lock_guard lock(mutex);
        return cache.emplace(key, std::move(kernel)).first->second;
    }

private:
    struct Panel {
        double a, b;
        std::vector<double> coeffs;

        double eval(double s) const {
            const double u = (2.0 * s - a - b) / (b - a);
            // Clenshaw recurrence
            double b1 = 0.0, b2 = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 1;) {
                const double tmp = 2.0 * u * b1 - b2 + coeffs[k];
                b2 = b1;
                b1 = tmp;
            }
            return u * b1 - b2 + coeffs[0];
        }
    };

    double exact(double s) const { return wright_phi(beta_, mu_, Complex(-s, 0.0)).real(); }

    void find_support() {
        // Scan outward from the bulk of the kernel with geometrically growing steps
        // until three consecutive samples fall below the tail threshold.
        const double width = std::max(0.01, std::sqrt(1.0 - beta_));
        double s = 1.0;
        double step = 0.05 * width;
        int below = 0;
        scale_ = 0.0;
        for (double p = 0.0; p <= 1.0; p += 0.05) scale_ = std::max(scale_, std::abs(exact(p)));
        for (int iter = 0; iter < 2000; ++iter) {
            const double v = std::abs(exact(s));
            scale_ = std::max(scale_, v);
            if (v < tail_epsilon_) {
                if (++below == 3) break;
            } else {
                below = 0;
            }
            s += step;
            step *= 1.08;
        }
        if (below < 3) throw ConvergenceError("WrightKernel: could not locate the tail cutoff");
        s_max_ = s;
    }

    Panel fit(double a, double b, std::vector<double>& values) const {
        const int n = kPanelOrder;
        values.resize(n + 1);
        for (int j = 0; j <= n; ++j) {
            const double u = std::cos(std::numbers::pi * j / n);
            values[j] = exact(0.5 * (a + b) + 0.5 * (b - a) * u);
        }
        Panel p{a, b, std::vector<double>(n + 1)};
        for (int k = 0; k <= n; ++k) {
            double sum = 0.0;
            for (int j = 0; j <= n; ++j) {
                const double w = (j == 0 || j == n) ? 0.5 : 1.0;
                sum += w * values[j] * std::cos(std::numbers::pi * k * j / n);
            }
            p.coeffs[k] = sum * 2.0 / n;
        }
        p.coeffs[0] *= 0.5;
        p.coeffs[n] *= 0.5;
        return p;
    }

    void build(double rel_tol) {
        std::vector<std::pair<double, double>> todo;
        std::vector<double> seeds{0.0};
        for (double e : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0})
            if (e < s_max_) seeds.push_back(e);
        seeds.push_back(s_max_);
        for (std::size_t k = seeds.size() - 1; k-- > 0;) todo.emplace_back(seeds[k], seeds[k + 1]);
        std::vector<double> values;
        const double tol = rel_tol * std::max(scale_, 1e-300);
        while (!todo.empty()) {
            auto [a, b] = todo.back();
            todo.pop_back();
            Panel p = fit(a, b, values);
            const double tail = std::abs(p.coeffs[kPanelOrder]) + std::abs(p.coeffs[kPanelOrder - 1]) +
                                std::abs(p.coeffs[kPanelOrder - 2]);
            if (tail > tol && (b - a) > 1e-6) {
                const double m = 0.5 * (a + b);
                todo.emplace_back(m, b);
                todo.emplace_back(a, m);
                continue;
            }
            panels_.push_back(std::move(p));
        }
        std::sort(panels_.begin(), panels_.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
        for (const auto& p : panels_) edges_.push_back(p.a);
    }

    double beta_;
    double mu_;
    double tail_epsilon_;
    double s_max_ = 0.0;
    double scale_ = 0.0;
    std::vector<Panel> panels_;
    std::vector<double> edges_;
};

}  // namespace fttsim
