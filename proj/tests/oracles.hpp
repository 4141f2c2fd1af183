#pragma once

// Test-only oracles, independent of the library's implementation paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracles {

// Adaptive Simpson quadrature to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)> &f, double a, double b,
                               double tol, int depth = 60) {
    const auto simpson = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
    };
    std::function<double(double, double, double, double, int)> recurse =
        [&](double lo, double hi, double whole, double eps, int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double left = simpson(lo, mid);
        const double right = simpson(mid, hi);
        if (d <= 0) throw std::runtime_error("adaptive_simpson: depth exhausted");
        if (std::fabs(left + right - whole) < 15.0 * eps)
            return left + right + (left + right - whole) / 15.0;
        return recurse(lo, mid, left, eps / 2.0, d - 1) +
               recurse(mid, hi, right, eps / 2.0, d - 1);
    };
    return recurse(a, b, simpson(a, b), tol, depth);
}

// gamma(a, x) by direct quadrature of the defining integral. The integrand
// is singular at 0 for a < 1; split off [0, eps] using the series head.
inline double lower_incomplete_gamma_quadrature(double a, double x, double tol = 1e-10) {
    if (x == 0.0) return 0.0;
    const auto integrand = [a](double u) { return std::pow(u, a - 1.0) * std::exp(-u); };
    if (a >= 1.0) return adaptive_simpson(integrand, 0.0, x, tol);
    const double eps = std::min(1e-6, x / 2.0);
    // int_0^eps u^(a-1) e^(-u) du = sum_k (-1)^k eps^(a+k) / (k! (a+k))
    double head = 0.0, term = std::pow(eps, a) / a;
    for (int k = 0; std::fabs(term) > tol * 1e-3 && k < 50; ++k) {
        head += term;
        term *= -eps * (a + k) / ((k + 1.0) * (a + k + 1.0));
    }
    return head + adaptive_simpson(integrand, eps, x, tol);
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::span<const double> samples,
                           const std::function<double(double)> &cdf) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double c = cdf(sorted[i]);
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - c));
        d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
    }
    return d;
}

// KS critical value at significance 0.01 (asymptotic).
inline double ks_critical_1pct(std::size_t n) {
    return 1.628 / std::sqrt(static_cast<double>(n));
}

inline double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracles
