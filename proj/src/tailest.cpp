#include "tailsim/tailest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "tailsim/rng.hpp"

namespace tailsim::tailest {

namespace {

constexpr std::size_t kHillFloor = 10;
constexpr std::size_t kHardSampleFloor = 1000;

std::pair<double, double> percentile_ci(std::vector<double> estimates) {
    std::sort(estimates.begin(), estimates.end());
    const auto at = [&](double q) {
        const double pos = q * static_cast<double>(estimates.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, estimates.size() - 1);
        const double frac = pos - std::floor(pos);
        return estimates[lo] * (1.0 - frac) + estimates[hi] * frac;
    };
    return {at(0.025), at(0.975)};
}

// Evaluates one estimate per resample index; deterministic merge by index.
std::vector<double> bootstrap_estimates(std::span<const double> samples, std::size_t resamples,
                                        std::uint64_t seed,
                                        double (*estimate)(std::span<const double>, const void *),
                                        const void *ctx) {
    std::vector<double> out(resamples);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, 8);
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    for (std::size_t t = 0; t < workers; ++t) {
        futures.push_back(std::async(std::launch::async, [&] {
            std::vector<double> resample(samples.size());
            for (std::size_t b = next.fetch_add(1); b < resamples; b = next.fetch_add(1)) {
                rng::Stream stream(rng::derive(seed, rng::StreamKind::Bootstrap, b));
                std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
                for (auto &v : resample) v = samples[pick(stream.generator())];
                out[b] = estimate(resample, ctx);
            }
        }));
    }
    for (auto &f : futures) f.get();
    return out;
}

double hill_point_estimate(std::span<const double> samples, double order_fraction) {
    const std::size_t n = samples.size();
    const auto m = static_cast<std::size_t>(
        std::ceil(order_fraction * static_cast<double>(n)));
    if (m < kHillFloor)
        throw std::invalid_argument("hill_estimator: fewer than 10 top order statistics");
    if (m >= n) throw std::invalid_argument("hill_estimator: order_fraction too large");

    std::vector<double> work(samples.begin(), samples.end());
    const std::size_t pivot = n - m - 1;  // X_(N-m) after nth_element
    std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(pivot), work.end());
    const double threshold = work[pivot];
    if (!(threshold > 0.0))
        throw std::invalid_argument("hill_estimator: nonpositive order statistic in the tail");
    double sum = 0.0;
    for (std::size_t i = pivot + 1; i < n; ++i) sum += std::log(work[i] / threshold);
    const double mean_log_ratio = sum / static_cast<double>(m);
    return 1.0 / mean_log_ratio;
}

struct RegressionCtx {
    double x_lo, x_hi;
    std::size_t grid_count;
};

double regression_point_estimate(std::span<const double> samples, const RegressionCtx &ctx) {
    const auto grid = log_spaced_grid(ctx.x_lo, ctx.x_hi, ctx.grid_count);
    const auto curve = empirical_ccdf(samples, grid);
    return loglog_slope(curve, ctx.x_lo, ctx.x_hi).index_hat;
}

}  // namespace

std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("log_spaced_grid: need 0 < lo < hi");
    if (count < 2) throw std::invalid_argument("log_spaced_grid: need at least 2 points");
    std::vector<double> grid(count);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                     static_cast<double>(count - 1));
    return grid;
}

CcdfCurve empirical_ccdf(std::span<const double> samples, std::span<const double> grid) {
    if (samples.size() < 2) throw std::invalid_argument("empirical_ccdf: need >= 2 samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0.0)
        throw std::invalid_argument("empirical_ccdf: samples must be nonnegative");

    CcdfCurve curve;
    curve.sample_count = samples.size();
    const double n = static_cast<double>(samples.size());
    for (double x : grid) {
        const auto survivors =
            sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
        if (survivors == 0) continue;
        curve.x.push_back(x);
        curve.p.push_back(static_cast<double>(survivors) / n);
    }
    return curve;
}

CcdfCurve empirical_ccdf_log(std::span<const double> samples, std::size_t count) {
    double lo = 0.0, hi = 0.0;
    for (double v : samples) {
        if (v > 0.0 && (lo == 0.0 || v < lo)) lo = v;
        hi = std::max(hi, v);
    }
    if (!(lo > 0.0 && hi > lo))
        throw std::invalid_argument("empirical_ccdf_log: need a positive sample range");
    return empirical_ccdf(samples, log_spaced_grid(lo, hi * (1.0 - 1e-12), count));
}

TailEstimate loglog_slope(const CcdfCurve &curve, double x_lo, double x_hi) {
    std::vector<double> lx, lp;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        if (curve.x[i] >= x_lo && curve.x[i] <= x_hi) {
            lx.push_back(std::log(curve.x[i]));
            lp.push_back(std::log(curve.p[i]));
        }
    }
    if (lx.size() < 5)
        throw std::invalid_argument("loglog_slope: fewer than 5 curve points in window");

    const double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += lp[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * lp[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    TailEstimate est;
    est.method = TailMethod::LogLogRegression;
    est.index_hat = -slope;
    est.ci_low = est.index_hat;
    est.ci_high = est.index_hat;
    est.sample_count = curve.sample_count;
    return est;
}

TailEstimate loglog_slope(std::span<const double> samples, double x_lo, double x_hi,
                          std::size_t grid_count, std::uint64_t seed, std::size_t resamples) {
    const RegressionCtx ctx{x_lo, x_hi, grid_count};
    const auto grid = log_spaced_grid(x_lo, x_hi, grid_count);
    TailEstimate est = loglog_slope(empirical_ccdf(samples, grid), x_lo, x_hi);
    est.sample_count = samples.size();

    auto boot = bootstrap_estimates(
        samples, resamples, seed,
        [](std::span<const double> s, const void *c) {
            return regression_point_estimate(s, *static_cast<const RegressionCtx *>(c));
        },
        &ctx);
    auto [lo, hi] = percentile_ci(std::move(boot));
    est.ci_low = std::min(lo, est.index_hat);
    est.ci_high = std::max(hi, est.index_hat);
    return est;
}

TailEstimate hill_estimator(std::span<const double> samples, double order_fraction,
                            std::uint64_t seed, std::size_t resamples) {
    if (!(order_fraction > 0.0 && order_fraction < 1.0))
        throw std::invalid_argument("hill_estimator: order_fraction must be in (0,1)");
    TailEstimate est;
    est.method = TailMethod::Hill;
    est.order_fraction = order_fraction;
    est.sample_count = samples.size();
    est.index_hat = hill_point_estimate(samples, order_fraction);

    auto boot = bootstrap_estimates(
        samples, resamples, seed,
        [](std::span<const double> s, const void *c) {
            return hill_point_estimate(s, *static_cast<const double *>(c));
        },
        &order_fraction);
    auto [lo, hi] = percentile_ci(std::move(boot));
    est.ci_low = std::min(lo, est.index_hat);
    est.ci_high = std::max(hi, est.index_hat);
    return est;
}

TailVerificationReport verify_tail_index(std::span<const double> samples, double predicted,
                                         double tolerance, std::uint64_t seed,
                                         double order_fraction) {
    if (samples.size() < kHardSampleFloor)
        throw std::invalid_argument("verify_tail_index: fewer than 10^3 samples");

    TailVerificationReport report;
    report.predicted = predicted;
    report.tolerance = tolerance;
    report.sample_count = samples.size();
    report.curve = empirical_ccdf_log(samples, 50);

    // Pr(W = 0) is a point mass (idle server on arrival); the tail analysis
    // skips it, the CCDF curve keeps it.
    std::vector<double> positive;
    positive.reserve(samples.size());
    for (double v : samples)
        if (v > 0.0) positive.push_back(v);

    report.hill = hill_estimator(positive, order_fraction, seed);

    // Default regression window: top 1.5 decades of the observed range,
    // excluding the top 10 order statistics.
    std::vector<double> sorted(positive);
    std::sort(sorted.begin(), sorted.end());
    const double x_hi = sorted[sorted.size() - 11];
    const double x_lo = x_hi / std::pow(10.0, 1.5);
    report.regression = loglog_slope(positive, x_lo, x_hi, 40, rng::mix(seed));

    const bool hill_ok = predicted >= report.hill.index_hat - tolerance &&
                         predicted <= report.hill.index_hat + tolerance;
    const bool agree =
        std::fabs(report.hill.index_hat - report.regression.index_hat) <= 2.0 * tolerance;
    report.pass = hill_ok && agree;
    return report;
}

}  // namespace tailsim::tailest
