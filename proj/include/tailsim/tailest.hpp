#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tailsim::tailest {

// Empirical complementary CDF on a threshold grid; x strictly increasing,
// p nonincreasing, grid points with zero survivors dropped.
struct CcdfCurve {
    std::vector<double> x;
    std::vector<double> p;
    std::size_t sample_count = 0;
};

enum class TailMethod { LogLogRegression, Hill };

struct TailEstimate {
    double index_hat = 0.0;
    TailMethod method = TailMethod::Hill;
    double order_fraction = 0.0;  // Hill only
    double ci_low = 0.0;          // 95% bootstrap percentile bounds
    double ci_high = 0.0;
    std::size_t sample_count = 0;
};

// count log-spaced thresholds over [lo, hi].
std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count);

CcdfCurve empirical_ccdf(std::span<const double> samples, std::span<const double> grid);

// Grid spanning the positive sample range with `count` log-spaced points.
CcdfCurve empirical_ccdf_log(std::span<const double> samples, std::size_t count);

// Least-squares slope of log p vs log x over [x_lo, x_hi]; index_hat is the
// negated slope. Requires at least 5 curve points inside the window. The CI
// degenerates to the point estimate (no resampling data available).
TailEstimate loglog_slope(const CcdfCurve &curve, double x_lo, double x_hi);

// Same, with a 200-resample bootstrap percentile CI over the raw samples.
TailEstimate loglog_slope(std::span<const double> samples, double x_lo, double x_hi,
                          std::size_t grid_count, std::uint64_t seed,
                          std::size_t resamples = 200);

// Hill estimator over the top ceil(order_fraction * N) order statistics,
// with a bootstrap percentile CI. Requires m >= 10 and positive order
// statistics; zero samples must be excluded by the caller (point mass).
TailEstimate hill_estimator(std::span<const double> samples, double order_fraction,
                            std::uint64_t seed, std::size_t resamples = 200);

struct TailVerificationReport {
    bool pass = false;
    double predicted = 0.0;
    double tolerance = 0.0;
    TailEstimate hill;
    TailEstimate regression;
    CcdfCurve curve;
    std::size_t sample_count = 0;
};

// Pass iff the Hill estimate is within tolerance of the predicted index and
// the two estimators agree within 2*tolerance. Zero samples are dropped from
// Hill input but kept in the CCDF curve. Hard floor 10^3 samples.
TailVerificationReport verify_tail_index(std::span<const double> samples, double predicted,
                                         double tolerance, std::uint64_t seed,
                                         double order_fraction = 0.05);

}  // namespace tailsim::tailest
