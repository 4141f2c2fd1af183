#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tailsim/dist.hpp"
#include "tailsim/rng.hpp"
#include "tailsim/tailest.hpp"

using namespace tailsim;

namespace {

std::vector<double> pareto_draws(std::size_t n, double alpha, std::uint64_t seed,
                                 double x_m = 1.0) {
    dist::ParetoParams p(x_m, alpha);
    rng::Stream stream(seed);
    std::vector<double> v(n);
    for (auto &x : v) x = dist::sample_pareto(p, stream.uniform());
    return v;
}

std::vector<double> exponential_draws(std::size_t n, std::uint64_t seed) {
    rng::Stream stream(seed);
    std::vector<double> v(n);
    for (auto &x : v) x = stream.exponential(1.0);
    return v;
}

}  // namespace

TEST_CASE("empirical_ccdf counting") {
    std::vector<double> samples = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> grid = {0.5, 2.5, 5.0};
    auto curve = tailest::empirical_ccdf(samples, grid);
    REQUIRE(curve.x.size() == 2);  // x=5 has zero survivors, dropped
    CHECK(curve.p[0] == doctest::Approx(1.0));
    CHECK(curve.x[1] == doctest::Approx(2.5));
    CHECK(curve.p[1] == doctest::Approx(0.5));
}

TEST_CASE("empirical_ccdf constant samples") {
    std::vector<double> samples(10, 3.0);
    std::vector<double> grid = {1.0, 2.9, 3.0, 4.0};
    auto curve = tailest::empirical_ccdf(samples, grid);
    REQUIRE(curve.x.size() == 2);
    CHECK(curve.p[0] == 1.0);
    CHECK(curve.p[1] == 1.0);
    CHECK(curve.x[1] == 2.9);
}

TEST_CASE("empirical_ccdf against Pareto plug-in at x=10") {
    auto draws = pareto_draws(1'000'000, 3.0, 7);
    std::vector<double> grid = {10.0};
    auto curve = tailest::empirical_ccdf(draws, grid);
    REQUIRE(curve.x.size() == 1);
    const double p = 1e-3;  // (1/10)^3
    const double se = std::sqrt(p * (1.0 - p) / 1e6);
    CHECK(std::fabs(curve.p[0] - p) < 3.0 * se);
}

TEST_CASE("empirical_ccdf input validation") {
    std::vector<double> one = {1.0};
    std::vector<double> grid = {0.5};
    CHECK_THROWS(tailest::empirical_ccdf(one, grid));
    std::vector<double> negative = {-1.0, 2.0};
    CHECK_THROWS(tailest::empirical_ccdf(negative, grid));
}

TEST_CASE("ccdf invariants: x increasing, p nonincreasing in (0,1]") {
    auto draws = pareto_draws(100'000, 2.5, 3);
    auto curve = tailest::empirical_ccdf_log(draws, 40);
    for (std::size_t i = 1; i < curve.x.size(); ++i) {
        CHECK(curve.x[i] > curve.x[i - 1]);
        CHECK(curve.p[i] <= curve.p[i - 1]);
    }
    for (double p : curve.p) {
        CHECK(p > 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("monotone merge: union CCDF lies between the parts") {
    auto a = pareto_draws(50'000, 3.0, 11);
    auto b = pareto_draws(50'000, 3.0, 13, 2.0);
    std::vector<double> merged(a);
    merged.insert(merged.end(), b.begin(), b.end());
    auto grid = tailest::log_spaced_grid(1.0, 50.0, 30);
    auto ca = tailest::empirical_ccdf(a, grid);
    auto cb = tailest::empirical_ccdf(b, grid);
    auto cm = tailest::empirical_ccdf(merged, grid);
    for (std::size_t i = 0; i < cm.x.size(); ++i) {
        const double x = cm.x[i];
        auto value_at = [&](const tailest::CcdfCurve &c) -> double {
            for (std::size_t j = 0; j < c.x.size(); ++j)
                if (c.x[j] == x) return c.p[j];
            return 0.0;  // dropped => zero survivors
        };
        const double pa = value_at(ca), pb = value_at(cb);
        CHECK(cm.p[i] >= std::min(pa, pb) - 1e-12);
        CHECK(cm.p[i] <= std::max(pa, pb) + 1e-12);
    }
}

TEST_CASE("loglog_slope exact power laws") {
    tailest::CcdfCurve curve;
    for (double x = 1.0; x < 100.0; x *= 1.5) {
        curve.x.push_back(x);
        curve.p.push_back(std::pow(x, -2.0));
    }
    curve.sample_count = curve.x.size();
    auto est = tailest::loglog_slope(curve, 1.0, 100.0);
    CHECK(est.index_hat == doctest::Approx(2.0).epsilon(1e-12));

    // intercept invariance: p = c * x^-3
    tailest::CcdfCurve curve3;
    for (double x = 1.0; x < 100.0; x *= 1.5) {
        curve3.x.push_back(x);
        curve3.p.push_back(0.042 * std::pow(x, -3.0));
    }
    curve3.sample_count = curve3.x.size();
    CHECK(tailest::loglog_slope(curve3, 1.0, 100.0).index_hat ==
          doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("loglog_slope window with too few points") {
    tailest::CcdfCurve curve;
    for (double x : {1.0, 2.0, 4.0, 8.0}) {
        curve.x.push_back(x);
        curve.p.push_back(1.0 / x);
    }
    CHECK_THROWS(tailest::loglog_slope(curve, 1.0, 8.0));
}

TEST_CASE("loglog_slope on synthetic Pareto tail") {
    auto draws = pareto_draws(1'000'000, 3.0, 17);
    const double hi = *std::max_element(draws.begin(), draws.end());
    const double lo = hi / 100.0;  // top two decades
    auto est = tailest::loglog_slope(draws, lo, hi * 0.999, 40, 5);
    CHECK(std::fabs(est.index_hat - 3.0) < 0.2);
    CHECK(est.ci_low <= est.index_hat);
    CHECK(est.ci_high >= est.index_hat);
}

TEST_CASE("loglog_slope invariant to duplicated samples") {
    auto draws = pareto_draws(100'000, 3.0, 19);
    std::vector<double> doubled(draws);
    doubled.insert(doubled.end(), draws.begin(), draws.end());
    auto grid = tailest::log_spaced_grid(2.0, 30.0, 20);
    auto c1 = tailest::empirical_ccdf(draws, grid);
    auto c2 = tailest::empirical_ccdf(doubled, grid);
    auto e1 = tailest::loglog_slope(c1, 2.0, 30.0);
    auto e2 = tailest::loglog_slope(c2, 2.0, 30.0);
    CHECK(e1.index_hat == doctest::Approx(e2.index_hat).epsilon(1e-12));
}

TEST_CASE("hill_estimator constructed fixed point") {
    // X_(N-m) = 1 and top m order statistics with mean log ratio exactly 1/alpha.
    const double alpha = 2.5;
    const std::size_t m = 50;
    std::vector<double> samples;
    for (std::size_t i = 0; i < 400; ++i) samples.push_back(0.5);  // below threshold
    samples.push_back(1.0);  // the (N-m)-th order statistic
    for (std::size_t i = 1; i <= m; ++i)
        samples.push_back(std::exp(static_cast<double>(i) /
                                   (static_cast<double>(m) + 0.5) / alpha));
    // mean of i/(m+0.5) over i=1..m is (m+1)/(2m+1) * ... ; use symmetric pairs instead
    samples.clear();
    for (std::size_t i = 0; i < 400; ++i) samples.push_back(0.5);
    samples.push_back(1.0);
    for (std::size_t i = 1; i <= m / 2; ++i) {
        const double d = static_cast<double>(i) * 0.01;
        samples.push_back(std::exp((1.0 + d) / alpha));
        samples.push_back(std::exp((1.0 - d) / alpha));
    }
    const double frac = static_cast<double>(m) / static_cast<double>(samples.size());
    auto est = tailest::hill_estimator(samples, frac, 1, 10);
    CHECK(est.index_hat == doctest::Approx(alpha).epsilon(1e-9));
}

TEST_CASE("hill_estimator on exact Pareto") {
    auto draws = pareto_draws(1'000'000, 3.0, 23);
    auto est = tailest::hill_estimator(draws, 0.05, 9);
    CHECK(std::fabs(est.index_hat - 3.0) < 0.1);
    CHECK(est.ci_low <= est.index_hat);
    CHECK(est.index_hat <= est.ci_high);
}

TEST_CASE("hill_estimator scale invariance") {
    auto draws = pareto_draws(100'000, 2.5, 29);
    auto base = tailest::hill_estimator(draws, 0.05, 3, 10);
    for (auto &x : draws) x *= 1234.5;
    auto scaled = tailest::hill_estimator(draws, 0.05, 3, 10);
    CHECK(base.index_hat == doctest::Approx(scaled.index_hat).epsilon(1e-12));
}

TEST_CASE("hill_estimator rejects bad input") {
    auto draws = pareto_draws(100, 3.0, 31);
    CHECK_THROWS(tailest::hill_estimator(draws, 0.05, 1));  // m < 10
    std::vector<double> with_zero(2000, 0.0);
    for (std::size_t i = 0; i < 1000; ++i) with_zero[i] = 1.0 + static_cast<double>(i);
    CHECK_THROWS(tailest::hill_estimator(with_zero, 0.9, 1));  // zero order statistic in tail
}

TEST_CASE("hill on exponential data diverges with N (light-tail control)") {
    const double h4 = tailest::hill_estimator(exponential_draws(10'000, 5), 0.05, 1, 10).index_hat;
    const double h6 =
        tailest::hill_estimator(exponential_draws(1'000'000, 5), 0.05, 1, 10).index_hat;
    CHECK(h6 > h4);
}

TEST_CASE("estimator consistency: error shrinks with N (median over 20 seeds)") {
    std::vector<std::size_t> sizes = {10'000, 100'000, 1'000'000};
    std::vector<double> med_err;
    for (std::size_t n : sizes) {
        std::vector<double> errs;
        for (std::uint64_t s = 1; s <= 20; ++s) {
            auto draws = pareto_draws(n, 3.0, s * 101);
            errs.push_back(
                std::fabs(tailest::hill_estimator(draws, 0.05, s, 10).index_hat - 3.0));
        }
        med_err.push_back(oracles::median(errs));
    }
    CHECK(med_err[1] < med_err[0]);
    CHECK(med_err[2] < med_err[1]);
}

TEST_CASE("verify_tail_index") {
    auto draws = pareto_draws(1'000'000, 3.0, 37);
    auto good = tailest::verify_tail_index(draws, 3.0, 0.2, 1);
    CHECK(good.pass);
    CHECK(good.hill.index_hat > 0.0);
    CHECK_FALSE(good.curve.x.empty());

    auto bad = tailest::verify_tail_index(draws, 2.0, 0.2, 1);
    CHECK_FALSE(bad.pass);

    std::vector<double> tiny(100, 1.0);
    CHECK_THROWS(tailest::verify_tail_index(tiny, 3.0, 0.2, 1));
}
