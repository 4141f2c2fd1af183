#include "tailsim/sched.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tailsim::sched {

namespace {
constexpr double kRowSumTol = 1e-9;
constexpr double kOneTol = 1e-12;
}  // namespace

SchedulingPolicy SchedulingPolicy::uniform(std::size_t r, std::size_t n, std::size_t k) {
    SchedulingPolicy p;
    p.mode = PolicyMode::UniformSubset;
    p.pi.assign(r, std::vector<double>(n, static_cast<double>(k) / static_cast<double>(n)));
    return p;
}

ValidationReport validate_policy(const SchedulingPolicy &policy, const WorkloadSpec &w) {
    if (policy.pi.size() != w.r())
        throw std::invalid_argument("validate_policy: row count does not match file count");
    for (const auto &row : policy.pi)
        if (row.size() != w.n)
            throw std::invalid_argument("validate_policy: column count does not match server count");
    if (w.k > w.n) throw std::invalid_argument("validate_policy: k > n");

    ValidationReport report;
    const double uniform_entry = static_cast<double>(w.k) / static_cast<double>(w.n);
    for (std::size_t i = 0; i < policy.pi.size(); ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < w.n; ++j) {
            const double p = policy.pi[i][j];
            if (p < 0.0 || p > 1.0)
                report.violations.push_back({i, j, "entry outside [0,1]"});
            else if (policy.mode == PolicyMode::UniformSubset &&
                     std::fabs(p - uniform_entry) > kRowSumTol)
                report.violations.push_back({i, j, "UniformSubset requires pi = k/n"});
            row_sum += p;
        }
        if (std::fabs(row_sum - static_cast<double>(w.k)) > kRowSumTol)
            report.violations.push_back({i, w.n, "row sum differs from k"});
    }
    return report;
}

std::vector<std::size_t> sample_subset(const SchedulingPolicy &policy, std::size_t file,
                                       rng::Stream &rand) {
    if (file >= policy.pi.size())
        throw std::out_of_range("sample_subset: file index out of range");
    const auto &row = policy.pi[file];
    const std::size_t n = row.size();

    std::vector<std::size_t> chosen;

    if (policy.mode == PolicyMode::UniformSubset) {
        double k_real = 0.0;
        for (double p : row) k_real += p;
        const std::size_t k = static_cast<std::size_t>(std::llround(k_real));
        // Partial Fisher-Yates over server indices.
        std::vector<std::size_t> idx(n);
        for (std::size_t j = 0; j < n; ++j) idx[j] = j;
        for (std::size_t t = 0; t < k; ++t) {
            std::uniform_int_distribution<std::size_t> pick(t, n - 1);
            std::swap(idx[t], idx[pick(rand.generator())]);
        }
        chosen.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }

    // Marginal-preserving mode. Entries at probability 1 are force-included,
    // then Madow systematic sampling covers the remainder: one uniform start
    // U, picks every unit whose cumulative interval contains U + t.
    std::vector<std::size_t> rest;
    std::vector<double> rest_p;
    for (std::size_t j = 0; j < n; ++j) {
        if (row[j] >= 1.0 - kOneTol) {
            chosen.push_back(j);
        } else if (row[j] > 0.0) {
            rest.push_back(j);
            rest_p.push_back(row[j]);
        }
    }
    double rest_sum = 0.0;
    for (double p : rest_p) rest_sum += p;
    const std::size_t k_rest = static_cast<std::size_t>(std::llround(rest_sum));
    if (k_rest > 0) {
        // Points u, u+1, ..., u+k_rest-1 on the cumulative scale; each unit's
        // interval [cum, cum + p) holds at most one point since p < 1.
        const double u = rand.uniform();
        double cum = 0.0;
        std::size_t picked = 0;
        for (std::size_t m = 0; m < rest.size() && picked < k_rest; ++m) {
            const double hi = cum + rest_p[m];
            if (u + static_cast<double>(picked) < hi) {
                chosen.push_back(rest[m]);
                ++picked;
            }
            cum = hi;
        }
        // Floating-point slack at the far end of the sweep.
        while (picked < k_rest) {
            chosen.push_back(rest.back());
            ++picked;
        }
    }
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    return chosen;
}

std::vector<double> node_arrival_rates(const SchedulingPolicy &policy, const WorkloadSpec &w) {
    std::vector<double> rates(w.n, 0.0);
    for (std::size_t i = 0; i < w.r(); ++i)
        for (std::size_t j = 0; j < w.n; ++j)
            rates[j] += w.file_classes[i].lambda * policy.pi[i][j];
    return rates;
}

namespace {
StabilityReport verdict_from_rho(std::vector<double> rho) {
    StabilityReport report;
    report.rho = std::move(rho);
    double max_rho = 0.0;
    for (double r : report.rho) max_rho = std::max(max_rho, r);
    if (max_rho >= 1.0)
        report.verdict = StabilityVerdict::Unstable;
    else if (max_rho >= 0.95)
        report.verdict = StabilityVerdict::Warn;
    else
        report.verdict = StabilityVerdict::Stable;
    return report;
}
}  // namespace

StabilityReport stability_check(const std::vector<double> &rates,
                                const std::vector<dist::ServerRate> &servers,
                                const dist::ParetoParams &pareto) {
    if (rates.size() != servers.size())
        throw std::invalid_argument("stability_check: rates/servers size mismatch");
    const double mean_size = dist::pareto_mean(pareto);
    std::vector<double> rho(rates.size());
    for (std::size_t j = 0; j < rates.size(); ++j)
        rho[j] = rates[j] * mean_size / servers[j].mu;
    return verdict_from_rho(std::move(rho));
}

StabilityReport stability_check(const SchedulingPolicy &policy, const WorkloadSpec &w,
                                const std::vector<dist::ServerRate> &servers) {
    if (servers.size() != w.n)
        throw std::invalid_argument("stability_check: servers size mismatch");
    std::vector<double> rho(w.n, 0.0);
    for (std::size_t i = 0; i < w.r(); ++i) {
        const double load_i =
            w.file_classes[i].lambda * dist::pareto_mean(w.file_classes[i].pareto);
        for (std::size_t j = 0; j < w.n; ++j) rho[j] += load_i * policy.pi[i][j] / servers[j].mu;
    }
    return verdict_from_rho(std::move(rho));
}

}  // namespace tailsim::sched
