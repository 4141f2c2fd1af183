#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tailsim/dist.hpp"
#include "tailsim/rng.hpp"

namespace tailsim::sched {

enum class PolicyMode { UniformSubset, MarginalPreserving };

// Access-probability matrix pi[file][server]; each row must sum to k.
struct SchedulingPolicy {
    std::vector<std::vector<double>> pi;
    PolicyMode mode = PolicyMode::UniformSubset;

    static SchedulingPolicy uniform(std::size_t r, std::size_t n, std::size_t k);
};

struct FileClass {
    double lambda;  // Poisson arrival rate, 1/s
    dist::ParetoParams pareto;
};

struct WorkloadSpec {
    std::vector<FileClass> file_classes;
    std::size_t n = 0;  // server count
    std::size_t k = 0;  // chunks needed per request

    std::size_t r() const { return file_classes.size(); }
};

struct PolicyViolation {
    std::size_t file;
    std::size_t server;   // n means "whole row" (row-sum violation)
    std::string message;
};

struct ValidationReport {
    std::vector<PolicyViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks dimensions, entry ranges and row sums (sum_j pi[i][j] == k within
// 1e-9). Dimension mismatch throws; constraint violations are reported.
ValidationReport validate_policy(const SchedulingPolicy &policy, const WorkloadSpec &w);

// Draws the k-subset of servers for one request of the given file.
// UniformSubset: every k-subset equally likely. MarginalPreserving:
// Madow systematic sampling, exact per-server inclusion probabilities
// pi[file][j]. Returned indices are sorted and distinct.
std::vector<std::size_t> sample_subset(const SchedulingPolicy &policy, std::size_t file,
                                       rng::Stream &rand);

// Lambda_j = sum_i lambda_i * pi[i][j].
std::vector<double> node_arrival_rates(const SchedulingPolicy &policy, const WorkloadSpec &w);

enum class StabilityVerdict { Stable, Warn, Unstable };

struct StabilityReport {
    std::vector<double> rho;  // per-server utilization Lambda_j * E[B_j]
    StabilityVerdict verdict = StabilityVerdict::Stable;
};

// rho_j = Lambda_j * E[L]/mu_j; Stable iff max rho_j < 1, Warn band
// [0.95, 1). Unstable configs are reported, never thrown.
StabilityReport stability_check(const std::vector<double> &rates,
                                const std::vector<dist::ServerRate> &servers,
                                const dist::ParetoParams &pareto);

// Multi-class generalization: rho_j = sum_i lambda_i pi[i][j] E[L_i] / mu_j.
StabilityReport stability_check(const SchedulingPolicy &policy, const WorkloadSpec &w,
                                const std::vector<dist::ServerRate> &servers);

}  // namespace tailsim::sched
