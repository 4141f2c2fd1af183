#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tailsim/simcore.hpp"
#include "tailsim/tailest.hpp"

namespace tailsim::experiment {

enum class Scenario { SingleServer, FullSystem, Genie, All };

struct EstimatorSettings {
    double order_fraction = 0.05;
    std::vector<double> order_fractions = {0.01, 0.02, 0.05, 0.10};
    double tolerance = 0.25;
    std::optional<double> predicted_index;  // default: alpha - 1 of class 0
    std::size_t grid_count = 50;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::SingleServer;
    sched::WorkloadSpec workload;
    std::vector<dist::ServerRate> servers;
    sched::SchedulingPolicy policy;
    std::uint64_t horizon = 0;
    double warmup_fraction = 0.1;
    std::vector<std::uint64_t> seeds;
    simcore::ChunkSizeMode chunk_size_mode = simcore::ChunkSizeMode::PerRequest;
    std::uint64_t catalog_seed = 0;
    bool allow_unstable = false;
    bool emit_traces = true;
    EstimatorSettings estimator;
    std::string output_dir = "out";

    double predicted_index() const;
    simcore::SimConfig sim_config(std::uint64_t seed) const;
};

// Thrown on malformed or invalid configuration files; message carries the
// offending field path or parse location.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Strict-schema JSON loader: unknown keys are rejected, every referenced
// index is range checked, policy validation is delegated to sched.
ExperimentConfig load_config(const std::string &path);
ExperimentConfig parse_config(const std::string &json_text);

// Round trip support for the determinism contract.
std::string serialize_config(const ExperimentConfig &cfg);

struct SeedEstimate {
    std::uint64_t seed;
    double hill_index;
    std::size_t sample_count;
};

struct TheoremVerdict {
    std::string name;
    double predicted;
    double tolerance;
    tailest::TailVerificationReport report;
    std::vector<SeedEstimate> per_seed;
    bool extra_check = true;  // union bound / genie dominance, where applicable
    std::string extra_check_name;
    bool pass = false;
};

struct ReportBundle {
    Scenario scenario;
    std::vector<TheoremVerdict> verdicts;
    std::vector<double> stability_rho;
    bool all_pass = false;

    // Pooled post-warmup samples retained for plot emission.
    std::vector<double> waiting_samples;       // server 0, single-server analysis
    std::vector<double> service_samples;       // realized chunk service times
    std::vector<double> latency_samples;       // full-system file latencies
    std::vector<double> genie_latency_samples;
    std::vector<double> genie_waiting_samples;
    std::vector<std::vector<double>> per_server_chunk_latency;  // union bound

    ExperimentConfig config;
};

// Runs every seed (bounded worker pool), analyzes pooled samples, writes
// per-seed artifacts and report.json under cfg.output_dir.
ReportBundle run_experiment(const ExperimentConfig &cfg);

// One delimited-text file per curve (x, empirical_p[, analytic_p]) plus a
// manifest.json listing each file and its role.
std::vector<std::string> emit_plot_data(const ReportBundle &bundle, const std::string &out_dir);

}  // namespace tailsim::experiment
