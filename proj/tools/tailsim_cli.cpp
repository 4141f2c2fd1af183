#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailsim/experiment.hpp"

namespace {

// Exit codes: 0 success, 1 verdict failure, 2 config error, 3 runtime fault.
constexpr int kExitOk = 0;
constexpr int kExitVerdictFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeFault = 3;

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Erasure-coded storage tail-latency simulator and analyzer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::string scenario_override;
    std::vector<std::uint64_t> seed_override;
    bool allow_unstable = false;

    auto *run = app.add_subcommand("run", "Run an experiment described by a config file");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_override, "Override the output directory");
    run->add_option("--scenario", scenario_override,
                    "Override the scenario (SingleServer|FullSystem|Genie|All)");
    run->add_option("--seed-override", seed_override, "Replace the config's seed list");
    run->add_flag("--allow-unstable", allow_unstable, "Permit unstable configurations");

    CLI11_PARSE(app, argc, argv);

    tailsim::experiment::ExperimentConfig cfg;
    try {
        cfg = tailsim::experiment::load_config(config_path);
        if (!out_override.empty()) cfg.output_dir = out_override;
        if (!seed_override.empty()) cfg.seeds = seed_override;
        if (allow_unstable) cfg.allow_unstable = true;
        if (!scenario_override.empty()) {
            using tailsim::experiment::Scenario;
            if (scenario_override == "SingleServer")
                cfg.scenario = Scenario::SingleServer;
            else if (scenario_override == "FullSystem")
                cfg.scenario = Scenario::FullSystem;
            else if (scenario_override == "Genie")
                cfg.scenario = Scenario::Genie;
            else if (scenario_override == "All")
                cfg.scenario = Scenario::All;
            else
                throw tailsim::experiment::ConfigError("unknown scenario '" + scenario_override +
                                                       "'");
        }
    } catch (const tailsim::experiment::ConfigError &e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfigError;
    }

    try {
        auto bundle = tailsim::experiment::run_experiment(cfg);
        auto files = tailsim::experiment::emit_plot_data(bundle, cfg.output_dir);

        for (const auto &v : bundle.verdicts) {
            std::printf("%-28s predicted=%.3f hill=%.3f [%.3f, %.3f] regression=%.3f  %s\n",
                        v.name.c_str(), v.predicted, v.report.hill.index_hat,
                        v.report.hill.ci_low, v.report.hill.ci_high,
                        v.report.regression.index_hat, v.pass ? "PASS" : "FAIL");
            if (!v.extra_check_name.empty())
                std::printf("%-28s %s\n", ("  " + v.extra_check_name).c_str(),
                            v.extra_check ? "PASS" : "FAIL");
        }
        std::printf("report: %s/report.json (%zu plot files)\n", cfg.output_dir.c_str(),
                    files.size());
        return bundle.all_pass ? kExitOk : kExitVerdictFailure;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "runtime fault: %s\n", e.what());
        return kExitRuntimeFault;
    }
}
