#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qrm/experiments.hpp"
#include "qrm/io.hpp"

namespace qrm::cli {

/// Flag-level overrides collected by the command line; every field beats
/// the corresponding config-file key when set.
struct Overrides {
    std::optional<std::string> test;
    std::optional<std::vector<double>> noise;
    std::optional<std::uint64_t> seed;
    std::optional<int> seeds_per_gamma;
    std::optional<double> epsilon;
    std::optional<double> w_trace;
    std::optional<double> w_flux;
    std::optional<double> w_init;
    std::optional<int> iters;
    bool ablate_init_penalty = false;
    std::optional<std::filesystem::path> out_dir;
};

/// Fully resolved run configuration: a preset (named or custom) plus the
/// run parameters every command shares.
struct RunConfig {
    ExperimentPreset preset;
    std::vector<double> noise_levels; // single entry for one-shot commands
    std::uint64_t seed = 1;
    int seeds_per_gamma = 1;
    std::filesystem::path out_dir = "qrm-out";
};

/// Merge config file and flag overrides; unknown config keys are rejected.
RunConfig resolve_config(const io::ConfigFile& file, const Overrides& overrides);

/// Worker-thread cap for sweep fan-out: QRM_THREADS, else hardware count.
int worker_cap(int tasks);

// Commands. Each throws ConfigError / DataError / numeric errors; the
// binary maps them to exit codes 2 / 3 / 4.
void cmd_simulate(const RunConfig& config);
void cmd_reconstruct(const RunConfig& config, const std::filesystem::path& data_dir);
void cmd_run_test(const RunConfig& config);
void cmd_sweep(const RunConfig& config);
/// Verifies the manifest of a run directory and prints its summary.
void cmd_report(const std::filesystem::path& dir);

} // namespace qrm::cli
