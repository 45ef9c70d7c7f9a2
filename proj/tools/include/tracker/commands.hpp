#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tracker/config.hpp"

namespace tracker {

inline const std::vector<std::string> kSweepHeader = {
    "param", "sqrtJ_gd_analytic", "sqrtJ_gd_emp", "sqrtJ_hinf_analytic", "sqrtJ_hinf_emp", "sqrtJ_kalman_analytic", "sqrtJ_kalman_emp"};
inline const std::vector<std::string> kTraceHeader = {"k", "err_gd", "err_hinf", "err_kalman"};

const std::vector<std::string>& preset_names();
// Throws UnknownPreset.
ExperimentConfig preset_config(const std::string& name, const std::filesystem::path& out_dir, std::uint64_t seed);

// Runs a sweep or trace; returns the CSV and its .meta.json sidecar.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> run_preset(const std::string& name, const std::filesystem::path& out_dir, std::uint64_t seed);
std::vector<std::filesystem::path> run_config(const std::filesystem::path& config_path);

// Writes the controller JSON; prints the certificate and grid summary to out.
void synthesize_cmd(const std::filesystem::path& config_path, const std::filesystem::path& out_path, std::ostream& out);
// Prints the cost report; writes a per-eigenvalue CSV (default <controller>.eval.csv).
std::filesystem::path evaluate_cmd(const std::filesystem::path& controller_path, const std::filesystem::path& config_path,
                                   const std::optional<std::filesystem::path>& csv_path, std::ostream& out);

}  // namespace tracker
