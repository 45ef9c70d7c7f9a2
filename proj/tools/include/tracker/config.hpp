#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <octrack/lti.hpp>

namespace tracker {

struct ModelSpec {
    std::vector<double> d_s{1.0};  // ascending powers
    std::vector<double> d_u{1.0};
    double j = 0.0;
    std::optional<std::vector<double>> G;  // default: all ones
};

struct ScenarioSpec {
    int n = 1;
    double lambda_min = 1.0;
    double lambda_max = 1.0;
    double sigma = 1.0;
    ModelSpec model;
    std::uint64_t seed = 0;
};

struct HinfSpec {
    int order = 0;  // 0: signal model order
    int grid = 33;
    int starts = 16;
    int max_evals = 2000;
};

struct TrackerSpec {
    bool gd = true;
    bool kalman = true;
    bool hinf = true;
    std::optional<double> gd_alpha;  // default 1 / lambda_max
    std::string kalman_mu = "uniform";  // "uniform", "eigs" or "value"
    double kalman_mu_value = 0.0;
    HinfSpec hinf_opts;
};

struct SweepSpec {
    std::string param;  // "j" or "lambda_max"
    double from = 0.0;
    double to = 0.0;
    int points = 10;
};

struct RunSpec {
    std::string mode = "sweep";  // "sweep" or "trace"
    int T = 1000;
    int burnin = 0;
    int reps = 1;
    int window = 1000;
    std::optional<SweepSpec> sweep;
};

struct ExperimentConfig {
    std::string name = "run";
    ScenarioSpec scenario;
    TrackerSpec trackers;
    RunSpec run;
    std::string output;  // CSV path
};

// Throws octrack::Error(ConfigParse) with line/column or field diagnostics.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Signal model (F, H) in observable canonical form of d_u * d_s.
octrack::StateSpace build_model(const ModelSpec& spec);

}  // namespace tracker
