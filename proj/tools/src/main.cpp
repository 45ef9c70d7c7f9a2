#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <octrack/errors.hpp>
#include <octrack/version.hpp>

#include "tracker/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Online tracking of time-varying quadratic costs: presets, synthesis and evaluation", "tracker"};
    app.set_version_flag("--version", std::string(octrack::kVersion));
    app.require_subcommand(1);

    std::string preset_name;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    auto* preset = app.add_subcommand("preset", "Run one of the built-in experiments");
    preset->add_option("name", preset_name, "trace-stable, sweep-j-stable, sweep-lmax-stable, sweep-j-unstable, sweep-lmax-unstable")
        ->required();
    preset->add_option("--out", out_dir, "Output directory")->required();
    preset->add_option("--seed", seed, "Master seed")->required();

    std::string config;
    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    run->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);

    std::string synth_out;
    auto* synth = app.add_subcommand("synthesize", "Synthesize a robust controller for the config's model and interval");
    synth->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
    synth->add_option("--out", synth_out, "Controller JSON to write")->required();

    std::string controller;
    std::string csv;
    auto* eval = app.add_subcommand("evaluate", "Report analytic, robust and empirical costs of a controller");
    eval->add_option("--controller", controller, "Controller JSON")->required()->check(CLI::ExistingFile);
    eval->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
    eval->add_option("--csv", csv, "Per-eigenvalue table (default <controller>.eval.csv)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*preset) {
            for (const auto& f : tracker::run_preset(preset_name, out_dir, seed)) std::cout << "wrote " << f.string() << '\n';
        } else if (*run) {
            for (const auto& f : tracker::run_config(config)) std::cout << "wrote " << f.string() << '\n';
        } else if (*synth) {
            tracker::synthesize_cmd(config, synth_out, std::cout);
        } else if (*eval) {
            tracker::evaluate_cmd(controller, config, csv.empty() ? std::nullopt : std::optional<std::filesystem::path>(csv), std::cout);
        }
    } catch (const octrack::Error& e) {
        std::cerr << "tracker: " << octrack::to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "tracker: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
