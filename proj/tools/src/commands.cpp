#include "tracker/commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include <octrack/evaluation.hpp>
#include <octrack/errors.hpp>
#include <octrack/parallel.hpp>
#include <octrack/scenario.hpp>
#include <octrack/serialization.hpp>
#include <octrack/synthesis.hpp>
#include <octrack/trackers.hpp>
#include <octrack/version.hpp>

#include "tracker/csv.hpp"

namespace tracker {

namespace fs = std::filesystem;
using octrack::Errc;
using octrack::Error;

namespace {

constexpr std::uint64_t kMonteCarloStream = 2;
constexpr std::uint64_t kTraceStream = 3;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Built {
    std::optional<octrack::TrackerController> ctrl;
    std::string note;
};

struct PointSetup {
    octrack::QuadraticScenario scenario;
    octrack::TransferFunction h;
    octrack::UncertaintyInterval interval;
    Built gd, hinf, kalman;
};

ExperimentConfig at_param(const ExperimentConfig& cfg, std::optional<double> value) {
    ExperimentConfig c = cfg;
    if (value && cfg.run.sweep) {
        if (cfg.run.sweep->param == "j") c.scenario.model.j = *value;
        else c.scenario.lambda_max = *value;
    }
    return c;
}

template <typename Fn>
Built guarded(bool wanted, Fn&& make) {
    if (!wanted) return {};
    try {
        return {make(), {}};
    } catch (const Error& e) {
        return {std::nullopt, std::string(octrack::to_string(e.code())) + ": " + e.what()};
    }
}

PointSetup setup_point(const ExperimentConfig& c) {
    const ScenarioSpec& s = c.scenario;
    octrack::StateSpace model = build_model(s.model);
    PointSetup p{octrack::make_scenario(s.n, s.lambda_min, s.lambda_max, model, s.sigma, s.seed), octrack::ss_to_tf(model),
                 octrack::UncertaintyInterval(s.lambda_min, s.lambda_max), {}, {}, {}};
    const double sigma2 = s.sigma * s.sigma;
    p.gd = guarded(c.trackers.gd, [&] { return octrack::make_gd_tracker(c.trackers.gd_alpha.value_or(1.0 / s.lambda_max)); });
    p.kalman = guarded(c.trackers.kalman, [&] {
        double mu = 0.0;
        if (c.trackers.kalman_mu == "eigs") mu = octrack::mu_star_from_eigs(p.scenario.spectrum);
        else if (c.trackers.kalman_mu == "value") mu = c.trackers.kalman_mu_value;
        else mu = octrack::mu_star_uniform(s.lambda_min, s.lambda_max);
        return octrack::make_kalman_tracker(p.scenario.model, sigma2, mu);
    });
    p.hinf = guarded(c.trackers.hinf, [&] {
        octrack::SynthesisOptions opts;
        opts.grid_points = c.trackers.hinf_opts.grid;
        opts.starts = c.trackers.hinf_opts.starts;
        opts.max_evals = c.trackers.hinf_opts.max_evals;
        opts.seed = s.seed;
        return octrack::precompensated_synthesize(p.h, p.interval, c.trackers.hinf_opts.order, opts);
    });
    return p;
}

std::pair<std::string, std::string> sqrt_costs(const PointSetup& p, const Built& b, const RunSpec& run) {
    if (!b.ctrl) return {};
    const double sigma2 = p.scenario.sigma * p.scenario.sigma;
    const double J = octrack::analytic_cost(p.h, b.ctrl->tf, p.scenario.spectrum, sigma2);
    if (!std::isfinite(J)) return {};
    const octrack::RngStream rng(p.scenario.seed, kMonteCarloStream);
    const auto emp = octrack::empirical_cost(p.scenario, *b.ctrl, run.T, run.burnin, run.reps, rng);
    return {format_real(std::sqrt(J)), format_real(std::sqrt(emp.mean))};
}

fs::path meta_path(const fs::path& csv) {
    fs::path m = csv;
    m.replace_extension(".meta.json");
    return m;
}

void write_meta(const ExperimentConfig& cfg, const fs::path& csv, const nlohmann::json& notes) {
    nlohmann::json meta = {
        {"name", cfg.name},
        {"seed", cfg.scenario.seed},
        {"version", octrack::kVersion},
        {"csv", csv.filename().string()},
        {"config", config_to_json(cfg)},
        {"notes", notes},
    };
    write_text(meta_path(csv), meta.dump(2) + "\n");
}

std::vector<fs::path> run_sweep(const ExperimentConfig& cfg) {
    std::vector<std::optional<double>> values;
    if (cfg.run.sweep) {
        const SweepSpec& s = *cfg.run.sweep;
        for (int i = 0; i < s.points; ++i)
            values.push_back(s.points == 1 ? s.from : s.from + (s.to - s.from) * i / (s.points - 1));
    } else {
        values.push_back(std::nullopt);
    }

    std::vector<std::vector<std::string>> rows(values.size());
    std::vector<nlohmann::json> notes(values.size(), nlohmann::json::array());
    octrack::parallel_for(values.size(), [&](std::size_t i) {
        const ExperimentConfig c = at_param(cfg, values[i]);
        const PointSetup p = setup_point(c);
        const double param = values[i] ? *values[i] : c.scenario.lambda_max;
        const auto gd = sqrt_costs(p, p.gd, c.run);
        const auto hinf = sqrt_costs(p, p.hinf, c.run);
        const auto kalman = sqrt_costs(p, p.kalman, c.run);
        rows[i] = {format_real(param), gd.first, gd.second, hinf.first, hinf.second, kalman.first, kalman.second};
        for (const auto* b : {&p.gd, &p.hinf, &p.kalman})
            if (!b->note.empty()) notes[i].push_back({{"param", param}, {"message", b->note}});
        if (p.hinf.ctrl) notes[i].push_back({{"param", param}, {"hinf_gamma", p.hinf.ctrl->gamma}});
    });

    nlohmann::json all = nlohmann::json::array();
    for (auto& n : notes)
        for (auto& e : n) all.push_back(std::move(e));
    const fs::path csv = cfg.output;
    write_csv(csv, kSweepHeader, rows);
    write_meta(cfg, csv, all);
    return {csv, meta_path(csv)};
}

std::vector<fs::path> run_trace(const ExperimentConfig& cfg) {
    const PointSetup p = setup_point(cfg);
    std::vector<octrack::TrackerController> ctrls;
    std::vector<int> column;  // 1 gd, 2 hinf, 3 kalman
    nlohmann::json notes = nlohmann::json::array();
    int col = 1;
    for (const auto* b : {&p.gd, &p.hinf, &p.kalman}) {
        if (b->ctrl) {
            ctrls.push_back(*b->ctrl);
            column.push_back(col);
        }
        if (!b->note.empty()) notes.push_back({{"message", b->note}});
        ++col;
    }
    const octrack::RngStream rng(cfg.scenario.seed, kTraceStream);
    const auto traces = octrack::error_trace(p.scenario, ctrls, cfg.run.T, rng);

    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(cfg.run.T), std::vector<std::string>(4));
    for (int k = 0; k < cfg.run.T; ++k) rows[static_cast<std::size_t>(k)][0] = std::to_string(k);
    for (std::size_t t = 0; t < traces.size(); ++t) {
        const auto avg = octrack::moving_average(traces[t], cfg.run.window);
        for (int k = 0; k < cfg.run.T; ++k)
            rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(column[t])] = format_real(avg.values[static_cast<std::size_t>(k)]);
    }
    const fs::path csv = cfg.output;
    write_csv(csv, kTraceHeader, rows);
    write_meta(cfg, csv, notes);
    return {csv, meta_path(csv)};
}

ExperimentConfig base_stable(std::uint64_t seed) {
    ExperimentConfig c;
    c.scenario.n = 10;
    c.scenario.lambda_min = 1.0;
    c.scenario.lambda_max = 3.5;
    c.scenario.sigma = 1.0;
    c.scenario.model.d_s = (octrack::Polynomial{-0.975, 1.0} * octrack::Polynomial{-0.975, 1.0}).coeffs();
    c.scenario.model.d_u = {1.0};
    c.scenario.model.j = 0.2;
    c.scenario.seed = seed;
    c.run.mode = "sweep";
    c.run.T = 50000;
    c.run.burnin = 10000;
    c.run.reps = 4;
    return c;
}

ExperimentConfig base_unstable(std::uint64_t seed) {
    ExperimentConfig c = base_stable(seed);
    c.scenario.lambda_max = 3.3;
    c.scenario.model.d_s = (octrack::Polynomial{-0.875, 1.0} * octrack::Polynomial{-0.875, 1.0}).coeffs();
    c.scenario.model.d_u = {1.0, -2.0 * std::cos(std::numbers::pi / 12.0), 1.0};
    c.scenario.model.j = 1.0;
    c.trackers.gd = false;
    return c;
}

void print_real(std::ostream& out, const char* label, double v) { out << label << ": " << format_report_real(v) << '\n'; }

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"trace-stable", "sweep-j-stable", "sweep-lmax-stable", "sweep-j-unstable",
                                                   "sweep-lmax-unstable"};
    return names;
}

ExperimentConfig preset_config(const std::string& name, const fs::path& out_dir, std::uint64_t seed) {
    ExperimentConfig c;
    if (name == "trace-stable") {
        c = base_stable(seed);
        c.run.mode = "trace";
        c.run.T = 20000;
        c.run.burnin = 0;
        c.run.reps = 1;
        c.run.window = 1000;
        c.output = (out_dir / "trace.csv").string();
    } else if (name == "sweep-j-stable") {
        c = base_stable(seed);
        c.run.sweep = SweepSpec{"j", 0.2, 2.0, 10};
    } else if (name == "sweep-lmax-stable") {
        c = base_stable(seed);
        c.run.sweep = SweepSpec{"lambda_max", 2.6, 4.4, 10};
    } else if (name == "sweep-j-unstable") {
        c = base_unstable(seed);
        c.run.sweep = SweepSpec{"j", 1.85, 3.7, 10};
    } else if (name == "sweep-lmax-unstable") {
        c = base_unstable(seed);
        c.run.sweep = SweepSpec{"lambda_max", 1.5, 3.3, 10};
    } else {
        throw Error(Errc::UnknownPreset, "unknown preset '" + name + "'");
    }
    c.name = name;
    if (c.output.empty()) c.output = (out_dir / (name + ".csv")).string();
    return c;
}

std::vector<fs::path> run_experiment(const ExperimentConfig& cfg) {
    return cfg.run.mode == "trace" ? run_trace(cfg) : run_sweep(cfg);
}

std::vector<fs::path> run_preset(const std::string& name, const fs::path& out_dir, std::uint64_t seed) {
    return run_experiment(preset_config(name, out_dir, seed));
}

std::vector<fs::path> run_config(const fs::path& config_path) { return run_experiment(load_config(config_path)); }

void synthesize_cmd(const fs::path& config_path, const fs::path& out_path, std::ostream& out) {
    const ExperimentConfig cfg = load_config(config_path);
    const octrack::StateSpace model = build_model(cfg.scenario.model);
    const octrack::TransferFunction h = octrack::ss_to_tf(model);
    const octrack::UncertaintyInterval interval(cfg.scenario.lambda_min, cfg.scenario.lambda_max);
    octrack::SynthesisOptions opts;
    opts.grid_points = cfg.trackers.hinf_opts.grid;
    opts.starts = cfg.trackers.hinf_opts.starts;
    opts.max_evals = cfg.trackers.hinf_opts.max_evals;
    opts.seed = cfg.scenario.seed;
    const octrack::TrackerController ctrl = octrack::precompensated_synthesize(h, interval, cfg.trackers.hinf_opts.order, opts);
    write_text(out_path, octrack::controller_to_json(ctrl).dump(2) + "\n");

    print_real(out, "gamma", ctrl.gamma);
    out << "order: " << ctrl.tf.order() << '\n';
    int stable = 0;
    for (double l : ctrl.lambda_grid) stable += octrack::is_internally_stable(h, ctrl.tf, l) ? 1 : 0;
    out << "grid: " << ctrl.lambda_grid.size() << " points on [" << format_real(interval.lambda_min) << ", "
        << format_real(interval.lambda_max) << "], internally stable at " << stable << '\n';
    for (double l : ctrl.lambda_grid) {
        const bool ok = octrack::is_internally_stable(h, ctrl.tf, l);
        const double g = ok ? octrack::hinf_norm(octrack::closed_loop_error_tf(h, ctrl.tf, l)) : kInf;
        out << "  lambda=" << format_real(l) << " stable=" << (ok ? "yes" : "no") << " hinf=" << format_report_real(g) << '\n';
    }
    out << "wrote " << out_path.string() << '\n';
}

fs::path evaluate_cmd(const fs::path& controller_path, const fs::path& config_path, const std::optional<fs::path>& csv_path,
                      std::ostream& out) {
    nlohmann::json cj;
    {
        std::ifstream in(controller_path, std::ios::binary);
        if (!in) throw Error(Errc::Io, "cannot read controller file '" + controller_path.string() + "'");
        try {
            cj = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::ConfigParse, "controller file '" + controller_path.string() + "': " + e.what());
        }
    }
    const octrack::TrackerController ctrl = octrack::controller_from_json(cj);
    const ExperimentConfig cfg = load_config(config_path);
    const octrack::StateSpace model = build_model(cfg.scenario.model);
    const octrack::QuadraticScenario scen = octrack::make_scenario(cfg.scenario.n, cfg.scenario.lambda_min, cfg.scenario.lambda_max,
                                                                  model, cfg.scenario.sigma, cfg.scenario.seed);
    const octrack::TransferFunction h = octrack::ss_to_tf(model);
    const octrack::UncertaintyInterval interval(cfg.scenario.lambda_min, cfg.scenario.lambda_max);
    const double sigma2 = cfg.scenario.sigma * cfg.scenario.sigma;
    octrack::CostReport rep =
        octrack::cost_report(h, ctrl.tf, scen.spectrum, sigma2, interval, cfg.trackers.hinf_opts.grid);
    if (std::isfinite(rep.analytic_J)) {
        const auto emp = octrack::empirical_cost(scen, ctrl, cfg.run.T, cfg.run.burnin, cfg.run.reps,
                                                 octrack::RngStream(cfg.scenario.seed, kMonteCarloStream));
        rep.empirical_J = emp.mean;
        rep.empirical_stderr = emp.std_error;
    } else {
        rep.empirical_J = kInf;
        rep.empirical_stderr = kInf;
    }

    out << "kind: " << octrack::to_string(ctrl.kind) << '\n';
    print_real(out, "analytic_J", rep.analytic_J);
    print_real(out, "sqrt_analytic_J", std::sqrt(rep.analytic_J));
    print_real(out, "robust_Jhat", rep.robust_Jhat);
    print_real(out, "empirical_J", rep.empirical_J);
    print_real(out, "empirical_stderr", rep.empirical_stderr);
    int stable = 0;
    for (bool b : rep.per_lambda_stable) stable += b ? 1 : 0;
    out << "stable_eigenvalues: " << stable << "/" << rep.per_lambda_stable.size() << '\n';

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < scen.spectrum.size(); ++i) {
        const double l = scen.spectrum[i];
        const bool ok = rep.per_lambda_stable[i];
        const auto w = octrack::closed_loop_error_tf(h, ctrl.tf, l);
        rows.push_back({format_real(l), ok ? "1" : "0", format_real(ok ? octrack::h2_norm_sq_exact(w) : kInf),
                        format_real(ok ? octrack::hinf_norm(w) : kInf)});
    }
    fs::path csv = csv_path ? *csv_path : fs::path(controller_path.string() + ".eval.csv");
    write_csv(csv, {"lambda", "internally_stable", "h2_norm_sq", "hinf_norm"}, rows);
    out << "wrote " << csv.string() << '\n';
    return csv;
}

}  // namespace tracker
