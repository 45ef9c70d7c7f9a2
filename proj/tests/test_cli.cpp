#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <octrack/octrack.hpp>

#include "tracker/commands.hpp"
#include "tracker/config.hpp"
#include "tracker/csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using octrack::Errc;
using octrack::Error;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "tracker_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + TRACKER_BIN + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    return rc;
}

std::vector<double> stable_ds() { return (octrack::Polynomial{-0.975, 1.0} * octrack::Polynomial{-0.975, 1.0}).coeffs(); }
std::vector<double> unstable_ds() { return (octrack::Polynomial{-0.875, 1.0} * octrack::Polynomial{-0.875, 1.0}).coeffs(); }
std::vector<double> unstable_du() { return {1.0, -2.0 * std::cos(std::numbers::pi / 12.0), 1.0}; }

json stable_config(const fs::path& out) {
    return {{"name", "custom"},
            {"scenario",
             {{"n", 10}, {"lambda_min", 1.0}, {"lambda_max", 3.5}, {"sigma", 1.0},
              {"model", {{"d_s", stable_ds()}, {"j", 0.2}}}, {"seed", 7}}},
            {"run", {{"mode", "sweep"}, {"T", 2000}, {"burnin", 200}, {"reps", 2}, {"sweep", {{"param", "j"}, {"from", 0.2}, {"to", 2.0}, {"points", 2}}}}},
            {"output", out.string()}};
}

}  // namespace

TEST_CASE("config: missing seed names the field") {
    json c = stable_config("x.csv");
    c["scenario"].erase("seed");
    try {
        tracker::parse_config(c.dump());
        FAIL("expected ConfigParse");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConfigParse);
        CHECK(std::string(e.what()).find("scenario.seed") != std::string::npos);
    }
}

TEST_CASE("config: syntax errors report the line") {
    try {
        tracker::parse_config("{\n  \"name\": \"x\",\n  \"scenario\": {,\n}");
        FAIL("expected ConfigParse");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConfigParse);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("config: field validation") {
    auto fails_on = [](json c, const std::string& field) {
        try {
            tracker::parse_config(c.dump());
            return false;
        } catch (const Error& e) {
            return e.code() == Errc::ConfigParse && std::string(e.what()).find(field) != std::string::npos;
        }
    };
    json c = stable_config("x.csv");
    json bad = c;
    bad["scenario"]["colour"] = 1;
    CHECK(fails_on(bad, "scenario.colour"));
    bad = c;
    bad["scenario"]["n"] = 0;
    CHECK(fails_on(bad, "scenario.n"));
    bad = c;
    bad["scenario"]["lambda_min"] = 5.0;
    CHECK(fails_on(bad, "scenario.lambda_max"));
    bad = c;
    bad["run"]["sweep"]["points"] = 0;
    CHECK(fails_on(bad, "run.sweep.points"));
    bad = c;
    bad["run"]["sweep"]["param"] = "sigma";
    CHECK(fails_on(bad, "run.sweep.param"));
    bad = c;
    bad["trackers"] = {{"which", {"pid"}}};
    CHECK(fails_on(bad, "trackers.which"));
    bad = c;
    bad["scenario"]["model"]["d_s"] = json::array({0.5, 1.0, 0.0});
    CHECK(fails_on(bad, "scenario.model.d_s"));
    bad = c;
    bad["scenario"]["seed"] = -3;
    CHECK(fails_on(bad, "scenario.seed"));
}

TEST_CASE("config round trip") {
    const tracker::ExperimentConfig a = tracker::parse_config(stable_config("x.csv").dump());
    const tracker::ExperimentConfig b = tracker::parse_config(tracker::config_to_json(a).dump());
    CHECK(tracker::config_to_json(a) == tracker::config_to_json(b));
    CHECK(a.scenario.seed == 7);
    CHECK(a.run.sweep->points == 2);
}

TEST_CASE("csv formatting") {
    CHECK(tracker::format_real(0.1) == "0.10000000000000001");
    CHECK(tracker::format_real(std::numeric_limits<double>::infinity()).empty());
    CHECK(tracker::format_report_real(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("minimal GD-only config produces one CSV") {
    const fs::path dir = scratch("minimal");
    const json c = {{"name", "minimal"},
                    {"scenario", {{"n", 1}, {"lambda_min", 1.0}, {"lambda_max", 2.0}, {"sigma", 1.0},
                                  {"model", {{"d_s", json::array({-0.5, 1.0})}, {"j", 0.0}}}, {"seed", 1}}},
                    {"trackers", {{"which", {"gd"}}}},
                    {"run", {{"mode", "sweep"}, {"T", 100}, {"burnin", 10}, {"reps", 1}, {"sweep", {{"param", "j"}, {"from", 0.0}, {"to", 1.0}, {"points", 3}}}}},
                    {"output", (dir / "out.csv").string()}};
    spit(dir / "cfg.json", c.dump(2));
    CHECK(run_cli("run --config \"" + (dir / "cfg.json").string() + "\"", dir / "log.txt") == 0);
    const std::string csv = slurp(dir / "out.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "param,sqrtJ_gd_analytic,sqrtJ_gd_emp,sqrtJ_hinf_analytic,sqrtJ_hinf_emp,sqrtJ_kalman_analytic,sqrtJ_kalman_emp");
    int rows = 0;
    for (std::string l; std::getline(lines, l);) {
        ++rows;
        CHECK(l.find(",,,,") != std::string::npos);
    }
    CHECK(rows == 3);
    CHECK(csv.find('\r') == std::string::npos);
    int csvs = 0;
    for (const auto& e : fs::directory_iterator(dir)) csvs += e.path().extension() == ".csv" ? 1 : 0;
    CHECK(csvs == 1);
}

TEST_CASE("unknown preset") {
    CHECK_THROWS_AS(tracker::preset_config("nope", ".", 1), Error);
    try {
        tracker::run_preset("nope", scratch("nope"), 1);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownPreset);
    }
    const fs::path dir = scratch("nope_cli");
    CHECK(run_cli("preset nope --out \"" + dir.string() + "\" --seed 1", dir / "log.txt") != 0);
    CHECK(slurp(dir / "log.txt").find("UnknownPreset") != std::string::npos);
}

TEST_CASE("trace preset schema and repeatability") {
    const fs::path a = scratch("trace_a");
    const auto files = tracker::run_preset("trace-stable", a, 11);
    REQUIRE(files.size() == 2);
    CHECK(files[0] == a / "trace.csv");
    const std::string first = slurp(files[0]);
    CHECK(first.rfind("k,err_gd,err_hinf,err_kalman\n", 0) == 0);
    const json meta = json::parse(slurp(files[1]));
    CHECK(meta.at("seed") == 11);
    CHECK(meta.at("name") == "trace-stable");
    tracker::run_preset("trace-stable", a, 11);
    CHECK(slurp(a / "trace.csv") == first);
}

TEST_CASE("config with the sweep-lmax-stable parameters reproduces the preset") {
    const fs::path dir = scratch("lmax");
    const auto preset = tracker::run_preset("sweep-lmax-stable", dir / "preset", 5);
    const json c = {{"name", "sweep-lmax-stable"},
                    {"scenario", {{"n", 10}, {"lambda_min", 1.0}, {"lambda_max", 3.5}, {"sigma", 1.0},
                                  {"model", {{"d_s", stable_ds()}, {"d_u", json::array({1.0})}, {"j", 0.2}}}, {"seed", 5}}},
                    {"trackers", {{"which", {"gd", "kalman", "hinf"}}}},
                    {"run", {{"mode", "sweep"}, {"T", 50000}, {"burnin", 10000}, {"reps", 4},
                             {"sweep", {{"param", "lambda_max"}, {"from", 2.6}, {"to", 4.4}, {"points", 10}}}}},
                    {"output", (dir / "config" / "out.csv").string()}};
    spit(dir / "cfg.json", c.dump(2));
    const auto mine = tracker::run_config(dir / "cfg.json");
    CHECK(slurp(mine[0]) == slurp(preset[0]));
}

TEST_CASE("synthesize: stable interval writes an HInf controller") {
    const fs::path dir = scratch("synth");
    json c = stable_config(dir / "x.csv");
    c["scenario"]["lambda_min"] = 2.6;
    c["scenario"]["lambda_max"] = 4.4;
    spit(dir / "cfg.json", c.dump());
    CHECK(run_cli("synthesize --config \"" + (dir / "cfg.json").string() + "\" --out \"" + (dir / "c.json").string() + "\"",
                  dir / "log.txt") == 0);
    const json ctrl = json::parse(slurp(dir / "c.json"));
    CHECK(ctrl.at("metadata").at("kind") == "HInf");
    CHECK(ctrl.at("metadata").at("gamma").is_number());
    CHECK(slurp(dir / "log.txt").find("gamma: ") != std::string::npos);
    CHECK(slurp(dir / "log.txt").find("internally stable at 33") != std::string::npos);
}

TEST_CASE("synthesize: degenerate interval is no worse than the Kalman tracker") {
    const fs::path dir = scratch("synth_deg");
    json c = stable_config(dir / "x.csv");
    c["scenario"]["lambda_min"] = 3.0;
    c["scenario"]["lambda_max"] = 3.0;
    spit(dir / "cfg.json", c.dump());
    std::ostringstream log;
    tracker::synthesize_cmd(dir / "cfg.json", dir / "c.json", log);
    const double gamma = json::parse(slurp(dir / "c.json")).at("metadata").at("gamma").get<double>();
    const auto model = tracker::build_model(tracker::load_config(dir / "cfg.json").scenario.model);
    const auto h = octrack::ss_to_tf(model);
    const auto k = octrack::make_kalman_tracker(model, 1.0, 3.0);
    CHECK(gamma <= octrack::robust_cost(h, k.tf, octrack::UncertaintyInterval(3.0, 3.0)));
}

TEST_CASE("synthesize: unstable preset controller contains the unstable poles") {
    const fs::path dir = scratch("synth_unstable");
    json c = stable_config(dir / "x.csv");
    c["scenario"]["lambda_max"] = 3.3;
    c["scenario"]["model"] = {{"d_s", unstable_ds()}, {"d_u", unstable_du()}, {"j", 1.0}};
    spit(dir / "cfg.json", c.dump());
    std::ostringstream log;
    tracker::synthesize_cmd(dir / "cfg.json", dir / "c.json", log);
    const auto ctrl = octrack::controller_from_json(json::parse(slurp(dir / "c.json")));
    const auto [q, rem] = ctrl.tf.den().divmod(octrack::Polynomial(unstable_du()));
    CHECK(rem.norm() <= 1e-8);
}

TEST_CASE("evaluate: GD on the stable and unstable presets") {
    const fs::path dir = scratch("evaluate");
    spit(dir / "gd.json", octrack::controller_to_json(octrack::make_gd_tracker(1.0 / 3.5)).dump());
    spit(dir / "stable.json", stable_config(dir / "x.csv").dump());
    std::ostringstream out;
    const fs::path csv = tracker::evaluate_cmd(dir / "gd.json", dir / "stable.json", std::nullopt, out);
    CHECK(csv == fs::path((dir / "gd.json").string() + ".eval.csv"));
    CHECK(out.str().find("analytic_J: inf") == std::string::npos);
    CHECK(out.str().find("analytic_J: ") != std::string::npos);
    CHECK(slurp(csv).rfind("lambda,internally_stable,h2_norm_sq,hinf_norm\n", 0) == 0);

    json u = stable_config(dir / "x.csv");
    u["scenario"]["lambda_max"] = 3.3;
    u["scenario"]["model"] = {{"d_s", unstable_ds()}, {"d_u", unstable_du()}, {"j", 1.0}};
    spit(dir / "unstable.json", u.dump());
    CHECK(run_cli("evaluate --controller \"" + (dir / "gd.json").string() + "\" --config \"" + (dir / "unstable.json").string() + "\"",
                  dir / "log.txt") == 0);
    CHECK(slurp(dir / "log.txt").find("analytic_J: inf\n") != std::string::npos);
}

TEST_CASE("evaluate: malformed controller JSON fails with a diagnostic") {
    const fs::path dir = scratch("evaluate_bad");
    spit(dir / "bad.json", "{\"num\": [1,");
    spit(dir / "cfg.json", stable_config(dir / "x.csv").dump());
    CHECK(run_cli("evaluate --controller \"" + (dir / "bad.json").string() + "\" --config \"" + (dir / "cfg.json").string() + "\"",
                  dir / "log.txt") != 0);
    CHECK(slurp(dir / "log.txt").find("ConfigParse") != std::string::npos);
}
