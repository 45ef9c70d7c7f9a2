#include "tracker/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <octrack/errors.hpp>
#include <octrack/polynomial.hpp>

namespace tracker {

using nlohmann::json;
using octrack::Errc;
using octrack::Error;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw Error(Errc::ConfigParse, "config field '" + field + "': " + msg);
}

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

const json* find(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& object_at(const json& obj, const std::string& prefix, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) fail(join(prefix, key), "missing required field");
    if (!v->is_object()) fail(join(prefix, key), "must be an object");
    return *v;
}

double real_at(const json& obj, const std::string& prefix, const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(join(prefix, key), "missing required field");
    }
    if (!v->is_number()) fail(join(prefix, key), "must be a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(join(prefix, key), "must be finite");
    return d;
}

long long int_at(const json& obj, const std::string& prefix, const std::string& key, std::optional<long long> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(join(prefix, key), "missing required field");
    }
    if (!v->is_number_integer()) fail(join(prefix, key), "must be an integer");
    return v->get<long long>();
}

std::string string_at(const json& obj, const std::string& prefix, const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(join(prefix, key), "missing required field");
    }
    if (!v->is_string()) fail(join(prefix, key), "must be a string");
    return v->get<std::string>();
}

std::vector<double> reals_at(const json& obj, const std::string& prefix, const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(join(prefix, key), "missing required field");
    }
    if (!v->is_array() || v->empty()) fail(join(prefix, key), "must be a nonempty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number()) fail(join(prefix, key) + "[" + std::to_string(i) + "]", "must be a number");
        out.push_back((*v)[i].get<double>());
    }
    return out;
}

int positive_int(long long v, const std::string& field, long long min = 1) {
    if (v < min || v > std::numeric_limits<int>::max()) fail(field, "must be an integer >= " + std::to_string(min));
    return static_cast<int>(v);
}

void check_keys(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
    for (const auto& [k, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) fail(join(prefix, k), "unknown field");
    }
}

ModelSpec parse_model(const json& m) {
    check_keys(m, "scenario.model", {"d_s", "d_u", "j", "G"});
    ModelSpec s;
    s.d_s = reals_at(m, "scenario.model", "d_s");
    s.d_u = reals_at(m, "scenario.model", "d_u", std::vector<double>{1.0});
    s.j = real_at(m, "scenario.model", "j", 0.0);
    if (const json* g = find(m, "G")) {
        if (g->is_string()) {
            if (g->get<std::string>() != "ones") fail("scenario.model.G", "must be \"ones\" or an array of numbers");
        } else {
            s.G = reals_at(m, "scenario.model", "G");
        }
    }
    const octrack::Polynomial ds(s.d_s);
    const octrack::Polynomial du(s.d_u);
    if (ds.is_zero()) fail("scenario.model.d_s", "polynomial must be nonzero");
    if (du.is_zero()) fail("scenario.model.d_u", "polynomial must be nonzero");
    if (s.d_s.back() == 0.0) fail("scenario.model.d_s", "leading coefficient must be nonzero");
    if (s.d_u.back() == 0.0) fail("scenario.model.d_u", "leading coefficient must be nonzero");
    if ((du * ds).degree() < 1) fail("scenario.model", "d_u * d_s must have degree >= 1");
    if (s.G && static_cast<int>(s.G->size()) != (du * ds).degree())
        fail("scenario.model.G", "length must equal deg(d_u * d_s)");
    return s;
}

}  // namespace

octrack::StateSpace build_model(const ModelSpec& spec) {
    const octrack::Polynomial d = (octrack::Polynomial(spec.d_u) * octrack::Polynomial(spec.d_s)).monic();
    auto [F, H] = octrack::observable_canonical(d);
    const int m = d.degree();
    octrack::Matrix G = octrack::Matrix::Ones(m, 1);
    if (spec.G) {
        if (static_cast<int>(spec.G->size()) != m) throw Error(Errc::DimensionMismatch, "G length must equal the model order");
        for (int i = 0; i < m; ++i) G(i, 0) = (*spec.G)[static_cast<std::size_t>(i)];
    }
    return octrack::StateSpace{std::move(F), std::move(G), std::move(H), spec.j};
}

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(Errc::ConfigParse, "config line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    if (!root.is_object()) throw Error(Errc::ConfigParse, "config: top level must be a JSON object");
    check_keys(root, "", {"name", "scenario", "trackers", "run", "output"});

    ExperimentConfig cfg;
    cfg.name = string_at(root, "", "name", std::string("run"));

    const json& sc = object_at(root, "", "scenario");
    check_keys(sc, "scenario", {"n", "lambda_min", "lambda_max", "sigma", "model", "seed"});
    cfg.scenario.n = positive_int(int_at(sc, "scenario", "n"), "scenario.n");
    cfg.scenario.lambda_min = real_at(sc, "scenario", "lambda_min");
    cfg.scenario.lambda_max = real_at(sc, "scenario", "lambda_max");
    if (!(cfg.scenario.lambda_min > 0.0)) fail("scenario.lambda_min", "must be positive");
    if (!(cfg.scenario.lambda_min <= cfg.scenario.lambda_max)) fail("scenario.lambda_max", "must be >= lambda_min");
    cfg.scenario.sigma = real_at(sc, "scenario", "sigma", 1.0);
    if (!(cfg.scenario.sigma > 0.0)) fail("scenario.sigma", "must be positive");
    cfg.scenario.model = parse_model(object_at(sc, "scenario", "model"));
    const json* seed = find(sc, "seed");
    if (!seed) fail("scenario.seed", "missing required field");
    if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long long>() >= 0))
        fail("scenario.seed", "must be a nonnegative integer");
    cfg.scenario.seed = seed->get<std::uint64_t>();

    if (const json* tr = find(root, "trackers")) {
        if (!tr->is_object()) fail("trackers", "must be an object");
        check_keys(*tr, "trackers", {"which", "gd_alpha", "kalman_mu", "hinf"});
        if (const json* which = find(*tr, "which")) {
            if (!which->is_array() || which->empty()) fail("trackers.which", "must be a nonempty array of names");
            cfg.trackers.gd = cfg.trackers.kalman = cfg.trackers.hinf = false;
            for (std::size_t i = 0; i < which->size(); ++i) {
                const std::string field = "trackers.which[" + std::to_string(i) + "]";
                if (!(*which)[i].is_string()) fail(field, "must be a string");
                const auto name = (*which)[i].get<std::string>();
                if (name == "gd") cfg.trackers.gd = true;
                else if (name == "kalman") cfg.trackers.kalman = true;
                else if (name == "hinf") cfg.trackers.hinf = true;
                else fail(field, "unknown tracker '" + name + "' (expected gd, kalman or hinf)");
            }
        }
        if (const json* a = find(*tr, "gd_alpha")) {
            if (!a->is_null()) {
                cfg.trackers.gd_alpha = real_at(*tr, "trackers", "gd_alpha");
                if (!(*cfg.trackers.gd_alpha > 0.0)) fail("trackers.gd_alpha", "must be positive");
            }
        }
        if (const json* mu = find(*tr, "kalman_mu")) {
            if (mu->is_number()) {
                cfg.trackers.kalman_mu = "value";
                cfg.trackers.kalman_mu_value = real_at(*tr, "trackers", "kalman_mu");
                if (!(cfg.trackers.kalman_mu_value > 0.0)) fail("trackers.kalman_mu", "must be positive");
            } else if (mu->is_string() && (mu->get<std::string>() == "uniform" || mu->get<std::string>() == "eigs")) {
                cfg.trackers.kalman_mu = mu->get<std::string>();
            } else {
                fail("trackers.kalman_mu", "must be \"uniform\", \"eigs\" or a positive number");
            }
        }
        if (const json* h = find(*tr, "hinf")) {
            if (!h->is_object()) fail("trackers.hinf", "must be an object");
            check_keys(*h, "trackers.hinf", {"order", "grid", "starts", "max_evals"});
            cfg.trackers.hinf_opts.order = positive_int(int_at(*h, "trackers.hinf", "order", 0), "trackers.hinf.order", 0);
            cfg.trackers.hinf_opts.grid = positive_int(int_at(*h, "trackers.hinf", "grid", 33), "trackers.hinf.grid", 2);
            cfg.trackers.hinf_opts.starts = positive_int(int_at(*h, "trackers.hinf", "starts", 16), "trackers.hinf.starts");
            cfg.trackers.hinf_opts.max_evals = positive_int(int_at(*h, "trackers.hinf", "max_evals", 2000), "trackers.hinf.max_evals");
        }
    }

    const json& run = object_at(root, "", "run");
    check_keys(run, "run", {"mode", "T", "burnin", "reps", "window", "sweep"});
    cfg.run.mode = string_at(run, "run", "mode", std::string("sweep"));
    if (cfg.run.mode != "sweep" && cfg.run.mode != "trace") fail("run.mode", "must be \"sweep\" or \"trace\"");
    cfg.run.T = positive_int(int_at(run, "run", "T"), "run.T");
    cfg.run.burnin = positive_int(int_at(run, "run", "burnin", cfg.run.T / 20), "run.burnin", 0);
    if (cfg.run.burnin >= cfg.run.T) fail("run.burnin", "must be smaller than run.T");
    cfg.run.reps = positive_int(int_at(run, "run", "reps", 1), "run.reps");
    cfg.run.window = positive_int(int_at(run, "run", "window", 1000), "run.window");
    if (const json* sw = find(run, "sweep")) {
        if (!sw->is_object()) fail("run.sweep", "must be an object");
        check_keys(*sw, "run.sweep", {"param", "from", "to", "points"});
        SweepSpec s;
        s.param = string_at(*sw, "run.sweep", "param");
        if (s.param != "j" && s.param != "lambda_max") fail("run.sweep.param", "must be \"j\" or \"lambda_max\"");
        s.from = real_at(*sw, "run.sweep", "from");
        s.to = real_at(*sw, "run.sweep", "to");
        if (!(s.from <= s.to)) fail("run.sweep.to", "range must be nonempty (from <= to)");
        s.points = positive_int(int_at(*sw, "run.sweep", "points", 10), "run.sweep.points");
        if (s.param == "lambda_max" && !(s.from >= cfg.scenario.lambda_min))
            fail("run.sweep.from", "lambda_max values must be >= scenario.lambda_min");
        cfg.run.sweep = s;
    }

    cfg.output = string_at(root, "", "output", cfg.name + ".csv");
    if (cfg.output.empty()) fail("output", "must be a nonempty path");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json config_to_json(const ExperimentConfig& cfg) {
    json model = {{"d_s", cfg.scenario.model.d_s}, {"d_u", cfg.scenario.model.d_u}, {"j", cfg.scenario.model.j}};
    if (cfg.scenario.model.G) model["G"] = *cfg.scenario.model.G;
    else model["G"] = "ones";
    json which = json::array();
    if (cfg.trackers.gd) which.push_back("gd");
    if (cfg.trackers.kalman) which.push_back("kalman");
    if (cfg.trackers.hinf) which.push_back("hinf");
    json trackers = {
        {"which", which},
        {"hinf", {{"order", cfg.trackers.hinf_opts.order}, {"grid", cfg.trackers.hinf_opts.grid},
                  {"starts", cfg.trackers.hinf_opts.starts}, {"max_evals", cfg.trackers.hinf_opts.max_evals}}},
    };
    trackers["gd_alpha"] = cfg.trackers.gd_alpha ? json(*cfg.trackers.gd_alpha) : json(nullptr);
    trackers["kalman_mu"] = cfg.trackers.kalman_mu == "value" ? json(cfg.trackers.kalman_mu_value) : json(cfg.trackers.kalman_mu);
    json run = {{"mode", cfg.run.mode}, {"T", cfg.run.T}, {"burnin", cfg.run.burnin}, {"reps", cfg.run.reps}, {"window", cfg.run.window}};
    if (cfg.run.sweep)
        run["sweep"] = {{"param", cfg.run.sweep->param}, {"from", cfg.run.sweep->from}, {"to", cfg.run.sweep->to},
                        {"points", cfg.run.sweep->points}};
    return {
        {"name", cfg.name},
        {"scenario", {{"n", cfg.scenario.n}, {"lambda_min", cfg.scenario.lambda_min}, {"lambda_max", cfg.scenario.lambda_max},
                      {"sigma", cfg.scenario.sigma}, {"model", model}, {"seed", cfg.scenario.seed}}},
        {"trackers", trackers},
        {"run", run},
        {"output", cfg.output},
    };
}

}  // namespace tracker
