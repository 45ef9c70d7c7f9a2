#include "octrack/serialization.hpp"

#include <cmath>
#include <string>

#include "octrack/errors.hpp"

namespace octrack {

namespace {

nlohmann::json real_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

Polynomial poly_field(const nlohmann::json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw Error(Errc::ConfigParse, std::string("missing field '") + name + "'");
    const auto& arr = j.at(name);
    if (!arr.is_array()) throw Error(Errc::ConfigParse, std::string("field '") + name + "' must be an array of numbers");
    std::vector<double> c;
    c.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw Error(Errc::ConfigParse, std::string("field '") + name + "[" + std::to_string(i) + "]' is not a number");
        c.push_back(arr[i].get<double>());
    }
    return Polynomial(std::move(c));
}

double meta_real(const nlohmann::json& meta, const char* name, double fallback) {
    if (!meta.contains(name) || meta.at(name).is_null()) return fallback;
    if (!meta.at(name).is_number()) throw Error(Errc::ConfigParse, std::string("metadata.") + name + " must be a number");
    return meta.at(name).get<double>();
}

}  // namespace

nlohmann::json tf_to_json(const TransferFunction& tf) {
    return {{"num", tf.num().coeffs()}, {"den", tf.den().coeffs()}};
}

TransferFunction tf_from_json(const nlohmann::json& j) {
    const Polynomial num = poly_field(j, "num");
    const Polynomial den = poly_field(j, "den");
    if (den.is_zero()) throw Error(Errc::ConfigParse, "field 'den' must have a nonzero coefficient");
    if (num.degree() > den.degree()) throw Error(Errc::ConfigParse, "transfer function is improper (deg num > deg den)");
    return TransferFunction(num, den);
}

nlohmann::json controller_to_json(const TrackerController& ctrl) {
    nlohmann::json j = tf_to_json(ctrl.tf);
    nlohmann::json grid = nlohmann::json::array();
    for (double l : ctrl.lambda_grid) grid.push_back(real_or_null(l));
    j["metadata"] = {
        {"kind", std::string(to_string(ctrl.kind))},
        {"gamma", real_or_null(ctrl.gamma)},
        {"order", ctrl.tf.order()},
        {"lambda_grid", grid},
        {"alpha", real_or_null(ctrl.alpha)},
        {"mu", real_or_null(ctrl.mu)},
        {"lambda_min", real_or_null(ctrl.interval.lambda_min)},
        {"lambda_max", real_or_null(ctrl.interval.lambda_max)},
    };
    return j;
}

TrackerController controller_from_json(const nlohmann::json& j) {
    const TransferFunction tf = tf_from_json(j);
    if (!tf.is_strictly_proper()) throw Error(Errc::ConfigParse, "controller must be strictly proper");
    TrackerKind kind = TrackerKind::HInf;
    nlohmann::json meta = j.contains("metadata") ? j.at("metadata") : nlohmann::json::object();
    if (!meta.is_object()) throw Error(Errc::ConfigParse, "field 'metadata' must be an object");
    if (meta.contains("kind")) {
        if (!meta.at("kind").is_string()) throw Error(Errc::ConfigParse, "metadata.kind must be a string");
        try {
            kind = tracker_kind_from_string(meta.at("kind").get<std::string>());
        } catch (const Error& e) {
            throw Error(Errc::ConfigParse, std::string("metadata.kind: ") + e.what());
        }
    }
    TrackerController ctrl = controller_from_tf(kind, tf);
    ctrl.gamma = meta_real(meta, "gamma", 0.0);
    ctrl.alpha = meta_real(meta, "alpha", 0.0);
    ctrl.mu = meta_real(meta, "mu", 0.0);
    if (meta.contains("lambda_grid") && meta.at("lambda_grid").is_array())
        for (const auto& v : meta.at("lambda_grid"))
            if (v.is_number()) ctrl.lambda_grid.push_back(v.get<double>());
    const double lo = meta_real(meta, "lambda_min", 0.0);
    const double hi = meta_real(meta, "lambda_max", 0.0);
    if (lo > 0.0 && lo <= hi) ctrl.interval = UncertaintyInterval(lo, hi);
    return ctrl;
}

}  // namespace octrack
