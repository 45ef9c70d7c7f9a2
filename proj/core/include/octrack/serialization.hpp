#pragma once

#include <nlohmann/json.hpp>

#include "octrack/lti.hpp"
#include "octrack/trackers.hpp"

namespace octrack {

// {"num": [...], "den": [...]}, ascending powers.
nlohmann::json tf_to_json(const TransferFunction& tf);
// Throws ConfigParse naming the offending field.
TransferFunction tf_from_json(const nlohmann::json& j);

// Transfer function plus "metadata": {kind, gamma, order, lambda_grid, alpha,
// mu, lambda_min, lambda_max}. Non-finite reals are written as null.
nlohmann::json controller_to_json(const TrackerController& ctrl);
// Rebuilds the realization from num/den; metadata is optional.
TrackerController controller_from_json(const nlohmann::json& j);

}  // namespace octrack
