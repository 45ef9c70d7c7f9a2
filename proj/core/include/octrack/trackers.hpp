#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "octrack/linalg.hpp"
#include "octrack/lti.hpp"

namespace octrack {

enum class TrackerKind { GradientDescent, Kalman, HInf };

std::string_view to_string(TrackerKind kind) noexcept;
// Throws InvalidArgument for an unknown name.
TrackerKind tracker_kind_from_string(std::string_view name);

// lambda = midpoint + half_range * delta, delta in [-1, 1].
struct UncertaintyInterval {
    double lambda_min = 1.0;
    double lambda_max = 1.0;

    UncertaintyInterval() = default;
    // Throws InvalidBounds unless 0 < lambda_min <= lambda_max.
    UncertaintyInterval(double lo, double hi);

    [[nodiscard]] double midpoint() const noexcept { return 0.5 * (lambda_max + lambda_min); }
    [[nodiscard]] double half_range() const noexcept { return 0.5 * (lambda_max - lambda_min); }
    [[nodiscard]] double at(double delta) const noexcept { return midpoint() + half_range() * delta; }
};

// Chebyshev points lambda_a - lambda_m cos(pi k / (N - 1)), endpoints included.
// A degenerate interval yields the single midpoint.
std::vector<double> chebyshev_grid(const UncertaintyInterval& interval, int N);

// Scalar strictly proper controller applied as c(z) I_n.
struct TrackerController {
    TrackerKind kind = TrackerKind::GradientDescent;
    TransferFunction tf;
    StateSpace realization;  // (F^, G^, H^), j = 0

    double alpha = 0.0;   // GD step
    double mu = 0.0;      // Kalman curvature
    Matrix gain;          // Kalman gain K
    double gamma = 0.0;   // HInf grid certificate
    std::vector<double> lambda_grid;
    UncertaintyInterval interval;

    [[nodiscard]] int order() const noexcept { return realization.order(); }
};

// Controller states, column i belongs to component i.
struct TrackerState {
    Matrix xi;  // r x n
    Matrix scratch;
};

Matrix kalman_gain(const StateSpace& model, double sigma2);

double mu_star_from_eigs(const std::vector<double>& eigs);
double mu_star_uniform(double lambda_min, double lambda_max);
double mu_star_from_density(const std::vector<std::pair<double, double>>& samples);

// c(z) = -mu^{-1} H (zI - F)^{-1} K, realized as (F, -K / mu, H).
TrackerController make_kalman_tracker(const StateSpace& model, double sigma2, double mu);
// c(z) = -alpha / (z - 1).
TrackerController make_gd_tracker(double alpha);
// Observable canonical realization of a strictly proper tf.
TrackerController controller_from_tf(TrackerKind kind, const TransferFunction& tf);

TrackerState make_tracker_state(const TrackerController& ctrl, int n);
// x = H^ xi per component.
Vector tracker_output(const TrackerController& ctrl, const TrackerState& state);
// Returns the output for the current state, then applies xi <- F^ xi + G^ g.
Vector tracker_step(const TrackerController& ctrl, TrackerState& state, const Vector& g);
// Allocation-free form; x receives the output.
void tracker_step(const TrackerController& ctrl, TrackerState& state, const Vector& g, Vector& x);

}  // namespace octrack
