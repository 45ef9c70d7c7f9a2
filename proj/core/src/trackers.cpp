#include "octrack/trackers.hpp"

#include <cmath>
#include <numbers>

#include "octrack/errors.hpp"

namespace octrack {

std::string_view to_string(TrackerKind kind) noexcept {
    switch (kind) {
        case TrackerKind::GradientDescent: return "GradientDescent";
        case TrackerKind::Kalman: return "Kalman";
        case TrackerKind::HInf: return "HInf";
    }
    return "GradientDescent";
}

TrackerKind tracker_kind_from_string(std::string_view name) {
    if (name == "GradientDescent" || name == "gd") return TrackerKind::GradientDescent;
    if (name == "Kalman" || name == "kalman") return TrackerKind::Kalman;
    if (name == "HInf" || name == "hinf") return TrackerKind::HInf;
    throw Error(Errc::InvalidArgument, "unknown tracker kind '" + std::string(name) + "'");
}

UncertaintyInterval::UncertaintyInterval(double lo, double hi) : lambda_min(lo), lambda_max(hi) {
    if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi))
        throw Error(Errc::InvalidBounds, "UncertaintyInterval: need 0 < lambda_min <= lambda_max");
}

std::vector<double> chebyshev_grid(const UncertaintyInterval& interval, int N) {
    if (N < 1) throw Error(Errc::InvalidArgument, "chebyshev_grid(): N must be positive");
    const double la = interval.midpoint();
    const double lm = interval.half_range();
    if (lm == 0.0 || N == 1) return {la};
    std::vector<double> grid(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) grid[static_cast<std::size_t>(k)] = la - lm * std::cos(std::numbers::pi * k / (N - 1));
    grid.front() = interval.lambda_min;
    grid.back() = interval.lambda_max;
    return grid;
}

Matrix kalman_gain(const StateSpace& model, double sigma2) {
    model.validate();
    const Matrix P = solve_dare(model.F, model.G, model.H, model.j, sigma2);
    const double innovation = (model.H * P * model.H.transpose())(0, 0) + sigma2 * model.j * model.j;
    return (model.F * P * model.H.transpose() + sigma2 * model.j * model.G) / innovation;
}

double mu_star_from_eigs(const std::vector<double>& eigs) {
    if (eigs.empty()) throw Error(Errc::InvalidSpectrum, "mu_star_from_eigs(): empty spectrum");
    double s1 = 0.0;
    double s2 = 0.0;
    for (double l : eigs) {
        if (!(l > 0.0) || !std::isfinite(l)) throw Error(Errc::InvalidSpectrum, "mu_star_from_eigs(): eigenvalues must be positive");
        s1 += l;
        s2 += l * l;
    }
    return s2 / s1;
}

double mu_star_uniform(double lambda_min, double lambda_max) {
    if (!(lambda_min > 0.0) || !(lambda_min <= lambda_max) || !std::isfinite(lambda_max))
        throw Error(Errc::InvalidBounds, "mu_star_uniform(): need 0 < lambda_min <= lambda_max");
    const double lo = lambda_min;
    const double hi = lambda_max;
    return (2.0 / 3.0) * (hi * hi + hi * lo + lo * lo) / (hi + lo);
}

double mu_star_from_density(const std::vector<std::pair<double, double>>& samples) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (const auto& [l, w] : samples) {
        if (!(l > 0.0) || !(w >= 0.0) || !std::isfinite(l) || !std::isfinite(w))
            throw Error(Errc::InvalidDensity, "mu_star_from_density(): need lambda > 0 and weight >= 0");
        s1 += w * l;
        s2 += w * l * l;
    }
    if (!(s1 > 0.0)) throw Error(Errc::InvalidDensity, "mu_star_from_density(): total weight must be positive");
    return s2 / s1;
}

TrackerController make_kalman_tracker(const StateSpace& model, double sigma2, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(Errc::InvalidArgument, "make_kalman_tracker(): mu must be positive");
    TrackerController ctrl;
    ctrl.kind = TrackerKind::Kalman;
    ctrl.mu = mu;
    ctrl.gain = kalman_gain(model, sigma2);
    ctrl.realization = StateSpace{model.F, -ctrl.gain / mu, model.H, 0.0};
    ctrl.tf = ss_to_tf(ctrl.realization);
    return ctrl;
}

TrackerController make_gd_tracker(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(Errc::InvalidArgument, "make_gd_tracker(): alpha must be positive");
    TrackerController ctrl;
    ctrl.kind = TrackerKind::GradientDescent;
    ctrl.alpha = alpha;
    ctrl.realization = StateSpace{Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, -alpha), Matrix::Constant(1, 1, 1.0), 0.0};
    ctrl.tf = TransferFunction(Polynomial{-alpha}, Polynomial{-1.0, 1.0});
    return ctrl;
}

TrackerController controller_from_tf(TrackerKind kind, const TransferFunction& tf) {
    if (!tf.is_strictly_proper()) throw Error(Errc::AlgebraicLoop, "controller_from_tf(): controller must be strictly proper");
    TrackerController ctrl;
    ctrl.kind = kind;
    ctrl.tf = tf;
    ctrl.realization = observable_realization(tf);
    return ctrl;
}

TrackerState make_tracker_state(const TrackerController& ctrl, int n) {
    if (n < 1) throw Error(Errc::InvalidArgument, "make_tracker_state(): n must be positive");
    const int r = ctrl.order();
    return TrackerState{Matrix::Zero(r, n), Matrix::Zero(r, n)};
}

Vector tracker_output(const TrackerController& ctrl, const TrackerState& state) {
    if (ctrl.order() == 0) return Vector::Zero(state.xi.cols());
    return (ctrl.realization.H * state.xi).transpose();
}

void tracker_step(const TrackerController& ctrl, TrackerState& state, const Vector& g, Vector& x) {
    const StateSpace& ss = ctrl.realization;
    if (g.size() != state.xi.cols() || state.xi.rows() != ss.order())
        throw Error(Errc::DimensionMismatch, "tracker_step(): dimension mismatch");
    if (ss.order() == 0) {
        x.setZero(g.size());
        return;
    }
    x.resize(g.size());
    x.noalias() = (ss.H * state.xi).transpose();
    state.scratch.resize(state.xi.rows(), state.xi.cols());
    state.scratch.noalias() = ss.F * state.xi;
    state.scratch.noalias() += ss.G * g.transpose();
    state.xi.swap(state.scratch);
}

Vector tracker_step(const TrackerController& ctrl, TrackerState& state, const Vector& g) {
    Vector x;
    tracker_step(ctrl, state, g, x);
    return x;
}

}  // namespace octrack
