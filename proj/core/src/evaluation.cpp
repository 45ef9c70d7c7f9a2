#include "octrack/evaluation.hpp"

#include <cmath>
#include <limits>

#include "octrack/errors.hpp"
#include "octrack/parallel.hpp"

namespace octrack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class ControllerPolicy final : public OnlinePolicy {
public:
    ControllerPolicy(TrackerController ctrl, int n) : ctrl_(std::move(ctrl)), state_(make_tracker_state(ctrl_, n)) {
        x_ = tracker_output(ctrl_, state_);
    }

    const Vector& output() override { return x_; }

    void update(const Vector& g) override {
        tracker_step(ctrl_, state_, g, x_);
        x_ = tracker_output(ctrl_, state_);
    }

private:
    TrackerController ctrl_;
    TrackerState state_;
    Vector x_;
};

MinimizerTrajectory realize(const QuadraticScenario& s, int T, const RngStream& stream) {
    RngStream init = stream.split(1);
    const Matrix xi0 = default_initial_state(s.model, s.n, init);
    RngStream noise = stream.split(0);
    return simulate_minimizer(s.model, s.n, T, s.sigma, noise, xi0);
}

// Plays the policy against traj; calls sink(k, e_k) for every step.
template <typename Sink>
void play(const QuadraticScenario& s, const MinimizerTrajectory& traj, OnlinePolicy& policy, Sink&& sink) {
    const int T = traj.horizon();
    Vector e(s.n);
    Vector g(s.n);
    for (int k = 0; k < T; ++k) {
        const Vector& x = policy.output();
        if (x.size() != s.n) throw Error(Errc::DimensionMismatch, "policy output has the wrong dimension");
        e = x - traj.values.col(k);
        sink(k, e);
        g.noalias() = s.A * e;
        policy.update(g);
    }
}

}  // namespace

double analytic_cost(const TransferFunction& h, const TransferFunction& c, const std::vector<double>& eigs, double sigma2) {
    if (!c.is_strictly_proper()) throw Error(Errc::AlgebraicLoop, "analytic_cost(): controller is not strictly proper");
    double total = 0.0;
    for (double lambda : eigs) {
        if (!is_internally_stable(h, c, lambda)) return kInf;
        total += h2_norm_sq_exact(closed_loop_error_tf(h, c, lambda));
    }
    return sigma2 * total;
}

double robust_cost(const TransferFunction& h, const TransferFunction& c, const UncertaintyInterval& interval, int gridN) {
    if (!c.is_strictly_proper()) throw Error(Errc::AlgebraicLoop, "robust_cost(): controller is not strictly proper");
    if (gridN < 2) throw Error(Errc::InvalidArgument, "robust_cost(): gridN must be at least 2");
    double worst = 0.0;
    for (double lambda : chebyshev_grid(interval, gridN)) {
        if (!is_internally_stable(h, c, lambda)) return kInf;
        worst = std::max(worst, hinf_norm(closed_loop_error_tf(h, c, lambda)));
    }
    return worst;
}

CostReport cost_report(const TransferFunction& h, const TransferFunction& c, const std::vector<double>& eigs, double sigma2,
                       const UncertaintyInterval& interval, int gridN) {
    CostReport r;
    r.per_lambda_stable.reserve(eigs.size());
    for (double lambda : eigs) r.per_lambda_stable.push_back(is_internally_stable(h, c, lambda));
    r.analytic_J = analytic_cost(h, c, eigs, sigma2);
    r.robust_Jhat = robust_cost(h, c, interval, gridN);
    return r;
}

std::unique_ptr<OnlinePolicy> make_controller_policy(const TrackerController& ctrl, int n) {
    return std::make_unique<ControllerPolicy>(ctrl, n);
}

PolicyFactory controller_policy_factory(const TrackerController& ctrl) {
    return [ctrl](const MinimizerTrajectory& traj) { return make_controller_policy(ctrl, traj.n()); };
}

EmpiricalCost empirical_cost(const QuadraticScenario& scenario, const PolicyFactory& policy, int T, int burnin, int reps,
                             const RngStream& rng) {
    if (!(burnin >= 0 && burnin < T)) throw Error(Errc::InvalidArgument, "empirical_cost(): need 0 <= burnin < T");
    if (reps < 1) throw Error(Errc::InvalidArgument, "empirical_cost(): reps must be positive");
    if (scenario.A.rows() != scenario.n) throw Error(Errc::DimensionMismatch, "empirical_cost(): Hessian size mismatch");

    std::vector<double> per_rep(static_cast<std::size_t>(reps), 0.0);
    parallel_for(per_rep.size(), [&](std::size_t r) {
        const MinimizerTrajectory traj = realize(scenario, T, rng.split(r));
        auto p = policy(traj);
        double acc = 0.0;
        play(scenario, traj, *p, [&](int k, const Vector& e) {
            if (k >= burnin) acc += e.squaredNorm();
        });
        per_rep[r] = acc / (T - burnin);
    });

    double mean = 0.0;
    for (double v : per_rep) mean += v;
    mean /= reps;
    double var = 0.0;
    for (double v : per_rep) var += (v - mean) * (v - mean);
    var = reps > 1 ? var / (reps - 1) : 0.0;
    return {mean, std::sqrt(var / reps)};
}

EmpiricalCost empirical_cost(const QuadraticScenario& scenario, const TrackerController& ctrl, int T, int burnin, int reps,
                             const RngStream& rng) {
    return empirical_cost(scenario, controller_policy_factory(ctrl), T, burnin, reps, rng);
}

std::vector<ErrorTrace> error_trace(const QuadraticScenario& scenario, const std::vector<PolicyFactory>& policies, int T,
                                    const RngStream& rng) {
    if (T < 1) throw Error(Errc::InvalidArgument, "error_trace(): T must be positive");
    const MinimizerTrajectory traj = realize(scenario, T, rng);
    std::vector<ErrorTrace> out(policies.size());
    parallel_for(policies.size(), [&](std::size_t i) {
        auto p = policies[i](traj);
        out[i].values.resize(static_cast<std::size_t>(T));
        play(scenario, traj, *p, [&](int k, const Vector& e) { out[i].values[static_cast<std::size_t>(k)] = e.norm(); });
    });
    return out;
}

std::vector<ErrorTrace> error_trace(const QuadraticScenario& scenario, const std::vector<TrackerController>& ctrls, int T,
                                    const RngStream& rng) {
    std::vector<PolicyFactory> factories;
    factories.reserve(ctrls.size());
    for (const auto& c : ctrls) factories.push_back(controller_policy_factory(c));
    return error_trace(scenario, factories, T, rng);
}

ErrorTrace moving_average(const ErrorTrace& trace, int window) {
    if (window < 1) throw Error(Errc::InvalidArgument, "moving_average(): window must be positive");
    ErrorTrace out;
    out.window = window;
    out.values.resize(trace.values.size());
    double sum = 0.0;
    const auto w = static_cast<std::size_t>(window);
    for (std::size_t k = 0; k < trace.values.size(); ++k) {
        sum += trace.values[k];
        if (k >= w) sum -= trace.values[k - w];
        out.values[k] = sum / static_cast<double>(std::min(k + 1, w));
    }
    return out;
}

std::vector<MismatchPoint> mismatch_curve(const StateSpace& model, double sigma2, double lambda, const std::vector<double>& ratios) {
    const TransferFunction h = ss_to_tf(model);
    std::vector<MismatchPoint> out;
    out.reserve(ratios.size());
    for (double a : ratios) {
        if (!(a > 0.0)) throw Error(Errc::InvalidArgument, "mismatch_curve(): ratios must be positive");
        const TrackerController c = make_kalman_tracker(model, sigma2, lambda / a);
        out.push_back({a, analytic_cost(h, c.tf, {lambda}, sigma2)});
    }
    return out;
}

}  // namespace octrack
