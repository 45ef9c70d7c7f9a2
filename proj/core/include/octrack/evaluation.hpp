#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "octrack/lti.hpp"
#include "octrack/rng.hpp"
#include "octrack/scenario.hpp"
#include "octrack/trackers.hpp"

namespace octrack {

struct CostReport {
    double analytic_J = 0.0;   // +inf when some loop is unstable
    double robust_Jhat = 0.0;  // +inf when some grid loop is unstable
    double empirical_J = 0.0;
    double empirical_stderr = 0.0;
    std::vector<bool> per_lambda_stable;
};

struct ErrorTrace {
    std::vector<double> values;
    int window = 1;

    [[nodiscard]] int horizon() const noexcept { return static_cast<int>(values.size()); }
};

struct EmpiricalCost {
    double mean = 0.0;
    double std_error = 0.0;
};

struct MismatchPoint {
    double a = 0.0;
    double J = 0.0;
};

// sigma2 * sum_i ||w_{lambda_i}||_2^2, +inf if any loop is not internally stable.
double analytic_cost(const TransferFunction& h, const TransferFunction& c, const std::vector<double>& eigs, double sigma2);

// max over gridN Chebyshev lambdas of ||w_lambda||_inf, +inf if any grid loop
// is not internally stable.
double robust_cost(const TransferFunction& h, const TransferFunction& c, const UncertaintyInterval& interval, int gridN = 33);

CostReport cost_report(const TransferFunction& h, const TransferFunction& c, const std::vector<double>& eigs, double sigma2,
                       const UncertaintyInterval& interval, int gridN = 33);

// Online decision rule: output() is x_k, then update() receives g_k.
class OnlinePolicy {
public:
    virtual ~OnlinePolicy() = default;
    virtual const Vector& output() = 0;
    virtual void update(const Vector& g) = 0;
};

// Builds a fresh policy for one run. The trajectory that will be played is
// passed in so test stubs can peek at it; real trackers ignore it.
using PolicyFactory = std::function<std::unique_ptr<OnlinePolicy>(const MinimizerTrajectory&)>;

std::unique_ptr<OnlinePolicy> make_controller_policy(const TrackerController& ctrl, int n);
PolicyFactory controller_policy_factory(const TrackerController& ctrl);

// Time average of ||e_k||^2 over [burnin, T) per rep; rep r uses rng.split(r).
EmpiricalCost empirical_cost(const QuadraticScenario& scenario, const PolicyFactory& policy, int T, int burnin, int reps,
                             const RngStream& rng);
EmpiricalCost empirical_cost(const QuadraticScenario& scenario, const TrackerController& ctrl, int T, int burnin, int reps,
                             const RngStream& rng);

// All policies play against one shared trajectory; values are ||e_k||.
std::vector<ErrorTrace> error_trace(const QuadraticScenario& scenario, const std::vector<PolicyFactory>& policies, int T,
                                    const RngStream& rng);
std::vector<ErrorTrace> error_trace(const QuadraticScenario& scenario, const std::vector<TrackerController>& ctrls, int T,
                                    const RngStream& rng);

// Causal mean over max(0, k - window + 1)..k.
ErrorTrace moving_average(const ErrorTrace& trace, int window);

// J(a) of the Kalman-structured controller with mu = lambda / a against a
// single eigenvalue lambda.
std::vector<MismatchPoint> mismatch_curve(const StateSpace& model, double sigma2, double lambda, const std::vector<double>& ratios);

}  // namespace octrack
