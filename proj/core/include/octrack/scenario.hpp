#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "octrack/linalg.hpp"
#include "octrack/lti.hpp"
#include "octrack/rng.hpp"

namespace octrack {

// f_k(x) = 1/2 (x - c_k)^T A (x - c_k) with A = V diag(spectrum) V^T and each
// component of c_k generated by `model` driven by N(0, sigma^2) noise.
struct QuadraticScenario {
    int n = 1;
    double lambda_min = 1.0;
    double lambda_max = 1.0;
    std::vector<double> spectrum;
    Matrix V;
    Matrix A;
    StateSpace model;
    double sigma = 1.0;
    std::uint64_t seed = 0;

    [[nodiscard]] TransferFunction signal_tf() const { return ss_to_tf(model); }
};

// Column k holds c_k.
struct MinimizerTrajectory {
    Matrix values;  // n x T
    Matrix xi0;     // m x n, column i is the initial state of component i

    [[nodiscard]] int n() const noexcept { return static_cast<int>(values.rows()); }
    [[nodiscard]] int horizon() const noexcept { return static_cast<int>(values.cols()); }
};

std::vector<double> draw_spectrum(int n, double lambda_min, double lambda_max, RngStream& rng);
Matrix assemble_hessian(const std::vector<double>& spectrum, const Matrix& V);
Matrix build_hessian(const std::vector<double>& spectrum, RngStream& rng);

// Spectrum from stream (seed, 0), basis from stream (seed, 1).
QuadraticScenario make_scenario(int n, double lambda_min, double lambda_max, StateSpace model, double sigma,
                                std::uint64_t seed);

// Zero for Schur-stable models; N(0, 1) entries otherwise.
Matrix default_initial_state(const StateSpace& model, int n, RngStream& rng);

// Step-by-step generator for c_k. Keeps a reference to model.
class MinimizerSimulator {
public:
    MinimizerSimulator(const StateSpace& model, int n, double sigma, RngStream rng, Matrix xi0);
    MinimizerSimulator(const StateSpace& model, int n, double sigma, RngStream rng);

    // Writes c_k into out (size n) and advances the states.
    void next(Eigen::Ref<Vector> out);
    [[nodiscard]] const Matrix& states() const noexcept { return xi_; }
    [[nodiscard]] const RngStream& stream() const noexcept { return rng_; }

private:
    const StateSpace* model_;
    int n_;
    double sigma_;
    RngStream rng_;
    Matrix xi_;
    Matrix scratch_;
    Vector noise_;
};

MinimizerTrajectory simulate_minimizer(const StateSpace& model, int n, int T, double sigma, RngStream& rng,
                                       const std::optional<Matrix>& xi0 = std::nullopt);

// A (x - c).
Vector gradient(const Matrix& A, const Vector& c, const Vector& x);

}  // namespace octrack
