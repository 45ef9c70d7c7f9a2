#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <octrack/octrack.hpp>

namespace testing {

using namespace octrack;

inline Polynomial stable_ds() { return Polynomial{-0.975, 1.0} * Polynomial{-0.975, 1.0}; }
inline Polynomial unstable_du() { return Polynomial{1.0, -2.0 * std::cos(std::numbers::pi / 12.0), 1.0}; }
inline Polynomial unstable_ds() { return Polynomial{-0.875, 1.0} * Polynomial{-0.875, 1.0}; }

inline StateSpace model_of(const Polynomial& d, double j) {
    auto [F, H] = observable_canonical(d.monic());
    return StateSpace{F, Matrix::Ones(d.degree(), 1), H, j};
}

inline StateSpace stable_model(double j = 0.2) { return model_of(stable_ds(), j); }
inline StateSpace unstable_model(double j = 1.0) { return model_of(unstable_du() * unstable_ds(), j); }

// H (zI - F)^{-1} G + j by a dense complex solve.
inline std::complex<double> resolvent(const StateSpace& ss, std::complex<double> z) {
    const int m = ss.order();
    if (m == 0) return ss.j;
    Eigen::MatrixXcd M = z * Eigen::MatrixXcd::Identity(m, m) - ss.F.cast<std::complex<double>>();
    Eigen::VectorXcd x = M.partialPivLu().solve(ss.G.cast<std::complex<double>>());
    return (ss.H.cast<std::complex<double>>() * x)(0, 0) + ss.j;
}

// Random stable transfer function: poles and zeros drawn inside radius 0.9.
inline TransferFunction random_stable_tf(RngStream& rng, int degree, bool proper_feedthrough = true) {
    ComplexVector poles;
    ComplexVector zeros;
    auto fill = [&](ComplexVector& v, int count) {
        while (static_cast<int>(v.size()) < count) {
            if (count - static_cast<int>(v.size()) >= 2 && rng.uniform() < 0.5) {
                const auto z = std::polar(0.9 * std::sqrt(rng.uniform()), rng.uniform(0.0, std::numbers::pi));
                v.push_back(z);
                v.push_back(std::conj(z));
            } else {
                v.emplace_back(rng.uniform(-0.9, 0.9), 0.0);
            }
        }
    };
    fill(poles, degree);
    fill(zeros, proper_feedthrough ? degree : degree - 1);
    const double gain = rng.uniform(0.2, 2.0);
    return TransferFunction(gain * Polynomial::from_roots(zeros), Polynomial::from_roots(poles));
}

}  // namespace testing
