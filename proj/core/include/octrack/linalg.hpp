#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "octrack/polynomial.hpp"
#include "octrack/rng.hpp"

namespace octrack {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = std::vector<std::complex<double>>;

// Modulus below which a pole counts as strictly stable.
inline constexpr double kStabilityRadius = 1.0 - 1e-9;

// P = A P A^T + Q. Throws NotConverged when rho(A) >= 1 - 1e-9 or the residual
// check fails.
Matrix solve_discrete_lyapunov(const Matrix& A, const Matrix& Q);

// Stabilizing solution of the filtering Riccati equation with process noise
// sigma2 * G G^T, cross term sigma2 * G j and measurement noise sigma2 * j^2.
Matrix solve_dare(const Matrix& F, const Matrix& G, const Matrix& H, double j, double sigma2);

// One application of the Riccati map; P is a fixed point iff it solves the DARE.
Matrix riccati_map(const Matrix& P, const Matrix& F, const Matrix& G, const Matrix& H, double j, double sigma2);

// ||riccati_map(P) - P||_F / max(1, ||P||_F).
double dare_residual(const Matrix& P, const Matrix& F, const Matrix& G, const Matrix& H, double j, double sigma2);

ComplexVector eigenvalues(const Matrix& M);
double spectral_radius(const Matrix& M);
// Monic characteristic polynomial det(zI - M).
Polynomial characteristic_polynomial(const Matrix& M);

// Companion-matrix eigenvalues followed by a guarded Newton polish.
ComplexVector polynomial_roots(const Polynomial& p);

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign corrected).
Matrix random_orthogonal(int n, RngStream& rng);

}  // namespace octrack
