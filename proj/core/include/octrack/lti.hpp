#pragma once

#include <complex>
#include <vector>

#include "octrack/linalg.hpp"
#include "octrack/polynomial.hpp"

namespace octrack {

// Default root-matching tolerance for pole/zero cancellation.
inline constexpr double kCancelTol = 1e-9;

// Scalar rational transfer function num(z)/den(z), den monic, deg num <= deg den.
class TransferFunction {
public:
    // The zero transfer function 0/1.
    TransferFunction();
    // Normalizes den to monic. Throws InvalidArgument for a zero or improper
    // denominator.
    TransferFunction(Polynomial num, Polynomial den);

    static TransferFunction constant(double k);

    [[nodiscard]] const Polynomial& num() const noexcept { return num_; }
    [[nodiscard]] const Polynomial& den() const noexcept { return den_; }
    [[nodiscard]] int order() const noexcept { return den_.degree(); }
    [[nodiscard]] bool is_zero() const noexcept { return num_.is_zero(); }
    [[nodiscard]] bool is_strictly_proper() const noexcept { return num_.degree() < den_.degree(); }
    // Direct feedthrough num[m] with m = deg den.
    [[nodiscard]] double feedthrough() const noexcept { return num_[den_.degree()]; }

    [[nodiscard]] std::complex<double> operator()(std::complex<double> z) const noexcept;

    friend bool operator==(const TransferFunction&, const TransferFunction&) = default;

private:
    Polynomial num_;
    Polynomial den_;
};

struct StateSpace {
    Matrix F;
    Matrix G;  // m x 1
    Matrix H;  // 1 x m
    double j = 0.0;

    [[nodiscard]] int order() const noexcept { return static_cast<int>(F.rows()); }
    // Throws DimensionMismatch / InvalidArgument.
    void validate() const;
};

// Uniform grid theta_k = -pi + 2 pi k / N on the unit circle.
class FrequencyGrid {
public:
    // N must be a power of two and at least 64.
    explicit FrequencyGrid(int N);
    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] double angle(int k) const noexcept;

private:
    int n_;
};

struct ObservableForm {
    Matrix F;
    Matrix H;
};

// Observable companion form of a monic polynomial of degree >= 1: first column
// holds -a_{m-1}, ..., -a_0, ones on the superdiagonal, H = e_1.
ObservableForm observable_canonical(const Polynomial& char_poly);

// Realization (F, G, H, j) of tf in observable canonical form.
StateSpace observable_realization(const TransferFunction& tf);

// H (zI - F)^{-1} G + j, with common roots removed.
TransferFunction ss_to_tf(const StateSpace& ss);

// Removes root pairs of num and den that agree within tol * max(1, |r|).
TransferFunction cancel_common_roots(const Polynomial& num, const Polynomial& den, double tol = kCancelTol);

// w(z) = -h(z) / (1 - lambda c(z)). Throws AlgebraicLoop unless c is strictly proper.
TransferFunction closed_loop_error_tf(const TransferFunction& h, const TransferFunction& c, double lambda);

ComplexVector poles(const TransferFunction& tf);
// Largest pole modulus; 0 for a constant.
double max_pole_modulus(const TransferFunction& tf);
bool is_stable(const TransferFunction& tf);

// Squared H2 norm from the Gramian of a realization; +infinity when unstable.
double h2_norm_sq_exact(const TransferFunction& w);
// Riemann sum of |w|^2 over the grid; +infinity when unstable. Throws Unstable
// if a pole lies within 1e-6 of the unit circle.
double h2_norm_sq_freq(const TransferFunction& w, const FrequencyGrid& grid);
// Peak gain on the unit circle; +infinity when unstable.
double hinf_norm(const TransferFunction& w);

// Loop polynomial den_c - lambda num_c and the error system w_lambda are both
// Schur stable. Throws AlgebraicLoop unless c is strictly proper.
bool is_internally_stable(const TransferFunction& h, const TransferFunction& c, double lambda);

}  // namespace octrack
