#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace octrack {

// Real polynomial stored in ascending powers: coeffs()[k] multiplies z^k.
// Trailing (highest-power) exact zeros are trimmed on construction, so the
// last stored coefficient is the nonzero leading one. The zero polynomial
// has no coefficients and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> ascending);
    Polynomial(std::initializer_list<double> ascending);

    static Polynomial constant(double c);
    static Polynomial monomial(int power, double c = 1.0);
    // Monic polynomial with the given roots; complex roots must come in
    // conjugate pairs (the imaginary residue of the product is discarded).
    static Polynomial from_roots(std::span<const std::complex<double>> roots);

    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
    [[nodiscard]] double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    // Coefficient of z^k; zero beyond the degree.
    [[nodiscard]] double operator[](int k) const noexcept;

    [[nodiscard]] double operator()(double z) const noexcept;
    [[nodiscard]] std::complex<double> operator()(std::complex<double> z) const noexcept;

    [[nodiscard]] Polynomial monic() const;
    // q(z) = p(scale * z).
    [[nodiscard]] Polynomial scaled_argument(double scale) const;
    // Euclidean norm of the coefficient vector.
    [[nodiscard]] double norm() const noexcept;

    // Quotient and remainder of division by a nonzero divisor.
    [[nodiscard]] std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& p);
    friend Polynomial operator-(const Polynomial& p);
    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

private:
    void trim();

    std::vector<double> coeffs_;
};

// Schur-Cohn test: true iff every root of p has modulus < radius.
// Requires degree >= 0; a nonzero constant is trivially stable.
bool all_roots_within(const Polynomial& p, double radius);

}  // namespace octrack
