#include "octrack/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "octrack/errors.hpp"

namespace octrack {

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> ascending) : coeffs_(ascending) { trim(); }

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

Polynomial Polynomial::constant(double c) { return Polynomial(std::vector<double>{c}); }

Polynomial Polynomial::monomial(int power, double c) {
    std::vector<double> v(static_cast<std::size_t>(power) + 1, 0.0);
    v.back() = c;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const std::complex<double>> roots) {
    std::vector<std::complex<double>> acc{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
        for (std::size_t k = 0; k < acc.size(); ++k) {
            next[k + 1] += acc[k];
            next[k] -= r * acc[k];
        }
        acc = std::move(next);
    }
    std::vector<double> real(acc.size());
    std::transform(acc.begin(), acc.end(), real.begin(), [](auto c) { return c.real(); });
    return Polynomial(std::move(real));
}

double Polynomial::operator[](int k) const noexcept {
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<std::size_t>(k)] : 0.0;
}

double Polynomial::operator()(double z) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const noexcept {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Polynomial Polynomial::monic() const {
    if (is_zero()) throw Error(Errc::InvalidArgument, "monic(): zero polynomial");
    const double lead = leading();
    std::vector<double> v(coeffs_);
    for (auto& c : v) c /= lead;
    v.back() = 1.0;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::scaled_argument(double scale) const {
    std::vector<double> v(coeffs_);
    double factor = 1.0;
    for (auto& c : v) {
        c *= factor;
        factor *= scale;
    }
    return Polynomial(std::move(v));
}

double Polynomial::norm() const noexcept {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return std::sqrt(s);
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw Error(Errc::InvalidArgument, "divmod(): division by zero polynomial");
    const int dn = divisor.degree();
    if (degree() < dn) return {Polynomial{}, *this};
    std::vector<double> rem(coeffs_);
    std::vector<double> quot(static_cast<std::size_t>(degree() - dn) + 1, 0.0);
    const double lead = divisor.leading();
    for (int k = degree(); k >= dn; --k) {
        const double q = rem[static_cast<std::size_t>(k)] / lead;
        quot[static_cast<std::size_t>(k - dn)] = q;
        for (int i = 0; i <= dn; ++i) rem[static_cast<std::size_t>(k - dn + i)] -= q * divisor.coeffs_[static_cast<std::size_t>(i)];
        rem[static_cast<std::size_t>(k)] = 0.0;
    }
    rem.resize(static_cast<std::size_t>(dn));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) v[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[k] += b.coeffs_[k];
    return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& p) {
    std::vector<double> v(p.coeffs_);
    for (auto& c : v) c = -c;
    return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[i + k] += a.coeffs_[i] * b.coeffs_[k];
    return Polynomial(std::move(v));
}

Polynomial operator*(double s, const Polynomial& p) {
    std::vector<double> v(p.coeffs_);
    for (auto& c : v) c *= s;
    return Polynomial(std::move(v));
}

bool all_roots_within(const Polynomial& p, double radius) {
    if (p.is_zero()) throw Error(Errc::InvalidArgument, "all_roots_within(): zero polynomial");
    std::vector<double> a = p.scaled_argument(radius).coeffs();
    // Schur transform: a(z) is Schur stable iff |a_0| < |a_n| and
    // (a_n a(z) - a_0 a*(z)) / z is Schur stable, with a* the reversal.
    while (a.size() > 1) {
        const std::size_t n = a.size() - 1;
        const double a0 = a.front();
        const double an = a.back();
        if (!(std::abs(a0) < std::abs(an))) return false;
        std::vector<double> next(n);
        for (std::size_t i = 1; i <= n; ++i) next[i - 1] = an * a[i] - a0 * a[n - i];
        // Rescale to keep the recursion away from under/overflow.
        const double scale = std::abs(next.back());
        for (auto& c : next) c /= scale;
        a = std::move(next);
    }
    return true;
}

}  // namespace octrack
