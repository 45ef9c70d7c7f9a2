#include "octrack/lti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "octrack/errors.hpp"

namespace octrack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kHinfGrid = 4096;
constexpr double kFreqGuard = 1e-6;

double pole_radius(const Polynomial& den) {
    if (den.degree() < 1) return 0.0;
    double r = 0.0;
    for (const auto& p : polynomial_roots(den)) r = std::max(r, std::abs(p));
    return r;
}

// Monic product of (z - r) over the roots shared by a and b.
Polynomial shared_factor(const ComplexVector& ra, const ComplexVector& rb, double tol) {
    std::vector<bool> used(rb.size(), false);
    ComplexVector common;
    for (const auto& r : ra) {
        const double radius = tol * std::max(1.0, std::abs(r));
        std::size_t best = rb.size();
        double best_dist = radius;
        for (std::size_t k = 0; k < rb.size(); ++k) {
            if (used[k]) continue;
            const double d = std::abs(rb[k] - r);
            if (d <= best_dist) {
                best = k;
                best_dist = d;
            }
        }
        if (best < rb.size()) {
            used[best] = true;
            common.push_back(r);
        }
    }
    // Keep the factor real: drop complex roots whose conjugate was not matched.
    ComplexVector closed;
    for (const auto& r : common) {
        if (r.imag() == 0.0) {
            closed.push_back(r);
            continue;
        }
        const auto partner = std::find_if(common.begin(), common.end(), [&](const auto& s) {
            return s.imag() == -r.imag() && s.real() == r.real();
        });
        if (partner != common.end()) closed.push_back(r);
    }
    return Polynomial::from_roots(closed);
}

ComplexVector roots_or_empty(const Polynomial& p) {
    return p.degree() >= 1 ? polynomial_roots(p) : ComplexVector{};
}

double golden_max(const TransferFunction& w, double lo, double hi) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double t) { return std::abs(w(std::polar(1.0, t))); };
    double a = lo;
    double b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return std::max({fc, fd, f(0.5 * (a + b))});
}

}  // namespace

TransferFunction::TransferFunction() : num_(), den_(Polynomial::constant(1.0)) {}

TransferFunction::TransferFunction(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw Error(Errc::InvalidArgument, "TransferFunction: zero denominator");
    if (num.degree() > den.degree()) throw Error(Errc::InvalidArgument, "TransferFunction: improper (deg num > deg den)");
    const double lead = den.leading();
    num_ = (1.0 / lead) * num;
    den_ = den.monic();
}

TransferFunction TransferFunction::constant(double k) {
    return TransferFunction(Polynomial::constant(k), Polynomial::constant(1.0));
}

std::complex<double> TransferFunction::operator()(std::complex<double> z) const noexcept {
    return num_(z) / den_(z);
}

void StateSpace::validate() const {
    const auto m = F.rows();
    if (F.cols() != m || G.rows() != m || G.cols() != 1 || H.rows() != 1 || H.cols() != m)
        throw Error(Errc::DimensionMismatch, "StateSpace: inconsistent dimensions");
    if (!F.allFinite() || !G.allFinite() || !H.allFinite() || !std::isfinite(j))
        throw Error(Errc::InvalidArgument, "StateSpace: non-finite entries");
}

FrequencyGrid::FrequencyGrid(int N) : n_(N) {
    if (N < 64 || (N & (N - 1)) != 0)
        throw Error(Errc::InvalidArgument, "FrequencyGrid: N must be a power of two >= 64");
}

double FrequencyGrid::angle(int k) const noexcept {
    return -std::numbers::pi + 2.0 * std::numbers::pi * k / n_;
}

ObservableForm observable_canonical(const Polynomial& char_poly) {
    const int m = char_poly.degree();
    if (m < 1) throw Error(Errc::InvalidArgument, "observable_canonical(): degree must be at least 1");
    if (char_poly.leading() != 1.0) throw Error(Errc::InvalidArgument, "observable_canonical(): polynomial must be monic");
    ObservableForm out{Matrix::Zero(m, m), Matrix::Zero(1, m)};
    for (int r = 0; r < m; ++r) out.F(r, 0) = -char_poly[m - 1 - r];
    for (int r = 0; r + 1 < m; ++r) out.F(r, r + 1) = 1.0;
    out.H(0, 0) = 1.0;
    return out;
}

StateSpace observable_realization(const TransferFunction& tf) {
    const int m = tf.order();
    const double jw = tf.feedthrough();
    if (m == 0) return StateSpace{Matrix(0, 0), Matrix(0, 1), Matrix(1, 0), jw};
    auto [F, H] = observable_canonical(tf.den());
    const Polynomial rest = tf.num() - jw * tf.den();
    Matrix G(m, 1);
    for (int i = 1; i <= m; ++i) G(i - 1, 0) = rest[m - i];
    return StateSpace{std::move(F), std::move(G), std::move(H), jw};
}

TransferFunction ss_to_tf(const StateSpace& ss) {
    ss.validate();
    const int m = ss.order();
    if (m == 0) return TransferFunction::constant(ss.j);
    const Polynomial a = characteristic_polynomial(ss.F);
    // Markov parameters M_l = H F^{l-1} G give the numerator of the strictly
    // proper part: coefficient of z^{m-i} is sum_{l=1..i} a_{m-i+l} M_l.
    std::vector<double> markov(static_cast<std::size_t>(m) + 1, 0.0);
    Matrix v = ss.G;
    for (int l = 1; l <= m; ++l) {
        markov[static_cast<std::size_t>(l)] = (ss.H * v)(0, 0);
        v = ss.F * v;
    }
    std::vector<double> num(static_cast<std::size_t>(m), 0.0);
    for (int i = 1; i <= m; ++i) {
        double s = 0.0;
        for (int l = 1; l <= i; ++l) s += a[m - i + l] * markov[static_cast<std::size_t>(l)];
        num[static_cast<std::size_t>(m - i)] = s;
    }
    const Polynomial full = Polynomial(std::move(num)) + ss.j * a;
    return cancel_common_roots(full, a);
}

TransferFunction cancel_common_roots(const Polynomial& num, const Polynomial& den, double tol) {
    if (den.is_zero()) throw Error(Errc::InvalidArgument, "cancel_common_roots(): zero denominator");
    if (num.is_zero()) return TransferFunction();
    if (num.degree() < 1 || den.degree() < 1) return TransferFunction(num, den);
    const Polynomial common = shared_factor(polynomial_roots(den), polynomial_roots(num), tol);
    if (common.degree() < 1) return TransferFunction(num, den);
    return TransferFunction(num.divmod(common).first, den.divmod(common).first);
}

TransferFunction closed_loop_error_tf(const TransferFunction& h, const TransferFunction& c, double lambda) {
    if (!c.is_strictly_proper()) throw Error(Errc::AlgebraicLoop, "closed_loop_error_tf(): controller is not strictly proper");
    if (lambda == 0.0 || c.is_zero() || h.is_zero()) return TransferFunction(-h.num(), h.den());
    // den_c and den_h often share factors exactly (model-based controllers);
    // match their roots separately so repeated roots are compared like for like.
    const Polynomial common = shared_factor(roots_or_empty(h.den()), roots_or_empty(c.den()), kCancelTol);
    const Polynomial dh = common.degree() >= 1 ? h.den().divmod(common).first : h.den();
    const Polynomial dc = common.degree() >= 1 ? c.den().divmod(common).first : c.den();
    const Polynomial loop = c.den() - lambda * c.num();
    return cancel_common_roots(-(h.num() * dc), dh * loop);
}

ComplexVector poles(const TransferFunction& tf) { return roots_or_empty(tf.den()); }

double max_pole_modulus(const TransferFunction& tf) { return pole_radius(tf.den()); }

bool is_stable(const TransferFunction& tf) { return max_pole_modulus(tf) < kStabilityRadius; }

double h2_norm_sq_exact(const TransferFunction& w) {
    if (!is_stable(w)) return kInf;
    const StateSpace ss = observable_realization(w);
    if (ss.order() == 0) return ss.j * ss.j;
    const Matrix sigma = solve_discrete_lyapunov(ss.F, ss.G * ss.G.transpose());
    return ss.j * ss.j + (ss.H * sigma * ss.H.transpose())(0, 0);
}

double h2_norm_sq_freq(const TransferFunction& w, const FrequencyGrid& grid) {
    for (const auto& p : poles(w))
        if (std::abs(std::abs(p) - 1.0) < kFreqGuard)
            throw Error(Errc::Unstable, "h2_norm_sq_freq(): pole too close to the unit circle");
    if (!is_stable(w)) return kInf;
    double s = 0.0;
    for (int k = 0; k < grid.size(); ++k) s += std::norm(w(std::polar(1.0, grid.angle(k))));
    return s / grid.size();
}

double hinf_norm(const TransferFunction& w) {
    if (!is_stable(w)) return kInf;
    if (w.order() == 0) return std::abs(w.feedthrough());
    // |w| is even in theta for real coefficients: scan [0, pi] only.
    constexpr int half = kHinfGrid / 2;
    std::vector<double> mag(half + 1);
    const double step = std::numbers::pi / half;
    for (int k = 0; k <= half; ++k) mag[static_cast<std::size_t>(k)] = std::abs(w(std::polar(1.0, k * step)));

    std::vector<int> peaks;
    for (int k = 0; k <= half; ++k) {
        const double left = k > 0 ? mag[static_cast<std::size_t>(k - 1)] : mag[1];
        const double right = k < half ? mag[static_cast<std::size_t>(k + 1)] : mag[static_cast<std::size_t>(half - 1)];
        if (mag[static_cast<std::size_t>(k)] >= left && mag[static_cast<std::size_t>(k)] >= right) peaks.push_back(k);
    }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
        return mag[static_cast<std::size_t>(a)] != mag[static_cast<std::size_t>(b)] ? mag[static_cast<std::size_t>(a)] > mag[static_cast<std::size_t>(b)] : a < b;
    });
    double best = *std::max_element(mag.begin(), mag.end());
    for (std::size_t i = 0; i < std::min<std::size_t>(3, peaks.size()); ++i) {
        const int k = peaks[i];
        best = std::max(best, golden_max(w, (k - 1) * step, (k + 1) * step));
    }
    return best;
}

bool is_internally_stable(const TransferFunction& h, const TransferFunction& c, double lambda) {
    if (!c.is_strictly_proper()) throw Error(Errc::AlgebraicLoop, "is_internally_stable(): controller is not strictly proper");
    const Polynomial loop = c.den() - lambda * c.num();
    if (!(pole_radius(loop) < kStabilityRadius)) return false;
    return is_stable(closed_loop_error_tf(h, c, lambda));
}

}  // namespace octrack
