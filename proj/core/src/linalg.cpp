#include "octrack/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "octrack/errors.hpp"

namespace octrack {

namespace {

constexpr double kLyapunovTol = 1e-10;
constexpr double kDareIterTol = 1e-13;
constexpr int kDareMaxIter = 100000;
constexpr double kDareResidualTol = 1e-10;
constexpr double kMinInnovation = 1e-14;

double lyapunov_residual(const Matrix& A, const Matrix& Q, const Matrix& P) {
    return (A * P * A.transpose() + Q - P).norm();
}

Matrix lyapunov_kron(const Matrix& A, const Matrix& Q) {
    const Eigen::Index n = A.rows();
    const Matrix K = Matrix::Identity(n * n, n * n) - Eigen::kroneckerProduct(A, A).eval();
    const Vector q = Eigen::Map<const Vector>(Q.data(), n * n);
    const Vector p = K.partialPivLu().solve(q);
    return Eigen::Map<const Matrix>(p.data(), n, n);
}

// Squared Smith iteration for larger problems.
Matrix lyapunov_smith(const Matrix& A, const Matrix& Q) {
    Matrix P = Q;
    Matrix Ak = A;
    for (int it = 0; it < 200; ++it) {
        const Matrix step = Ak * P * Ak.transpose();
        P += step;
        Ak = Ak * Ak;
        if (step.norm() <= 1e-17 * std::max(1.0, P.norm())) break;
    }
    return P;
}

struct GainTerms {
    Matrix gain;
    double innovation;
};

GainTerms gain_terms(const Matrix& P, const Matrix& F, const Matrix& G, const Matrix& H, double j, double sigma2) {
    const double innovation = (H * P * H.transpose())(0, 0) + sigma2 * j * j;
    if (!(innovation > kMinInnovation))
        throw Error(Errc::SingularInnovation, "solve_dare(): innovation variance is not positive");
    Matrix gain = (F * P * H.transpose() + sigma2 * j * G) / innovation;
    return {std::move(gain), innovation};
}

}  // namespace

Matrix solve_discrete_lyapunov(const Matrix& A, const Matrix& Q) {
    if (A.rows() != A.cols() || Q.rows() != A.rows() || Q.cols() != A.cols())
        throw Error(Errc::DimensionMismatch, "solve_discrete_lyapunov(): dimension mismatch");
    if (A.rows() == 0) return Matrix(0, 0);
    if (!(spectral_radius(A) < kStabilityRadius))
        throw Error(Errc::NotConverged, "solve_discrete_lyapunov(): A is not Schur stable");

    Matrix P = A.rows() <= 16 ? lyapunov_kron(A, Q) : lyapunov_smith(A, Q);
    P = 0.5 * (P + P.transpose()).eval();

    const double target = kLyapunovTol * std::max(1.0, Q.norm());
    double res = lyapunov_residual(A, Q, P);
    for (int refine = 0; refine < 3 && res > target; ++refine) {
        const Matrix R = A * P * A.transpose() + Q - P;
        Matrix D = A.rows() <= 16 ? lyapunov_kron(A, R) : lyapunov_smith(A, R);
        P += 0.5 * (D + D.transpose());
        res = lyapunov_residual(A, Q, P);
    }
    if (!std::isfinite(res) || res > target)
        throw Error(Errc::NotConverged, "solve_discrete_lyapunov(): residual above tolerance");
    return P;
}

Matrix riccati_map(const Matrix& P, const Matrix& F, const Matrix& G, const Matrix& H, double j, double sigma2) {
    const auto [gain, innovation] = gain_terms(P, F, G, H, j, sigma2);
    Matrix next = F * P * F.transpose() + sigma2 * G * G.transpose() - innovation * gain * gain.transpose();
    return 0.5 * (next + next.transpose());
}

double dare_residual(const Matrix& P, const Matrix& F, const Matrix& G, const Matrix& H, double j, double sigma2) {
    return (riccati_map(P, F, G, H, j, sigma2) - P).norm() / std::max(1.0, P.norm());
}

Matrix solve_dare(const Matrix& F, const Matrix& G, const Matrix& H, double j, double sigma2) {
    const Eigen::Index m = F.rows();
    if (F.cols() != m || G.rows() != m || G.cols() != 1 || H.rows() != 1 || H.cols() != m)
        throw Error(Errc::DimensionMismatch, "solve_dare(): inconsistent realization");
    if (!(sigma2 > 0.0)) throw Error(Errc::InvalidArgument, "solve_dare(): sigma2 must be positive");

    const Matrix Q = sigma2 * G * G.transpose();
    Matrix P = Q + Matrix::Identity(m, m);
    for (int it = 0; it < kDareMaxIter; ++it) {
        Matrix next = riccati_map(P, F, G, H, j, sigma2);
        const double change = (next - P).norm();
        P = std::move(next);
        if (!P.allFinite()) throw Error(Errc::NotConverged, "solve_dare(): iteration diverged");
        if (change <= kDareIterTol * std::max(1.0, P.norm())) break;
    }

    // Hewer/Newton-Kleinman polishing on the current closed loop.
    double res = dare_residual(P, F, G, H, j, sigma2);
    const Matrix S = sigma2 * j * G;
    const double R = sigma2 * j * j;
    for (int it = 0; it < 30 && res > 1e-15; ++it) {
        const Matrix K = gain_terms(P, F, G, H, j, sigma2).gain;
        const Matrix Ac = F - K * H;
        const Matrix Qc = Q - K * S.transpose() - S * K.transpose() + R * K * K.transpose();
        Matrix candidate;
        try {
            candidate = solve_discrete_lyapunov(Ac, Qc);
        } catch (const Error&) {
            break;
        }
        double cand_res;
        try {
            cand_res = dare_residual(candidate, F, G, H, j, sigma2);
        } catch (const Error&) {
            break;
        }
        if (!(cand_res < res)) break;
        P = std::move(candidate);
        res = cand_res;
    }

    if (!(res <= kDareResidualTol))
        throw Error(Errc::NotConverged, "solve_dare(): residual above tolerance");
    const Matrix K = gain_terms(P, F, G, H, j, sigma2).gain;
    if (!(spectral_radius(F - K * H) < 1.0))
        throw Error(Errc::NotConverged, "solve_dare(): no stabilizing solution found");
    return P;
}

ComplexVector eigenvalues(const Matrix& M) {
    if (M.rows() != M.cols()) throw Error(Errc::DimensionMismatch, "eigenvalues(): matrix is not square");
    if (M.rows() == 0) return {};
    if (!M.allFinite()) throw Error(Errc::InvalidArgument, "eigenvalues(): non-finite entries");
    Eigen::EigenSolver<Matrix> solver(M, false);
    if (solver.info() != Eigen::Success) throw Error(Errc::NotConverged, "eigenvalues(): QR iteration failed");
    const auto& ev = solver.eigenvalues();
    return ComplexVector(ev.data(), ev.data() + ev.size());
}

double spectral_radius(const Matrix& M) {
    double r = 0.0;
    for (const auto& e : eigenvalues(M)) r = std::max(r, std::abs(e));
    return r;
}

Polynomial characteristic_polynomial(const Matrix& M) {
    if (M.rows() != M.cols()) throw Error(Errc::DimensionMismatch, "characteristic_polynomial(): matrix is not square");
    const Eigen::Index n = M.rows();
    // Observable companion form: coefficients can be read off exactly.
    bool companion = true;
    for (Eigen::Index r = 0; r < n && companion; ++r)
        for (Eigen::Index c = 1; c < n && companion; ++c)
            companion = M(r, c) == (c == r + 1 ? 1.0 : 0.0);
    if (companion) {
        std::vector<double> a(static_cast<std::size_t>(n) + 1);
        a[static_cast<std::size_t>(n)] = 1.0;
        for (Eigen::Index r = 0; r < n; ++r) a[static_cast<std::size_t>(n - 1 - r)] = -M(r, 0);
        return Polynomial(std::move(a));
    }
    const ComplexVector ev = eigenvalues(M);
    return Polynomial::from_roots(ev);
}

ComplexVector polynomial_roots(const Polynomial& p) {
    const int n = p.degree();
    if (n < 1) throw Error(Errc::InvalidArgument, "polynomial_roots(): degree must be at least 1");
    const Polynomial q = p.monic();
    Matrix C = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) C(0, i) = -q[n - 1 - i];
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    const ComplexVector raw = eigenvalues(C);

    std::vector<double> dq(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) dq[static_cast<std::size_t>(k - 1)] = k * q[k];
    const Polynomial deriv(dq);

    auto polish = [&](std::complex<double> r) {
        double best = std::abs(q(r));
        for (int it = 0; it < 8 && best > 0.0; ++it) {
            const std::complex<double> d = deriv(r);
            if (d == 0.0) break;
            const std::complex<double> next = r - q(r) / d;
            const double val = std::abs(q(next));
            if (!(val < best)) break;
            r = next;
            best = val;
        }
        return r;
    };

    ComplexVector reals;
    ComplexVector uppers;
    for (const auto& r : raw) {
        if (r.imag() == 0.0) {
            reals.push_back(polish(r));
        } else if (r.imag() > 0.0) {
            const auto polished = polish(r);
            uppers.push_back(polished.imag() > 0.0 ? polished : r);
        }
    }
    for (auto& r : reals) r = {r.real(), 0.0};
    auto order = [](const std::complex<double>& a, const std::complex<double>& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    std::sort(reals.begin(), reals.end(), order);
    std::sort(uppers.begin(), uppers.end(), order);

    ComplexVector out = reals;
    for (const auto& r : uppers) {
        out.push_back(r);
        out.push_back(std::conj(r));
    }
    return out;
}

Matrix random_orthogonal(int n, RngStream& rng) {
    if (n < 1) throw Error(Errc::InvalidArgument, "random_orthogonal(): n must be positive");
    Matrix Z(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) Z(r, c) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(Z);
    Matrix Qm = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix& R = qr.matrixQR();
    for (int c = 0; c < n; ++c)
        if (R(c, c) < 0.0) Qm.col(c) *= -1.0;
    return Qm;
}

}  // namespace octrack
