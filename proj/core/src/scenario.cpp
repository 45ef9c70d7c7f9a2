#include "octrack/scenario.hpp"

#include <cmath>

#include "octrack/errors.hpp"

namespace octrack {

std::vector<double> draw_spectrum(int n, double lambda_min, double lambda_max, RngStream& rng) {
    if (n < 1) throw Error(Errc::InvalidArgument, "draw_spectrum(): n must be positive");
    if (!(lambda_min > 0.0) || !(lambda_min <= lambda_max) || !std::isfinite(lambda_max))
        throw Error(Errc::InvalidBounds, "draw_spectrum(): need 0 < lambda_min <= lambda_max");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& v : out) v = lambda_min == lambda_max ? lambda_min : rng.uniform(lambda_min, lambda_max);
    return out;
}

Matrix assemble_hessian(const std::vector<double>& spectrum, const Matrix& V) {
    const auto n = static_cast<Eigen::Index>(spectrum.size());
    if (V.rows() != n || V.cols() != n) throw Error(Errc::DimensionMismatch, "assemble_hessian(): basis size mismatch");
    for (double l : spectrum)
        if (!(l > 0.0) || !std::isfinite(l)) throw Error(Errc::InvalidSpectrum, "assemble_hessian(): eigenvalues must be positive");
    const Vector lam = Eigen::Map<const Vector>(spectrum.data(), n);
    Matrix A = V * lam.asDiagonal() * V.transpose();
    return 0.5 * (A + A.transpose());
}

Matrix build_hessian(const std::vector<double>& spectrum, RngStream& rng) {
    if (spectrum.empty()) throw Error(Errc::InvalidSpectrum, "build_hessian(): empty spectrum");
    for (double l : spectrum)
        if (!(l > 0.0) || !std::isfinite(l)) throw Error(Errc::InvalidSpectrum, "build_hessian(): eigenvalues must be positive");
    const Matrix V = random_orthogonal(static_cast<int>(spectrum.size()), rng);
    return assemble_hessian(spectrum, V);
}

QuadraticScenario make_scenario(int n, double lambda_min, double lambda_max, StateSpace model, double sigma,
                                std::uint64_t seed) {
    model.validate();
    if (!(sigma >= 0.0)) throw Error(Errc::InvalidArgument, "make_scenario(): sigma must be nonnegative");
    QuadraticScenario s;
    s.n = n;
    s.lambda_min = lambda_min;
    s.lambda_max = lambda_max;
    RngStream spec_rng(seed, 0);
    s.spectrum = draw_spectrum(n, lambda_min, lambda_max, spec_rng);
    RngStream basis_rng(seed, 1);
    s.V = random_orthogonal(n, basis_rng);
    s.A = assemble_hessian(s.spectrum, s.V);
    s.model = std::move(model);
    s.sigma = sigma;
    s.seed = seed;
    return s;
}

Matrix default_initial_state(const StateSpace& model, int n, RngStream& rng) {
    const int m = model.order();
    Matrix xi0 = Matrix::Zero(m, n);
    if (m == 0 || spectral_radius(model.F) < kStabilityRadius) return xi0;
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < m; ++r) xi0(r, i) = rng.normal();
    return xi0;
}

MinimizerSimulator::MinimizerSimulator(const StateSpace& model, int n, double sigma, RngStream rng, Matrix xi0)
    : model_(&model), n_(n), sigma_(sigma), rng_(std::move(rng)), xi_(std::move(xi0)) {
    model.validate();
    if (n < 1) throw Error(Errc::InvalidArgument, "MinimizerSimulator: n must be positive");
    if (xi_.rows() != model.order() || xi_.cols() != n)
        throw Error(Errc::DimensionMismatch, "MinimizerSimulator: initial state must be m x n");
    scratch_.resize(xi_.rows(), xi_.cols());
    noise_.resize(n);
}

MinimizerSimulator::MinimizerSimulator(const StateSpace& model, int n, double sigma, RngStream rng)
    : MinimizerSimulator(model, n, sigma, std::move(rng), Matrix::Zero(model.order(), n)) {}

void MinimizerSimulator::next(Eigen::Ref<Vector> out) {
    const StateSpace& m = *model_;
    for (int i = 0; i < n_; ++i) noise_(i) = sigma_ * rng_.normal();
    if (m.order() == 0) {
        out = m.j * noise_;
        return;
    }
    out.noalias() = (m.H * xi_).transpose();
    out += m.j * noise_;
    scratch_.noalias() = m.F * xi_;
    scratch_.noalias() += m.G * noise_.transpose();
    xi_.swap(scratch_);
}

MinimizerTrajectory simulate_minimizer(const StateSpace& model, int n, int T, double sigma, RngStream& rng,
                                       const std::optional<Matrix>& xi0) {
    if (T < 1) throw Error(Errc::InvalidArgument, "simulate_minimizer(): T must be positive");
    if (!(sigma >= 0.0)) throw Error(Errc::InvalidArgument, "simulate_minimizer(): sigma must be nonnegative");
    MinimizerTrajectory traj;
    traj.xi0 = xi0 ? *xi0 : Matrix::Zero(model.order(), n);
    MinimizerSimulator sim(model, n, sigma, rng, traj.xi0);
    traj.values.resize(n, T);
    for (int k = 0; k < T; ++k) sim.next(traj.values.col(k));
    rng = sim.stream();
    return traj;
}

Vector gradient(const Matrix& A, const Vector& c, const Vector& x) {
    if (A.rows() != A.cols() || A.cols() != x.size() || c.size() != x.size())
        throw Error(Errc::DimensionMismatch, "gradient(): dimension mismatch");
    return A * (x - c);
}

}  // namespace octrack
