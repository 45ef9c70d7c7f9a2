#include "octrack/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include "octrack/errors.hpp"
#include "octrack/evaluation.hpp"
#include "octrack/parallel.hpp"

namespace octrack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kHalfGrid = 2048;
constexpr double kPhase1Target = 1.0 - 1e-3;
constexpr std::uint64_t kStartStream = 0x5717;

using cplx = std::complex<double>;

// Parameter vector layout: a_0..a_{r-1} (a monic of degree r), then b_0..b_{r-1}.
Polynomial poly_a(const Vector& t, int r) {
    std::vector<double> a(static_cast<std::size_t>(r) + 1, 1.0);
    for (int i = 0; i < r; ++i) a[static_cast<std::size_t>(i)] = t(i);
    return Polynomial(std::move(a));
}

Polynomial poly_b(const Vector& t, int r) {
    std::vector<double> b(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) b[static_cast<std::size_t>(i)] = t(r + i);
    return Polynomial(std::move(b));
}

Vector params_of(const Polynomial& b, const Polynomial& a, int r) {
    Vector t(2 * r);
    for (int i = 0; i < r; ++i) {
        t(i) = a[i];
        t(r + i) = b[i];
    }
    return t;
}

// Fast surrogate of the grid-robust objective on a half-circle grid.
class GridEvaluator {
public:
    GridEvaluator(const PoleFactorization& f, std::vector<double> lambdas, int r)
        : f_(f), p_(f.precompensator()), lambdas_(std::move(lambdas)), r_(r) {
        std::sort(lambdas_.begin(), lambdas_.end());
        const std::size_t K = kHalfGrid + 1;
        N_.resize(K);
        Ds_.resize(K);
        Du_.resize(K);
        P_.resize(K);
        zpow_.resize(K * static_cast<std::size_t>(r + 1));
        for (std::size_t k = 0; k < K; ++k) {
            const cplx z = std::polar(1.0, std::numbers::pi * static_cast<double>(k) / kHalfGrid);
            N_[k] = f.n(z);
            Ds_[k] = f.d_s(z);
            Du_[k] = f.d_u(z);
            P_[k] = p_(z);
            cplx zi = 1.0;
            for (int i = 0; i <= r; ++i) {
                zpow_[k * static_cast<std::size_t>(r + 1) + static_cast<std::size_t>(i)] = zi;
                zi *= z;
            }
        }
    }

    [[nodiscard]] bool stable(const Vector& t) const {
        const Polynomial ua = f_.d_u * poly_a(t, r_);
        const Polynomial pb = p_ * poly_b(t, r_);
        for (double l : lambdas_)
            if (!all_roots_within(ua - l * pb, kStabilityRadius)) return false;
        return true;
    }

    [[nodiscard]] double loop_radius(const Vector& t) const {
        if (!t.allFinite()) return kInf;
        const Polynomial ua = f_.d_u * poly_a(t, r_);
        const Polynomial pb = p_ * poly_b(t, r_);
        double worst = 0.0;
        for (double l : lambdas_) {
            for (const auto& z : polynomial_roots(ua - l * pb)) worst = std::max(worst, std::abs(z));
        }
        return worst;
    }

    [[nodiscard]] double cost(const Vector& t) const {
        if (!t.allFinite() || !stable(t)) return kInf;
        const auto stride = static_cast<std::size_t>(r_ + 1);
        double worst = 0.0;
        for (std::size_t k = 0; k < N_.size(); ++k) {
            const cplx* zp = &zpow_[k * stride];
            cplx A = zp[r_];
            cplx B = 0.0;
            for (int i = 0; i < r_; ++i) {
                A += t(i) * zp[i];
                B += t(r_ + i) * zp[i];
            }
            const double numer = std::abs(N_[k] * A);
            if (numer == 0.0) continue;
            const cplx U = Du_[k] * A;
            const cplx V = P_[k] * B;
            const double vv = std::norm(V);
            double best = std::norm(U - lambdas_.front() * V);
            if (vv > 0.0) {
                const double lstar = (U * std::conj(V)).real() / vv;
                const auto it = std::lower_bound(lambdas_.begin(), lambdas_.end(), lstar);
                const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - lambdas_.begin()), lambdas_.size() - 1);
                const std::size_t lo = hi > 0 ? hi - 1 : 0;
                best = std::min({best, std::norm(U - lambdas_[lo] * V), std::norm(U - lambdas_[hi] * V),
                                 std::norm(U - lambdas_.back() * V)});
            }
            if (best <= 0.0) return kInf;
            worst = std::max(worst, numer / (std::abs(Ds_[k]) * std::sqrt(best)));
        }
        return worst;
    }

private:
    const PoleFactorization& f_;
    Polynomial p_;
    std::vector<double> lambdas_;
    int r_;
    std::vector<cplx> N_, Ds_, Du_, P_, zpow_;
};

struct NmResult {
    Vector x;
    double f = kInf;
    int evals = 0;
};

NmResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0, int max_evals,
                     double stop_below = -kInf) {
    const Eigen::Index d = x0.size();
    std::vector<Vector> pts(static_cast<std::size_t>(d) + 1, x0);
    std::vector<double> val(pts.size());
    int evals = 0;
    auto eval = [&](const Vector& x) {
        ++evals;
        return f(x);
    };
    val[0] = eval(pts[0]);
    for (Eigen::Index i = 0; i < d; ++i) {
        pts[static_cast<std::size_t>(i) + 1](i) += 0.05 * std::abs(x0(i)) + 0.02;
        val[static_cast<std::size_t>(i) + 1] = eval(pts[static_cast<std::size_t>(i) + 1]);
    }
    std::vector<std::size_t> idx(pts.size());
    while (evals < max_evals) {
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        const std::size_t best = idx.front();
        const std::size_t worst = idx.back();
        const std::size_t second = idx[idx.size() - 2];
        if (val[best] < stop_below) break;
        double diam = 0.0;
        for (const auto& p : pts) diam = std::max(diam, (p - pts[best]).lpNorm<Eigen::Infinity>());
        if (std::isfinite(val[worst]) && val[worst] - val[best] <= 1e-13 * (std::abs(val[best]) + 1e-13) && diam < 1e-10) break;
        if (diam < 1e-13) break;

        Vector centroid = Vector::Zero(d);
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) centroid += pts[idx[i]];
        centroid /= static_cast<double>(d);

        const Vector xr = centroid + (centroid - pts[worst]);
        const double fr = eval(xr);
        if (fr < val[best]) {
            const Vector xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                val[worst] = fe;
            } else {
                pts[worst] = xr;
                val[worst] = fr;
            }
            continue;
        }
        if (fr < val[second]) {
            pts[worst] = xr;
            val[worst] = fr;
            continue;
        }
        const bool outside = fr < val[worst];
        const Vector xc = outside ? Vector(centroid + 0.5 * (xr - centroid)) : Vector(centroid + 0.5 * (pts[worst] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : val[worst])) {
            pts[worst] = xc;
            val[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == best) continue;
            pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
            val[i] = eval(pts[i]);
        }
    }
    const auto it = std::min_element(val.begin(), val.end());
    return {pts[static_cast<std::size_t>(it - val.begin())], *it, evals};
}

// Restarts the simplex at the incumbent until the budget is spent or a restart
// stops improving.
NmResult minimize(const std::function<double(const Vector&)>& f, const Vector& x0, int max_evals, double stop_below = -kInf) {
    NmResult best{x0, kInf, 0};
    int used = 0;
    Vector x = x0;
    while (used < max_evals) {
        const NmResult r = nelder_mead(f, x, max_evals - used, stop_below);
        used += r.evals;
        const bool improved = r.f < best.f - 1e-10 * std::abs(best.f);
        if (r.f < best.f) best = {r.x, r.f, used};
        if (!improved || best.f < stop_below) break;
        x = best.x;
    }
    best.evals = used;
    return best;
}

// Multiplies num and den by z^k so that deg den = r.
std::optional<Vector> padded_params(const Polynomial& b, const Polynomial& a, int r) {
    const int deg = a.degree();
    if (deg > r || deg < 0 || b.degree() >= deg) return std::nullopt;
    const Polynomial shift = Polynomial::monomial(r - deg);
    const Polynomial am = a.monic();
    const Polynomial bm = (1.0 / a.leading()) * b;
    return params_of(bm * shift, am * shift, r);
}

// cbar = c d_u / p = num_c / (p den_c / d_u), with z factors shared by num_c
// and p removed.
std::optional<Vector> cbar_params(const TransferFunction& c, const PoleFactorization& f, int r) {
    const auto [q, rem] = c.den().divmod(f.d_u);
    if (rem.norm() > 1e-8 * std::max(1.0, c.den().norm())) return std::nullopt;
    const int nu = f.d_u.degree();
    const double tiny = 1e-12 * std::max(1.0, c.num().norm());
    int k = 0;
    while (k < nu && k <= c.num().degree() && std::abs(c.num()[k]) <= tiny) ++k;
    std::vector<double> bn;
    for (int i = k; i <= c.num().degree(); ++i) bn.push_back(c.num()[i]);
    return padded_params(Polynomial(std::move(bn)), Polynomial::monomial(nu - k) * q, r);
}

// Kalman-shaped cbar at mu = 1 for the signal model with feedthrough scaled
// to j * inflate; cbar at other mu follows by scaling b by 1 / mu.
std::optional<Vector> kalman_shaped(const TransferFunction& h, const PoleFactorization& f, double inflate, int r) {
    try {
        StateSpace model = observable_realization(h);
        model.j = inflate * (model.j != 0.0 ? model.j : 0.1 * std::max(1.0, model.G.norm()));
        const TrackerController k = make_kalman_tracker(model, 1.0, 1.0);
        return cbar_params(k.tf, f, r);
    } catch (const Error&) {
        return std::nullopt;
    }
}

Vector with_mu(Vector t, double mu, int r) {
    t.tail(r) /= mu;
    return t;
}

TrackerController assemble(const PoleFactorization& f, const Vector& t, int r) {
    const TransferFunction c(f.precompensator() * poly_b(t, r), f.d_u * poly_a(t, r));
    return controller_from_tf(TrackerKind::HInf, c);
}

TrackerController synthesize_core(const TransferFunction& h, const PoleFactorization& f, const UncertaintyInterval& interval,
                                  int order, const SynthesisOptions& opts) {
    if (opts.grid_points < 2) throw Error(Errc::InvalidArgument, "synthesis: grid_points must be at least 2");
    if (opts.max_evals < 1 || opts.starts < 1) throw Error(Errc::InvalidArgument, "synthesis: starts and max_evals must be positive");
    const std::vector<double> grid = chebyshev_grid(interval, opts.grid_points);

    if (h.is_zero()) {
        TrackerController ctrl = controller_from_tf(TrackerKind::HInf, TransferFunction());
        ctrl.gamma = 0.0;
        ctrl.lambda_grid = grid;
        ctrl.interval = interval;
        return ctrl;
    }

    const int r = order > 0 ? order : std::max(1, h.order());
    const GridEvaluator ev(f, grid, r);

    std::vector<Vector> base;
    for (const auto& w : opts.warm_starts)
        if (auto t = cbar_params(w, f, r)) base.push_back(*t);

    // Kalman-shaped family: feedthrough inflation times a log-spaced mu scan,
    // best surrogate cost per inflation level; the four cheapest are kept.
    const double mu0 = mu_star_uniform(interval.lambda_min, interval.lambda_max);
    std::vector<std::pair<double, Vector>> family;
    std::optional<Vector> nominal;
    for (double inflate : {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 96.0, 128.0}) {
        const auto t1 = kalman_shaped(h, f, inflate, r);
        if (!t1) continue;
        if (inflate == 1.0) nominal = with_mu(*t1, mu0, r);
        double best_cost = kInf;
        Vector best_t;
        for (int step = -32; step <= 32; ++step) {
            const Vector t = with_mu(*t1, mu0 * std::exp2(step / 8.0), r);
            const double c = ev.cost(t);
            if (c < best_cost) {
                best_cost = c;
                best_t = t;
            }
        }
        if (std::isfinite(best_cost)) family.emplace_back(best_cost, best_t);
    }
    std::stable_sort(family.begin(), family.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < std::min<std::size_t>(family.size(), 4); ++i) base.push_back(family[i].second);
    if (family.empty() && nominal) base.push_back(*nominal);

    if (f.d_u.degree() == 0) {
        const double alpha = 1.0 / interval.lambda_max;
        if (auto t = padded_params(Polynomial{-alpha}, Polynomial{-1.0, 1.0}, r)) base.push_back(*t);
    }
    if (base.empty()) base.push_back(params_of(Polynomial{}, Polynomial::monomial(r), r));

    const std::size_t nstarts = std::max<std::size_t>(static_cast<std::size_t>(opts.starts), base.size());
    std::vector<Vector> starts(nstarts);
    const RngStream root(opts.seed, kStartStream);
    for (std::size_t s = 0; s < nstarts; ++s) {
        if (s < base.size()) {
            starts[s] = base[s];
            continue;
        }
        RngStream rng = root.split(s);
        Vector t = base[(s - base.size()) % base.size()];
        for (Eigen::Index i = 0; i < t.size(); ++i) t(i) += (0.1 * std::abs(t(i)) + 0.02) * rng.normal();
        starts[s] = t;
    }

    auto cost = [&](const Vector& t) { return ev.cost(t); };
    auto radius = [&](const Vector& t) { return ev.loop_radius(t); };

    std::vector<std::vector<Vector>> found(nstarts);
    parallel_for(nstarts, [&](std::size_t s) {
        Vector t = starts[s];
        if (!ev.stable(t)) {
            const NmResult p1 = minimize(radius, t, opts.max_evals, kPhase1Target);
            if (!ev.stable(p1.x)) return;
            t = p1.x;
        }
        found[s].push_back(t);
        const NmResult p2 = minimize(cost, t, opts.max_evals);
        if (std::isfinite(p2.f)) found[s].push_back(p2.x);
    });

    std::vector<Vector> candidates;
    for (auto& v : found)
        for (auto& t : v) candidates.push_back(std::move(t));
    std::vector<double> gammas(candidates.size(), kInf);
    parallel_for(candidates.size(), [&](std::size_t i) {
        const TrackerController c = assemble(f, candidates[i], r);
        gammas[i] = robust_cost(h, c.tf, interval, opts.grid_points);
    });

    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!std::isfinite(gammas[i])) continue;
        if (best == candidates.size() || gammas[i] < gammas[best] ||
            (gammas[i] == gammas[best] && candidates[i].norm() < candidates[best].norm()))
            best = i;
    }
    if (best == candidates.size())
        throw Error(Errc::NoStabilizingController, "synthesis: no candidate stabilizes every grid point");

    TrackerController ctrl = assemble(f, candidates[best], r);
    ctrl.gamma = gammas[best];
    ctrl.lambda_grid = grid;
    ctrl.interval = interval;
    return ctrl;
}

}  // namespace

PoleFactorization factor_poles(const TransferFunction& h) {
    PoleFactorization f{h.num(), Polynomial::constant(1.0), h.den()};
    if (h.den().degree() < 1) return f;
    ComplexVector unstable;
    for (const auto& z : polynomial_roots(h.den()))
        if (std::abs(z) >= kStabilityRadius) unstable.push_back(z);
    if (unstable.empty()) return f;
    f.d_u = Polynomial::from_roots(unstable);
    f.d_s = h.den().divmod(f.d_u).first;
    return f;
}

TransferFunction precompensated_error_tf(const PoleFactorization& f, const TransferFunction& cbar, double lambda) {
    if (!cbar.is_strictly_proper()) throw Error(Errc::AlgebraicLoop, "precompensated_error_tf(): controller is not strictly proper");
    const Polynomial& a = cbar.den();
    const Polynomial& b = cbar.num();
    return TransferFunction(-(f.n * a), f.d_s * (f.d_u * a - lambda * (f.precompensator() * b)));
}

TrackerController hinf_synthesize(const TransferFunction& h, const UncertaintyInterval& interval, int order,
                                  const SynthesisOptions& opts) {
    if (!is_stable(h)) throw Error(Errc::Unstable, "hinf_synthesize(): signal model must be stable");
    const PoleFactorization f{h.num(), Polynomial::constant(1.0), h.den()};
    return synthesize_core(h, f, interval, order, opts);
}

TrackerController precompensated_synthesize(const TransferFunction& h, const UncertaintyInterval& interval, int order,
                                            const SynthesisOptions& opts) {
    const PoleFactorization f = factor_poles(h);
    if (f.d_u.degree() == 0) return hinf_synthesize(h, interval, order, opts);
    return synthesize_core(h, f, interval, order, opts);
}

}  // namespace octrack
