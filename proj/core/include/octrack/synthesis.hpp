#pragma once

#include <cstdint>
#include <vector>

#include "octrack/lti.hpp"
#include "octrack/trackers.hpp"

namespace octrack {

struct SynthesisOptions {
    int grid_points = 33;
    int starts = 16;
    int max_evals = 2000;  // per start and phase
    std::uint64_t seed = 0;
    // Extra candidate controllers c(z); used when their order fits.
    std::vector<TransferFunction> warm_starts;
};

// h = n / (d_u d_s), d_u holding the poles of modulus >= 1 - 1e-9.
struct PoleFactorization {
    Polynomial n;
    Polynomial d_u;
    Polynomial d_s;

    [[nodiscard]] int unstable_degree() const noexcept { return d_u.degree(); }
    // p(z) = z^{deg d_u}.
    [[nodiscard]] Polynomial precompensator() const { return Polynomial::monomial(d_u.degree()); }
};

PoleFactorization factor_poles(const TransferFunction& h);

// Error system of the precompensated loop with c = (p / d_u) cbar:
// w = -n a / (d_s (d_u a - lambda p b)) for cbar = b / a.
TransferFunction precompensated_error_tf(const PoleFactorization& f, const TransferFunction& cbar, double lambda);

// Fixed-order robust synthesis for a stable h: minimizes the maximum over a
// Chebyshev lambda grid of ||w_lambda||_inf over strictly proper c of the given
// order (order <= 0 selects the signal model order). Throws Unstable for
// unstable h and NoStabilizingController when no candidate stabilizes the grid.
TrackerController hinf_synthesize(const TransferFunction& h, const UncertaintyInterval& interval, int order,
                                  const SynthesisOptions& opts = {});

// As hinf_synthesize, with unstable poles of h built into the controller:
// c = (p / d_u) cbar, cbar of the given order (default: order of h).
TrackerController precompensated_synthesize(const TransferFunction& h, const UncertaintyInterval& interval, int order,
                                            const SynthesisOptions& opts = {});

}  // namespace octrack
