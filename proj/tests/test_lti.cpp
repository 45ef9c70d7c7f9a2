#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"

using namespace octrack;
using testing::resolvent;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

TransferFunction first_order(double g, double a) { return TransferFunction(Polynomial{g}, Polynomial{-a, 1.0}); }

bool coeff_equal(const TransferFunction& a, const TransferFunction& b, double tol) {
    return (a.num() - b.num()).norm() <= tol * std::max(1.0, b.num().norm()) &&
           (a.den() - b.den()).norm() <= tol * std::max(1.0, b.den().norm());
}

}  // namespace

TEST_CASE("transfer function normalization and guards") {
    const TransferFunction t(Polynomial{2.0}, Polynomial{-1.0, 2.0});
    CHECK(t.den() == Polynomial{-0.5, 1.0});
    CHECK(t.num() == Polynomial{1.0});
    CHECK(t.is_strictly_proper());
    CHECK_THROWS_AS(TransferFunction(Polynomial{0.0, 0.0, 1.0}, Polynomial{0.0, 1.0}), Error);
    CHECK_THROWS_AS(TransferFunction(Polynomial{1.0}, Polynomial{}), Error);
    CHECK(TransferFunction().is_zero());
    CHECK(TransferFunction::constant(0.3).feedthrough() == 0.3);
}

TEST_CASE("frequency grid") {
    const FrequencyGrid g(64);
    CHECK(g.angle(0) == doctest::Approx(-std::numbers::pi));
    CHECK(g.angle(32) == doctest::Approx(0.0));
    CHECK_THROWS_AS(FrequencyGrid(32), Error);
    CHECK_THROWS_AS(FrequencyGrid(100), Error);
}

TEST_CASE("observable canonical form") {
    const auto f1 = observable_canonical(Polynomial{-0.3, 1.0});
    CHECK(f1.F(0, 0) == 0.3);
    CHECK(f1.H(0, 0) == 1.0);
    const auto f2 = observable_canonical(testing::stable_ds());
    CHECK((characteristic_polynomial(f2.F) - testing::stable_ds()).norm() <= 1e-12);
    CHECK(f2.H == (Matrix(1, 2) << 1.0, 0.0).finished());
    CHECK(std::abs(spectral_radius(observable_canonical(testing::unstable_du()).F) - 1.0) <= 1e-9);
}

TEST_CASE("ss_to_tf examples") {
    const Matrix zero = Matrix::Zero(1, 1);
    const Matrix one = Matrix::Ones(1, 1);
    const TransferFunction delay = ss_to_tf(StateSpace{zero, one, one, 0.0});
    CHECK(delay == TransferFunction(Polynomial{1.0}, Polynomial{0.0, 1.0}));
    const TransferFunction k = ss_to_tf(StateSpace{zero, zero, zero, 0.2});
    CHECK(k.order() == 0);
    CHECK(k.feedthrough() == doctest::Approx(0.2));

    const StateSpace m = testing::stable_model(0.2);
    const TransferFunction h = ss_to_tf(m);
    const double direct = (m.H * (Matrix::Identity(2, 2) - m.F).inverse() * m.G)(0, 0) + m.j;
    CHECK(h(std::complex<double>(1.0, 0.0)).real() == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("ss_to_tf agrees with the resolvent at 32 points") {
    RngStream rng(21, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 1 + trial % 5;
        StateSpace ss{Matrix(m, m), Matrix(m, 1), Matrix(1, m), rng.normal()};
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) ss.F(r, c) = rng.normal() * 0.5;
            ss.G(r, 0) = rng.normal();
            ss.H(0, r) = rng.normal();
        }
        const TransferFunction tf = ss_to_tf(ss);
        for (int k = 0; k < 32; ++k) {
            const auto z = std::polar(1.3 + 0.5 * std::sin(k), 2.0 * std::numbers::pi * k / 32.0 + 0.1);
            const auto ref = resolvent(ss, z);
            CHECK(std::abs(tf(z) - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("observable realization round trip") {
    const Polynomial d = testing::stable_ds() * Polynomial{0.4, 1.0};
    const auto f = observable_canonical(d);
    Matrix G = Matrix::Zero(3, 1);
    G(2, 0) = 1.0;
    const TransferFunction tf = ss_to_tf(StateSpace{f.F, G, f.H, 0.0});
    const TransferFunction inv(Polynomial{1.0}, d);
    for (int k = 0; k < 16; ++k) {
        const auto z = std::polar(1.1, 0.4 * k);
        CHECK(std::abs(tf(z) - inv(z)) <= 1e-10 * std::abs(inv(z)));
    }
    RngStream rng(4, 2);
    const TransferFunction w = testing::random_stable_tf(rng, 4);
    const TransferFunction back = ss_to_tf(observable_realization(w));
    CHECK(coeff_equal(back, w, 1e-10));
}

TEST_CASE("closed-loop error system examples") {
    RngStream rng(9, 0);
    const TransferFunction h = testing::random_stable_tf(rng, 3);
    const TransferFunction c = testing::random_stable_tf(rng, 2, false);
    const TransferFunction minus_h(-h.num(), h.den());
    CHECK(coeff_equal(closed_loop_error_tf(h, TransferFunction(), 2.0), minus_h, 1e-12));
    CHECK(coeff_equal(closed_loop_error_tf(h, c, 0.0), minus_h, 1e-12));

    const TransferFunction z1(Polynomial{1.0}, Polynomial{0.0, 1.0});
    const double k = 0.3;
    const double lam = 1.5;
    const TransferFunction w = closed_loop_error_tf(z1, TransferFunction(Polynomial{k}, Polynomial{0.0, 1.0}), lam);
    CHECK(coeff_equal(w, TransferFunction(Polynomial{-1.0}, Polynomial{-lam * k, 1.0}), 1e-14));

    CHECK_THROWS_AS(closed_loop_error_tf(h, TransferFunction::constant(1.0), 1.0), Error);
    try {
        closed_loop_error_tf(h, TransferFunction(Polynomial{1.0, 1.0}, Polynomial{0.5, 1.0}), 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::AlgebraicLoop);
    }
}

TEST_CASE("closed-loop error system matches -h/(1 - lambda c) pointwise") {
    RngStream rng(10, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const TransferFunction h = testing::random_stable_tf(rng, 1 + trial % 4);
        const TransferFunction c = testing::random_stable_tf(rng, 1 + trial % 3, false);
        const double lam = rng.uniform(0.5, 3.0);
        const TransferFunction w = closed_loop_error_tf(h, c, lam);
        for (int k = 0; k < 8; ++k) {
            const auto z = std::polar(1.0, 0.77 * k + 0.05);
            const auto ref = -h(z) / (1.0 - lam * c(z));
            CHECK(std::abs(w(z) - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("common factors are cancelled") {
    const Polynomial common{-0.5, 1.0};
    const TransferFunction t = cancel_common_roots(Polynomial{0.2, 1.0} * common, Polynomial{-0.1, 1.0} * common * Polynomial{0.3, 1.0});
    CHECK(t.order() == 2);
    CHECK(t.num().degree() == 1);
}

TEST_CASE("H2 norms: closed forms") {
    const TransferFunction delay(Polynomial{1.0}, Polynomial{0.0, 1.0});
    CHECK(h2_norm_sq_exact(delay) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(h2_norm_sq_freq(delay, FrequencyGrid(64)) - 1.0) <= 1e-12);
    CHECK(h2_norm_sq_freq(TransferFunction::constant(0.5), FrequencyGrid(64)) == doctest::Approx(0.25).epsilon(1e-14));
    for (double a : {-0.8, 0.2, 0.9}) {
        const double g = 1.7;
        const double ref = g * g / (1.0 - a * a);
        CHECK(h2_norm_sq_exact(first_order(g, a)) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(std::abs(h2_norm_sq_freq(first_order(g, a), FrequencyGrid(1 << 14)) - ref) <= 1e-8 * ref);
    }
    CHECK(h2_norm_sq_exact(first_order(1.0, 1.0)) == kInf);
    CHECK_THROWS_AS(h2_norm_sq_freq(first_order(1.0, 1.0 - 1e-7), FrequencyGrid(64)), Error);
}

TEST_CASE("H2 exact vs frequency grid on 100 random systems, and H2 <= Hinf^2") {
    RngStream rng(2024, 0);
    const FrequencyGrid grid(1 << 14);
    for (int trial = 0; trial < 100; ++trial) {
        RngStream local = rng.split(static_cast<std::uint64_t>(trial));
        const TransferFunction w = testing::random_stable_tf(local, 1 + trial % 6, trial % 2 == 0);
        const double ex = h2_norm_sq_exact(w);
        const double fr = h2_norm_sq_freq(w, grid);
        CHECK(std::abs(ex - fr) <= 1e-6 * ex);
        CHECK(ex <= hinf_norm(w) * hinf_norm(w) * (1.0 + 1e-12));
    }
}

TEST_CASE("Hinf norm examples") {
    CHECK(std::abs(hinf_norm(first_order(0.7, 0.6)) - 0.7 / 0.4) <= 1e-6);
    CHECK(hinf_norm(TransferFunction::constant(-0.3)) == doctest::Approx(0.3));
    CHECK(std::abs(hinf_norm(TransferFunction(Polynomial{1.0}, Polynomial{0.0, 1.0})) - 1.0) <= 1e-12);
    CHECK(hinf_norm(first_order(1.0, -1.0)) == kInf);
}

TEST_CASE("Hinf norm matches a dense sweep on random systems") {
    RngStream rng(42, 7);
    for (int trial = 0; trial < 30; ++trial) {
        const TransferFunction w = testing::random_stable_tf(rng, 2 + trial % 5);
        double peak = 0.0;
        const int N = 1 << 18;
        for (int k = 0; k <= N / 2; ++k) peak = std::max(peak, std::abs(w(std::polar(1.0, 2.0 * std::numbers::pi * k / N))));
        const double hn = hinf_norm(w);
        CHECK(hn >= peak - 1e-9 * peak);
        CHECK(hn <= peak * (1.0 + 1e-6));
    }
}

TEST_CASE("internal stability") {
    CHECK(is_internally_stable(first_order(1.0, 0.5), TransferFunction(), 1.0));
    CHECK_FALSE(is_internally_stable(first_order(1.0, 1.0), TransferFunction(), 1.0));
    // An unstable controller pole cancelled by a zero of h is still a closed-loop mode.
    const TransferFunction h(Polynomial{-1.2, 1.0}, Polynomial{0.0, 0.0, 1.0});
    const TransferFunction c(Polynomial{1e-3}, Polynomial{-1.2, 1.0});
    CHECK_FALSE(is_internally_stable(h, c, 1.0));
    CHECK(is_internally_stable(first_order(1.0, 0.5), TransferFunction(Polynomial{-0.1}, Polynomial{0.0, 1.0}), 2.0));
    CHECK_THROWS_AS(is_internally_stable(first_order(1.0, 0.5), TransferFunction::constant(1.0), 1.0), Error);
}
