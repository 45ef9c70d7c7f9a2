#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include <octrack/octrack.hpp>

using namespace octrack;

namespace {

StateSpace model_of(const Polynomial& d, double j) {
    const auto f = observable_canonical(d.monic());
    return StateSpace{f.F, Matrix::Ones(d.degree(), 1), f.H, j};
}

StateSpace stable_model() { return model_of(Polynomial{-0.975, 1.0} * Polynomial{-0.975, 1.0}, 0.2); }

StateSpace unstable_model() {
    const Polynomial du{1.0, -2.0 * std::cos(std::numbers::pi / 12.0), 1.0};
    return model_of(du * Polynomial{-0.875, 1.0} * Polynomial{-0.875, 1.0}, 1.0);
}

void BM_SolveDare(benchmark::State& state) {
    const StateSpace m = state.range(0) == 0 ? stable_model() : unstable_model();
    for (auto _ : state) benchmark::DoNotOptimize(solve_dare(m.F, m.G, m.H, m.j, 1.0));
}
BENCHMARK(BM_SolveDare)->Arg(0)->Arg(1);

void BM_HinfNorm(benchmark::State& state) {
    const TransferFunction h = ss_to_tf(stable_model());
    const TransferFunction w = closed_loop_error_tf(h, make_gd_tracker(1.0 / 3.5).tf, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(hinf_norm(w));
}
BENCHMARK(BM_HinfNorm);

void BM_H2Exact(benchmark::State& state) {
    const TransferFunction h = ss_to_tf(stable_model());
    const TransferFunction w = closed_loop_error_tf(h, make_gd_tracker(1.0 / 3.5).tf, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(h2_norm_sq_exact(w));
}
BENCHMARK(BM_H2Exact);

void BM_RobustCost(benchmark::State& state) {
    const TransferFunction h = ss_to_tf(stable_model());
    const TransferFunction c = make_gd_tracker(1.0 / 3.5).tf;
    for (auto _ : state) benchmark::DoNotOptimize(robust_cost(h, c, UncertaintyInterval(1.0, 3.5)));
}
BENCHMARK(BM_RobustCost);

void BM_Synthesis(benchmark::State& state) {
    const bool unstable = state.range(0) != 0;
    const TransferFunction h = ss_to_tf(unstable ? unstable_model() : stable_model());
    const UncertaintyInterval iv(1.0, unstable ? 3.3 : 3.5);
    for (auto _ : state) benchmark::DoNotOptimize(precompensated_synthesize(h, iv, 0));
}
BENCHMARK(BM_Synthesis)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_TrackerStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const TrackerController k = make_kalman_tracker(stable_model(), 1.0, 2.0);
    TrackerState st = make_tracker_state(k, n);
    const Vector g = Vector::Constant(n, 0.1);
    Vector x(n);
    for (auto _ : state) {
        tracker_step(k, st, g, x);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_TrackerStep)->Arg(1)->Arg(10)->Arg(100);

void BM_Simulate(benchmark::State& state) {
    const StateSpace m = stable_model();
    for (auto _ : state) {
        RngStream rng(1, 0);
        benchmark::DoNotOptimize(simulate_minimizer(m, 10, 10000, 1.0, rng));
    }
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

void BM_EmpiricalCost(benchmark::State& state) {
    const QuadraticScenario sc = make_scenario(10, 1.0, 3.5, stable_model(), 1.0, 1);
    const TrackerController gd = make_gd_tracker(1.0 / 3.5);
    for (auto _ : state) benchmark::DoNotOptimize(empirical_cost(sc, gd, 20000, 1000, 4, RngStream(1, 2)));
}
BENCHMARK(BM_EmpiricalCost)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
