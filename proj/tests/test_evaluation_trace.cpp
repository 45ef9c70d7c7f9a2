#include <doctest.h>

#include "helpers.hpp"

using namespace octrack;

TEST_CASE("trace ordering: GD tail mean exceeds Kalman tail mean on the stable preset") {
    const QuadraticScenario sc = make_scenario(10, 1.0, 3.5, testing::stable_model(0.2), 1.0, 1);
    const TrackerController gd = make_gd_tracker(1.0 / 3.5);
    const TrackerController kal = make_kalman_tracker(sc.model, 1.0, mu_star_uniform(1.0, 3.5));
    const auto traces = error_trace(sc, std::vector<TrackerController>{gd, kal}, 20000, RngStream(1, 3));
    auto tail_mean = [](const ErrorTrace& t) {
        double s = 0.0;
        for (int k = t.horizon() / 2; k < t.horizon(); ++k) s += t.values[static_cast<std::size_t>(k)];
        return s / (t.horizon() - t.horizon() / 2);
    };
    const double g = tail_mean(traces[0]);
    const double k = tail_mean(traces[1]);
    INFO("gd tail ", g, " kalman tail ", k);
    CHECK(g > k);
}
