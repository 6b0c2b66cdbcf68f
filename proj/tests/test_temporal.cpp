#include "doctest.h"

#include <cmath>

#include "netsis/temporal.hpp"
#include "netsis/transition.hpp"

using namespace netsis;

TEST_CASE("constant interval update times") {
    const auto tn3 = constant_interval_network(
        {complete_graph(4), complete_graph(4), complete_graph(4)}, 1.0);
    CHECK(tn3.update_times == std::vector<double>{0.0, 1.0, 2.0, 3.0});

    const auto tn1 = constant_interval_network({complete_graph(4)}, 5.0);
    CHECK(tn1.update_times == std::vector<double>{0.0, 5.0});

    const auto fine = constant_interval_network({complete_graph(4), complete_graph(4)}, 0.01);
    CHECK(fine.update_times[1] == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(fine.update_times[2] == doctest::Approx(0.02).epsilon(1e-15));

    CHECK_THROWS_AS(constant_interval_network({complete_graph(4)}, 0.0), std::invalid_argument);
}

TEST_CASE("temporal network validation") {
    TemporalNetwork tn;
    tn.graphs = {complete_graph(4), complete_graph(5)};
    tn.update_times = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(tn.validate(), std::invalid_argument);

    tn.graphs = {complete_graph(4), complete_graph(4)};
    tn.update_times = {0.0, 1.0};
    CHECK_THROWS_AS(tn.validate(), std::invalid_argument);

    tn.update_times = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(tn.validate(), std::invalid_argument);
}

TEST_CASE("degenerate sequence matches the static run bitwise") {
    const auto g = erdos_renyi(40, 0.4, 21);
    const auto tn = constant_interval_network({g, g, g}, 2.0);
    const auto v0 = uniform_state(40, 0.7);

    const auto temporal = integrate_temporal(tn, {0.1, 1.0}, v0, 0.01);
    const auto single = integrate(g, {0.1, 1.0}, v0, 6.0, 0.01);

    REQUIRE(temporal.size() == single.size());
    for (std::size_t k = 0; k < temporal.size(); ++k) {
        CHECK(temporal.prevalence[k] == single.prevalence[k]);
        CHECK(temporal.states[k] == single.states[k]);
    }
}

TEST_CASE("single interval equals static integrate") {
    const auto g = erdos_renyi(30, 0.5, 2);
    const auto tn = constant_interval_network({g}, 3.0);
    const auto v0 = uniform_state(30, 1.0);
    const auto a = integrate_temporal(tn, {0.1, 1.0}, v0, 0.01);
    const auto b = integrate(g, {0.1, 1.0}, v0, 3.0, 0.01);
    CHECK(a.prevalence == b.prevalence);
}

TEST_CASE("derivative jumps but the state is continuous") {
    const auto tn = constant_interval_network({complete_graph(20), star_graph(20)}, 1.0);
    const auto traj = integrate_temporal(tn, {0.1, 1.0}, uniform_state(20, 0.5), 0.01);
    // one sample per grid point, no duplicated boundary rows
    for (std::size_t k = 1; k < traj.size(); ++k)
        CHECK(traj.times[k] > traj.times[k - 1]);
    CHECK(traj.size() == 201);
}

TEST_CASE("update times must separate on the grid") {
    const auto tn =
        constant_interval_network({complete_graph(5), complete_graph(5), complete_graph(5)},
                                  0.001);
    CHECK_THROWS_AS(integrate_temporal(tn, {0.1, 1.0}, uniform_state(5, 1.0), 0.01),
                    std::invalid_argument);
}

TEST_CASE("snap error is reported") {
    const auto tn = constant_interval_network({complete_graph(5), complete_graph(5)}, 0.015);
    SnapInfo snap;
    integrate_temporal(tn, {0.1, 1.0}, uniform_state(5, 1.0), 0.01, &snap);
    CHECK(snap.max_snap_error == doctest::Approx(0.005).epsilon(1e-9));
}

TEST_CASE("long intervals forget the first graph") {
    // G2 and G3 fixed, G1 varies; with Delta t comfortably above the
    // supercritical convergence bound, y(t_2) depends on G2 only.
    const double r = 1e-4;
    const double tau = 0.1;
    const double delta_t = 50.0;
    const auto g2 = complete_bipartite(25, 25);
    const auto g3 = complete_graph(50);
    CHECK(combined_upper_bound_growth_only(g2, tau, r) < delta_t);
    CHECK(combined_upper_bound_growth_only(g3, tau, r) < delta_t);

    double y_min = 1.0, y_max = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double p = 0.1 * (i + 1);
        const auto g1 = erdos_renyi(50, p, 1000 + static_cast<RngSeed>(i));
        const auto tn = constant_interval_network({g1, g2, g3}, delta_t);
        const auto traj = integrate_temporal(tn, {tau, 1.0}, uniform_state(50, 1.0), 0.01);
        const double y_t2 = traj.prevalence[10000]; // t = 100 = t_2
        y_min = std::min(y_min, y_t2);
        y_max = std::max(y_max, y_t2);
    }
    CHECK(y_max - y_min < 2.0 * r);
}

TEST_CASE("quenched prediction") {
    SUBCASE("repeated graph with a long interval predicts within r") {
        const double r = 1e-4;
        const auto g = erdos_renyi(50, 0.5, 31);
        const auto tn = constant_interval_network({g, g}, 40.0);
        const auto rep = quenched_predict(tn, {0.1, 1.0}, r, 0.01, uniform_state(50, 1.0));
        CHECK(rep.max_abs_error() < r);
        CHECK(rep.predicted.size() == 1);
        CHECK_FALSE(rep.predicted[0].die_out_floor);
    }
    SUBCASE("subcritical predecessor floors the start at r") {
        const double r = 1e-4;
        const auto weak = erdos_renyi(50, 0.05, 8); // R0 well below 1 at tau = 0.1
        REQUIRE(basic_reproduction_number(weak, 0.1) < 1.0);
        const auto strong = erdos_renyi(50, 0.6, 9);
        const auto tn = constant_interval_network({weak, strong}, 30.0);
        const auto rep = quenched_predict(tn, {0.1, 1.0}, r, 0.01, uniform_state(50, 1.0));
        REQUIRE(rep.predicted.size() == 1);
        CHECK(rep.predicted[0].die_out_floor);
        for (double v : rep.predicted[0].trajectory.states.front())
            CHECK(v == doctest::Approx(r).epsilon(1e-12));
    }
    SUBCASE("errors shrink as the inter-update time grows") {
        std::vector<Graph> graphs;
        Rng rng(555);
        for (int m = 0; m < 6; ++m)
            graphs.push_back(erdos_renyi(50, 0.3 + 0.5 * rng.uniform(), derive_seed(555, m)));

        auto max_end_error = [&](double delta_t) {
            const auto tn = constant_interval_network(graphs, delta_t);
            const auto rep =
                quenched_predict(tn, {0.1, 1.0}, 1e-4, 0.01, uniform_state(50, 1.0));
            double worst = 0.0;
            for (const auto& pred : rep.predicted) {
                const std::size_t last =
                    static_cast<std::size_t>(std::llround((pred.interval + 1) * delta_t / 0.01));
                worst = std::max(worst, rep.abs_error[last]);
            }
            return worst;
        };
        CHECK(max_end_error(10.0) < max_end_error(1.0));
    }
    SUBCASE("needs two intervals") {
        const auto tn = constant_interval_network({complete_graph(5)}, 1.0);
        CHECK_THROWS_AS(quenched_predict(tn, {0.1, 1.0}, 1e-4, 0.01, uniform_state(5, 1.0)),
                        std::invalid_argument);
    }
}
