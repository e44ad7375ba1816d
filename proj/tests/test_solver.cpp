// SPDX-License-Identifier: Apache-2.0
//
// mamimo - capacity maximization for movable-antenna MIMO links
// Copyright (C) 2026 The mamimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "oracles.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace mamimo;

namespace {

SolverConfig config_at(double snr_db) {
    SolverConfig cfg;
    cfg.power = std::pow(10.0, snr_db / 10.0);
    return cfg;
}

ChannelScene single_path_scene(Complex gain, double side) {
    ChannelScene scene;
    scene.tx_paths = {{0.7}, {1.9}};
    scene.rx_paths = {{2.2}, {0.4}};
    scene.sigma = ComplexMatrix::Constant(1, 1, gain);
    scene.tx_region = Region::square(side);
    scene.rx_region = Region::square(side);
    scene.min_distance = 0.5;
    return scene;
}

AntennaLayout packed(std::size_t count, const Region &region) {
    return circle_packing_init(count, region, 0.5);
}

ComplexMatrix random_covariance(oracle::Rng &rng, Eigen::Index n, double power) {
    const ComplexMatrix a = rng.matrix(n, n);
    ComplexMatrix q = a * a.adjoint();
    return q * (power / q.trace().real());
}

ComplexMatrix direct_inverse(const ComplexMatrix &columns, Eigen::Index excluded, double noise) {
    ComplexMatrix gram = ComplexMatrix::Identity(columns.rows(), columns.rows());
    for (Eigen::Index k = 0; k < columns.cols(); ++k)
        if (k != excluded)
            gram += columns.col(k) * columns.col(k).adjoint() / noise;
    return gram.inverse();
}

void check_monotone(const std::vector<double> &trace) {
    for (std::size_t i = 1; i < trace.size(); ++i)
        CHECK(trace[i] >= trace[i - 1] - 1e-9);
}

} // namespace

TEST_CASE("solve mode names") {
    for (auto mode : {SolveMode::full, SolveMode::sepm, SolveMode::miso, SolveMode::simo})
        CHECK(parse_solve_mode(to_string(mode)) == mode);
    CHECK_THROWS_AS(parse_solve_mode("joint"), ConfigError);
}

TEST_CASE("SolverConfig validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.power = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.outer_tolerance = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.max_sca_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("effective columns reproduce the channel") {
    oracle::Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto scene = random_scene(6, 1.0, 3.0, 0.5, 100 + trial);
        const auto tx = packed(3, scene.tx_region);
        const auto rx = packed(4, scene.rx_region);
        const ComplexMatrix h = oracle::channel(scene, tx.positions, rx.positions);
        const ComplexMatrix q = random_covariance(rng, 3, 2.0);
        const ComplexMatrix k = covariance_factor(q);
        CHECK((k * k.adjoint() - q).norm() < 1e-10);
        CHECK((effective_columns_rx(scene, tx, rx, q).adjoint() - h * k).norm() < 1e-10);

        const ComplexMatrix s = random_covariance(rng, 4, 2.0);
        const ComplexMatrix ks = covariance_factor(s);
        CHECK((effective_columns_tx(scene, tx, rx, s).adjoint() - h.adjoint() * ks).norm() < 1e-10);
        CHECK_THROWS_AS(effective_columns_rx(scene, tx, rx, s), ShapeMismatch);
    }
}

TEST_CASE("leave-one-out and rank-two inverse updates") {
    oracle::Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + trial % 4;
        const Eigen::Index m = 2 + (trial / 4) % 4;
        const double noise = rng.uniform(0.1, 2.0);
        ComplexMatrix cols = rng.matrix(n, m);
        for (Eigen::Index ex = 0; ex < m; ++ex)
            CHECK((leave_one_out_inverse(cols, ex, noise) - direct_inverse(cols, ex, noise)).norm() <
                  1e-8);

        // Carry the inverse across the sweep, moving each column after it is visited.
        ComplexMatrix inverse = leave_one_out_inverse(cols, 0, noise);
        for (Eigen::Index k = 1; k < m; ++k) {
            cols.col(k - 1) = rng.matrix(n, 1);
            inverse = rank_two_update(inverse, cols.col(k - 1), cols.col(k), noise);
            CHECK((inverse - direct_inverse(cols, k, noise)).norm() < 1e-8);
        }
    }
}

TEST_CASE("per-antenna objectives split the capacity") {
    oracle::Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto scene = random_scene(5, 1.0, 3.0, 0.5, 200 + trial);
        const auto tx = packed(3, scene.tx_region);
        const auto rx = packed(4, scene.rx_region);
        const ComplexMatrix h = oracle::channel(scene, tx.positions, rx.positions);
        const double noise = rng.uniform(0.2, 2.0);

        const ComplexMatrix q = random_covariance(rng, 3, 5.0);
        const double total = oracle::capacity(h, q, noise);
        const ComplexMatrix w = effective_columns_rx(scene, tx, rx, q);
        for (Eigen::Index m = 0; m < 4; ++m) {
            const ComplexMatrix inverse = leave_one_out_inverse(w, m, noise);
            const auto obj = build_rx_objective(scene, tx, inverse, covariance_factor(q));
            const double rest = -oracle::log2_det(inverse);
            const double own = std::log2(1.0 + obj.value(rx.positions[m]) / noise);
            CHECK(rest + own == doctest::Approx(total).epsilon(1e-9));
        }

        const ComplexMatrix s = random_covariance(rng, 4, 5.0);
        const double reverse = oracle::capacity(h.adjoint(), s, noise);
        const ComplexMatrix p = effective_columns_tx(scene, tx, rx, s);
        for (Eigen::Index n = 0; n < 3; ++n) {
            const ComplexMatrix inverse = leave_one_out_inverse(p, n, noise);
            const auto obj = build_tx_objective(scene, rx, inverse, covariance_factor(s));
            const double own = std::log2(1.0 + obj.value(tx.positions[n]) / noise);
            CHECK(-oracle::log2_det(inverse) + own == doctest::Approx(reverse).epsilon(1e-9));
        }
    }
}

TEST_CASE("all-zero channel") {
    auto scene = single_path_scene({0.0, 0.0}, 3.0);
    const auto tx = packed(2, scene.tx_region);
    const auto rx = packed(2, scene.rx_region);
    CHECK_THROWS_AS(solve(scene, tx, rx, SolverConfig{}), AllZeroChannel);
}

TEST_CASE("single antenna single path capacity") {
    const Complex gain(0.6, -0.3);
    const auto scene = single_path_scene(gain, 2.0);
    const auto cfg = config_at(10.0);
    const auto one_tx = AntennaLayout{{{0.3, -0.2}}, 0.5};
    const auto one_rx = AntennaLayout{{{-0.1, 0.4}}, 0.5};
    const auto report = solve(scene, one_tx, one_rx, cfg);
    const double expected = std::log2(1.0 + cfg.power * std::norm(gain) / cfg.noise_power);
    CHECK(report.final_metrics.capacity == doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.capacity_trace.front() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.converged);
}

TEST_CASE("zero outer iterations returns the initial point") {
    const auto scene = random_scene(10, 1.0, 3.0, 0.5, 7);
    const auto tx = packed(4, scene.tx_region);
    const auto rx = packed(4, scene.rx_region);
    auto cfg = config_at(5.0);
    cfg.max_outer_iters = 0;
    const auto report = solve(scene, tx, rx, cfg);
    REQUIRE(report.capacity_trace.size() == 1);
    CHECK(report.outer_iterations == 0);
    CHECK(report.tx_layout.positions == tx.positions);
    CHECK(report.rx_layout.positions == rx.positions);
    CHECK(report.capacity_trace[0] ==
          doctest::Approx(water_filled_capacity(assemble_channel(scene, tx, rx), cfg.power, 1.0)));
}

TEST_CASE("full solve is monotone, feasible and consistent") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const auto scene = random_scene(10, 1.0, 3.0, 0.5, seed);
        const auto tx = packed(4, scene.tx_region);
        const auto rx = packed(4, scene.rx_region);
        const auto cfg = config_at(seed % 2 ? 5.0 : 15.0);
        const auto report = solve(scene, tx, rx, cfg);
        check_monotone(report.capacity_trace);
        CHECK(is_feasible(report.tx_layout, scene.tx_region));
        CHECK(is_feasible(report.rx_layout, scene.rx_region));
        CHECK(report.final_metrics.capacity ==
              doctest::Approx(report.capacity_trace.back()).epsilon(1e-12));
        const ComplexMatrix h = oracle::channel(scene, report.tx_layout.positions,
                                                report.rx_layout.positions);
        CHECK(oracle::capacity(h, report.covariance, cfg.noise_power) ==
              doctest::Approx(report.final_metrics.capacity).epsilon(1e-9));
        CHECK(report.covariance.trace().real() == doctest::Approx(cfg.power));
        CHECK(report.capacity_trace.size() == static_cast<std::size_t>(report.outer_iterations) + 1);
        CHECK(report.sca_iterations > 0);
    }
}

TEST_CASE("restarting from a solution does not lose capacity") {
    const auto scene = random_scene(10, 1.0, 3.0, 0.5, 21);
    const auto cfg = config_at(10.0);
    const auto first = solve(scene, packed(4, scene.tx_region), packed(4, scene.rx_region), cfg);
    const auto second = solve(scene, first.tx_layout, first.rx_layout, cfg);
    CHECK(second.capacity_trace.front() ==
          doctest::Approx(first.final_metrics.capacity).epsilon(1e-12));
    CHECK(second.final_metrics.capacity >= first.final_metrics.capacity - 1e-9);
}

TEST_CASE("sepm") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto scene = random_scene(10, 1.0, 3.0, 0.5, seed);
        const auto cfg = config_at(-15.0);
        const auto report =
            solve_sepm(scene, packed(4, scene.tx_region), packed(4, scene.rx_region), cfg);
        CHECK(report.mode == SolveMode::sepm);
        check_monotone(report.capacity_trace);
        check_monotone(report.strongest_eig_trace);
        CHECK(report.final_metrics.strongest_eig_power ==
              doctest::Approx(report.strongest_eig_trace.back()).epsilon(1e-9));
        CHECK(report.final_metrics.capacity >= report.capacity_trace.back() - 1e-12);
        CHECK(is_feasible(report.tx_layout, scene.tx_region));
        CHECK(is_feasible(report.rx_layout, scene.rx_region));
    }
}

TEST_CASE("miso and simo") {
    SUBCASE("single path gains add up over the moving array") {
        const Complex gain(0.8, 0.1);
        const auto scene = single_path_scene(gain, 3.0);
        const auto cfg = config_at(0.0);
        const auto miso = solve_miso(scene, packed(4, scene.tx_region), cfg);
        CHECK(miso.final_metrics.total_power == doctest::Approx(4.0 * std::norm(gain)));
        CHECK(miso.final_metrics.capacity ==
              doctest::Approx(std::log2(1.0 + cfg.power * 4.0 * std::norm(gain))));
        const auto simo = solve_simo(scene, packed(3, scene.rx_region), cfg);
        CHECK(simo.final_metrics.capacity ==
              doctest::Approx(std::log2(1.0 + cfg.power * 3.0 * std::norm(gain))));
        CHECK(simo.covariance.rows() == 1);
    }
    SUBCASE("multipath traces are monotone") {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            const auto scene = random_scene(10, 1.0, 3.0, 0.5, seed);
            const auto cfg = config_at(10.0);
            const auto miso = solve_miso(scene, packed(4, scene.tx_region), cfg);
            check_monotone(miso.strongest_eig_trace);
            REQUIRE(miso.rx_layout.size() == 1);
            CHECK(miso.covariance.trace().real() == doctest::Approx(cfg.power));
            const ComplexMatrix h = assemble_channel(scene, miso.tx_layout, miso.rx_layout);
            CHECK(oracle::capacity(h, miso.covariance, 1.0) ==
                  doctest::Approx(miso.final_metrics.capacity).epsilon(1e-9));
            const auto simo = solve_simo(scene, packed(4, scene.rx_region), cfg);
            check_monotone(simo.strongest_eig_trace);
            REQUIRE(simo.tx_layout.size() == 1);
        }
    }
    SUBCASE("dispatch checks sizes") {
        const auto scene = random_scene(4, 1.0, 3.0, 0.5, 3);
        auto cfg = config_at(0.0);
        cfg.mode = SolveMode::miso;
        CHECK_THROWS_AS(optimize(scene, packed(2, scene.tx_region), packed(2, scene.rx_region), cfg),
                        ShapeMismatch);
        CHECK(optimize(scene, packed(2, scene.tx_region), packed(1, scene.rx_region), cfg).mode ==
              SolveMode::miso);
        cfg.mode = SolveMode::simo;
        CHECK_THROWS_AS(optimize(scene, packed(2, scene.tx_region), packed(2, scene.rx_region), cfg),
                        ShapeMismatch);
    }
}

TEST_CASE("infeasible initial layouts are rejected") {
    const auto scene = random_scene(4, 1.0, 3.0, 0.5, 5);
    const AntennaLayout crowded{{{0.0, 0.0}, {0.1, 0.0}}, 0.5};
    CHECK_THROWS_AS(solve(scene, crowded, packed(2, scene.rx_region), SolverConfig{}), ConfigError);
    const AntennaLayout outside{{{5.0, 0.0}}, 0.5};
    CHECK_THROWS_AS(solve(scene, outside, packed(2, scene.rx_region), SolverConfig{}), ConfigError);
}

TEST_CASE("custom updater through alternating_optimize") {
    const auto scene = random_scene(8, 1.0, 3.0, 0.5, 9);
    const auto tx = packed(3, scene.tx_region);
    const auto rx = packed(3, scene.rx_region);
    int calls = 0;
    const PositionUpdater stay = [&](const QuadraticFormObjective &, Position start, const Region &,
                                     const std::vector<Position> &, double) {
        ++calls;
        return start;
    };
    const auto report = alternating_optimize(scene, tx, rx, config_at(5.0), SweepPlan{true, false}, stay);
    CHECK(calls == 3);
    CHECK(report.converged);
    CHECK(report.capacity_trace.size() == 2);
    CHECK(report.capacity_trace[0] == report.capacity_trace[1]);
}

TEST_CASE("report_to_json") {
    const auto scene = random_scene(6, 1.0, 3.0, 0.5, 4);
    const auto report = solve(scene, packed(2, scene.tx_region), packed(2, scene.rx_region),
                              config_at(5.0));
    const auto doc = nlohmann::json::parse(report_to_json(report));
    for (const char *key : {"mode", "tx_layout", "rx_layout", "min_distance", "covariance",
                            "capacity_trace", "strongest_eig_trace", "final_metrics",
                            "outer_iterations", "sca_iterations", "converged"})
        CHECK(doc.contains(key));
    CHECK(doc["mode"] == "full");
    CHECK(doc["tx_layout"].size() == 2);
    CHECK(doc["covariance"][0][0].size() == 2);
    CHECK(doc["final_metrics"]["capacity"].get<double>() ==
          doctest::Approx(report.final_metrics.capacity));
}
