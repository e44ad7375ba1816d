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

#include <algorithm>

using namespace mamimo;

namespace {

SolverConfig config_at(double snr_db) {
    SolverConfig cfg;
    cfg.power = std::pow(10.0, snr_db / 10.0);
    return cfg;
}

// Water-filled capacity of a channel with at most two nonzero singular values.
double two_stream_capacity(const ComplexMatrix &h, double power, double noise) {
    const Eigen::JacobiSVD<ComplexMatrix> svd(h);
    const auto s = svd.singularValues();
    const double g1 = s(0) * s(0);
    const double g2 = s.size() > 1 ? s(1) * s(1) : 0.0;
    if (g2 <= 1e-20 * g1)
        return std::log2(1.0 + power * g1 / noise);
    const auto split = oracle::two_stream(g1, g2, power, noise);
    return std::log2(1.0 + split.p1 * g1 / noise) + std::log2(1.0 + split.p2 * g2 / noise);
}

void check_recomputable(const ChannelScene &scene, const SchemeResult &r, const SolverConfig &cfg) {
    const ComplexMatrix h = oracle::channel(scene, r.tx_layout.positions, r.rx_layout.positions);
    const auto m = metrics_of(h, cfg.power, cfg.noise_power);
    CHECK(r.metrics.capacity == doctest::Approx(m.capacity).epsilon(1e-9));
    CHECK(r.metrics.total_power == doctest::Approx(h.squaredNorm()).epsilon(1e-9));
    CHECK(r.metrics.strongest_eig_power == doctest::Approx(m.strongest_eig_power).epsilon(1e-9));
}

} // namespace

TEST_CASE("scheme names") {
    for (auto tag : {SchemeTag::FPA, SchemeTag::AS, SchemeTag::RMA, SchemeTag::APS, SchemeTag::SEPM,
                     SchemeTag::PROPOSED})
        CHECK(parse_scheme(to_string(tag)) == tag);
    CHECK(parse_scheme("proposed") == SchemeTag::PROPOSED);
    CHECK(parse_scheme("Aps") == SchemeTag::APS);
    CHECK_THROWS_AS(parse_scheme("random"), ConfigError);
}

TEST_CASE("fpa_layout") {
    const auto four = fpa_layout(4, 1.0);
    REQUIRE(four.size() == 4);
    const double xs[] = {-0.75, -0.25, 0.25, 0.75};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(four.positions[i].x == doctest::Approx(xs[i]));
        CHECK(four.positions[i].y == 0.0);
    }
    CHECK(four.min_distance == 0.5);

    const auto vertical = fpa_layout(3, 2.0, ArrayAxis::y, {1.0, 1.0});
    CHECK(vertical.positions[0] == Position{1.0, 0.0});
    CHECK(vertical.positions[2] == Position{1.0, 2.0});
    CHECK(fpa_layout(1, 1.0).positions[0] == Position{0.0, 0.0});
    CHECK(is_feasible(four, Region::square(2.0)));
}

TEST_CASE("selection candidates contain the fixed array") {
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto cands = selection_candidates(n, 1.0);
        CHECK(cands.size() == 2 * n);
        CHECK(is_feasible(cands, Region::square(2.0 * n)));
        const auto fpa = fpa_layout(n, 1.0);
        auto it = std::search(cands.positions.begin(), cands.positions.end(),
                              fpa.positions.begin(), fpa.positions.end(),
                              [](Position a, Position b) { return distance(a, b) < 1e-12; });
        CHECK(it != cands.positions.end());
    }
}

TEST_CASE("antenna selection against brute force") {
    const auto cfg = config_at(10.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto scene = random_scene(10, 1.0, 3.0, 0.5, seed);
        const auto as = run_antenna_selection(scene, cfg.power, cfg.noise_power, 2, 2);
        const auto fpa = run_fpa(scene, 2, 2, cfg.power, cfg.noise_power);
        CHECK(as.metrics.capacity >= fpa.metrics.capacity - 1e-12);
        check_recomputable(scene, as, cfg);

        const auto tx_c = selection_candidates(2, 1.0).positions;
        const auto rx_c = selection_candidates(2, 1.0).positions;
        double best = 0.0;
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = a + 1; b < 4; ++b)
                for (std::size_t c = 0; c < 4; ++c)
                    for (std::size_t d = c + 1; d < 4; ++d) {
                        const ComplexMatrix h =
                            oracle::channel(scene, {tx_c[a], tx_c[b]}, {rx_c[c], rx_c[d]});
                        best = std::max(best, two_stream_capacity(h, cfg.power, cfg.noise_power));
                    }
        CHECK(as.metrics.capacity == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("antenna selection with one antenna per side") {
    const auto scene = random_scene(6, 1.0, 3.0, 0.5, 42);
    const auto as = run_antenna_selection(scene, 1.0, 1.0, 1, 1);
    const auto cands = selection_candidates(1, 1.0).positions;
    double best = 0.0;
    for (const auto &t : cands)
        for (const auto &r : cands)
            best = std::max(best, std::norm(oracle::channel(scene, {t}, {r})(0, 0)));
    CHECK(as.metrics.total_power == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("fpa metrics") {
    const auto scene = random_scene(10, 1.0, 3.0, 0.5, 3);
    const auto cfg = config_at(15.0);
    const auto fpa = run_fpa(scene, 4, 4, cfg.power, cfg.noise_power);
    CHECK(fpa.scheme == SchemeTag::FPA);
    CHECK(fpa.capacity_trace.empty());
    check_recomputable(scene, fpa, cfg);
}

TEST_CASE("rma") {
    SUBCASE("single path leaves nothing to gain") {
        ChannelScene scene;
        scene.tx_paths = {{0.4}, {1.2}};
        scene.rx_paths = {{1.6}, {2.9}};
        scene.sigma = ComplexMatrix::Constant(1, 1, Complex(0.5, 0.5));
        scene.tx_region = Region::square(3.0);
        scene.rx_region = Region::square(3.0);
        const auto cfg = config_at(5.0);
        const auto rma = run_rma(scene, 4, std::nullopt, 1, cfg);
        const auto fpa = run_fpa(scene, 4, 1, cfg.power, cfg.noise_power);
        CHECK(rma.metrics.capacity == doctest::Approx(fpa.metrics.capacity).epsilon(1e-12));
    }
    SUBCASE("transmit array stays fixed and the trace rises") {
        const auto cfg = config_at(15.0);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto scene = random_scene(10, 1.0, 3.0, 0.5, seed);
            const auto rma = run_rma(scene, 4, std::nullopt, 4, cfg);
            CHECK(rma.tx_layout.positions == fpa_layout(4, 1.0).positions);
            CHECK(is_feasible(rma.rx_layout, scene.rx_region));
            for (std::size_t i = 1; i < rma.capacity_trace.size(); ++i)
                CHECK(rma.capacity_trace[i] >= rma.capacity_trace[i - 1] - 1e-9);
            check_recomputable(scene, rma, cfg);
        }
    }
    SUBCASE("explicit initial layout") {
        const auto scene = random_scene(10, 1.0, 3.0, 0.5, 8);
        auto cfg = config_at(5.0);
        cfg.max_outer_iters = 0;
        const AntennaLayout init{{{-1.0, -1.0}, {1.0, 1.0}}, 0.5};
        const auto rma = run_rma(scene, 2, init, 2, cfg);
        CHECK(rma.rx_layout.positions == init.positions);
    }
}

TEST_CASE("aps grid") {
    CHECK(grid_count(4.0, 0.5) == 9);
    CHECK(grid_count(3.0, 0.5) == 7);
    CHECK(grid_count(1.0, 0.3) == 4);
    CHECK(grid_nodes(Region::square(4.0), 0.5).size() == 81);
    const auto nodes = grid_nodes(Region::square(3.0), 0.5);
    CHECK(nodes.size() == 49);
    CHECK(nodes.front() == Position{-1.5, -1.5});
    const Region disc(Circle{{0.0, 0.0}, 1.0});
    for (const auto &p : grid_nodes(disc, 0.25))
        CHECK(disc.contains(p));
}

TEST_CASE("aps search") {
    const auto cfg = config_at(15.0);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto scene = random_scene(10, 1.0, 3.0, 0.5, seed);
        const auto aps = run_aps(scene, 4, 4, cfg);
        for (std::size_t i = 1; i < aps.capacity_trace.size(); ++i)
            CHECK(aps.capacity_trace[i] >= aps.capacity_trace[i - 1] - 1e-9);
        CHECK(is_feasible(aps.tx_layout, scene.tx_region));
        CHECK(is_feasible(aps.rx_layout, scene.rx_region));
        const auto nodes = grid_nodes(scene.rx_region, 0.5);
        for (const auto &layout : {aps.tx_layout, aps.rx_layout})
            for (const auto &p : layout.positions)
                CHECK(std::any_of(nodes.begin(), nodes.end(),
                                  [&](Position n) { return distance(n, p) < 1e-12; }));
        check_recomputable(scene, aps, cfg);
    }
}

TEST_CASE("run_scheme dispatch") {
    const auto scene = random_scene(6, 1.0, 3.0, 0.5, 11);
    const auto cfg = config_at(0.0);
    for (auto tag : {SchemeTag::FPA, SchemeTag::AS, SchemeTag::RMA, SchemeTag::APS, SchemeTag::SEPM,
                     SchemeTag::PROPOSED}) {
        const auto r = run_scheme(tag, scene, 2, 2, cfg);
        CHECK(r.scheme == tag);
        CHECK(r.metrics.capacity > 0.0);
        CHECK(r.tx_layout.size() == 2);
        CHECK(r.rx_layout.size() == 2);
    }
    CHECK(run_scheme(SchemeTag::PROPOSED, scene, 3, 1, cfg).rx_layout.size() == 1);
    CHECK(run_scheme(SchemeTag::PROPOSED, scene, 1, 3, cfg).tx_layout.size() == 1);
}

TEST_CASE("proposed beats its own starting point") {
    const auto cfg = config_at(15.0);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto scene = random_scene(10, 1.0, 3.0, 0.5, seed);
        const auto p = run_proposed(scene, 4, 4, cfg);
        REQUIRE_FALSE(p.capacity_trace.empty());
        CHECK(p.metrics.capacity >= p.capacity_trace.front() - 1e-9);
        check_recomputable(scene, p, cfg);
    }
}
