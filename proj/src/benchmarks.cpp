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

#include "mamimo/benchmarks.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>

namespace mamimo {

std::string to_string(SchemeTag tag) {
    switch (tag) {
    case SchemeTag::FPA: return "FPA";
    case SchemeTag::AS: return "AS";
    case SchemeTag::RMA: return "RMA";
    case SchemeTag::APS: return "APS";
    case SchemeTag::SEPM: return "SEPM";
    case SchemeTag::PROPOSED: return "PROPOSED";
    }
    return "FPA";
}

SchemeTag parse_scheme(const std::string &name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto tag : {SchemeTag::FPA, SchemeTag::AS, SchemeTag::RMA, SchemeTag::APS,
                     SchemeTag::SEPM, SchemeTag::PROPOSED})
        if (upper == to_string(tag))
            return tag;
    throw ConfigError("unknown scheme '" + name + "'");
}

namespace {

AntennaLayout linear_array(long first, long last, double offset, double wavelength,
                           ArrayAxis axis, Position center) {
    AntennaLayout layout;
    layout.min_distance = wavelength / 2.0;
    for (long i = first; i <= last; ++i) {
        const double along = (static_cast<double>(i) - offset) * wavelength / 2.0;
        layout.positions.push_back(axis == ArrayAxis::x ? Position{center.x + along, center.y}
                                                        : Position{center.x, center.y + along});
    }
    return layout;
}

SchemeResult finish(SchemeTag tag, const ChannelScene &scene, AntennaLayout tx, AntennaLayout rx,
                    double power, double noise_power) {
    SchemeResult out;
    out.scheme = tag;
    out.metrics = metrics_of(assemble_channel(scene, tx, rx), power, noise_power);
    out.tx_layout = std::move(tx);
    out.rx_layout = std::move(rx);
    return out;
}

SchemeResult from_report(SchemeTag tag, SolveReport report) {
    SchemeResult out;
    out.scheme = tag;
    out.metrics = report.final_metrics;
    out.outer_iterations = report.outer_iterations;
    out.capacity_trace = std::move(report.capacity_trace);
    out.tx_layout = std::move(report.tx_layout);
    out.rx_layout = std::move(report.rx_layout);
    return out;
}

// Bitmasks over `total` bits with exactly `chosen` bits set, ascending.
std::vector<std::uint32_t> subsets(std::size_t total, std::size_t chosen) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << total); ++mask)
        if (static_cast<std::size_t>(std::popcount(mask)) == chosen)
            out.push_back(mask);
    return out;
}

std::vector<Eigen::Index> indices_of(std::uint32_t mask) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1u)
            out.push_back(i);
    return out;
}

AntennaLayout pick(const AntennaLayout &full, const std::vector<Eigen::Index> &idx) {
    AntennaLayout out;
    out.min_distance = full.min_distance;
    for (auto i : idx)
        out.positions.push_back(full.positions[static_cast<std::size_t>(i)]);
    return out;
}

Region enclosing(const Region &region, const AntennaLayout &layout) {
    if (is_feasible(layout, region))
        return region;
    double reach = 0.0;
    for (const auto &p : layout.positions)
        reach = std::max({reach, std::abs(p.x), std::abs(p.y)});
    return Region::square(2.0 * reach + 1.0);
}

double grid_step_or(double step, double min_distance) { return step > 0.0 ? step : min_distance; }

AntennaLayout snap_to_grid(const AntennaLayout &layout, const std::vector<Position> &nodes,
                           const Region &region) {
    AntennaLayout out;
    out.min_distance = layout.min_distance;
    for (const auto &p : layout.positions) {
        const Position *best = nullptr;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const auto &node : nodes) {
            const double d = distance(node, p);
            if (d < best_dist && is_feasible_position(node, region, out.positions, out.min_distance)) {
                best = &node;
                best_dist = d;
            }
        }
        if (best == nullptr)
            throw InfeasibleRegion("no free grid node left for the initial layout");
        out.positions.push_back(*best);
    }
    return out;
}

} // namespace

AntennaLayout fpa_layout(std::size_t count, double wavelength, ArrayAxis axis, Position center) {
    if (count == 0)
        throw ConfigError("array needs at least one element");
    const auto n = static_cast<long>(count);
    return linear_array(0, n - 1, (static_cast<double>(n) - 1.0) / 2.0, wavelength, axis, center);
}

AntennaLayout selection_candidates(std::size_t count, double wavelength, ArrayAxis axis,
                                   Position center) {
    if (count == 0)
        throw ConfigError("array needs at least one element");
    const auto n = static_cast<long>(count);
    return linear_array(-(n / 2), n - 1 + (n + 1) / 2, (static_cast<double>(n) - 1.0) / 2.0,
                        wavelength, axis, center);
}

SchemeResult run_fpa(const ChannelScene &scene, std::size_t tx_count, std::size_t rx_count,
                     double power, double noise_power, ArrayAxis axis) {
    return finish(SchemeTag::FPA, scene,
                  fpa_layout(tx_count, scene.wavelength, axis, scene.tx_region.center()),
                  fpa_layout(rx_count, scene.wavelength, axis, scene.rx_region.center()), power,
                  noise_power);
}

SchemeResult run_antenna_selection(const ChannelScene &scene, double power, double noise_power,
                                   std::size_t tx_count, std::size_t rx_count, ArrayAxis axis) {
    if (tx_count == 0 || rx_count == 0 || tx_count > 15 || rx_count > 15)
        throw ConfigError("antenna selection supports 1 to 15 antennas per side");
    const auto tx_all = selection_candidates(tx_count, scene.wavelength, axis, scene.tx_region.center());
    const auto rx_all = selection_candidates(rx_count, scene.wavelength, axis, scene.rx_region.center());
    const ComplexMatrix h_all = assemble_channel(scene, tx_all, rx_all);
    if (h_all.cwiseAbs().maxCoeff() == 0.0)
        throw AllZeroChannel();

    const auto tx_sets = subsets(2 * tx_count, tx_count);
    const auto rx_sets = subsets(2 * rx_count, rx_count);
    double best = -1.0;
    std::uint32_t best_tx = 0, best_rx = 0;
    for (auto rx_mask : rx_sets) {
        const auto rows = indices_of(rx_mask);
        for (auto tx_mask : tx_sets) {
            const auto cols = indices_of(tx_mask);
            const ComplexMatrix h = h_all(rows, cols);
            if (h.cwiseAbs().maxCoeff() == 0.0)
                continue;
            const double c = water_filled_capacity(h, power, noise_power);
            if (c > best) {
                best = c;
                best_tx = tx_mask;
                best_rx = rx_mask;
            }
        }
    }
    if (best < 0.0)
        throw AllZeroChannel();
    return finish(SchemeTag::AS, scene, pick(tx_all, indices_of(best_tx)),
                  pick(rx_all, indices_of(best_rx)), power, noise_power);
}

SchemeResult run_rma(const ChannelScene &scene, std::size_t tx_count,
                     const std::optional<AntennaLayout> &init_rx, std::size_t rx_count,
                     const SolverConfig &cfg, ArrayAxis axis) {
    const auto tx = fpa_layout(tx_count, scene.wavelength, axis, scene.tx_region.center());
    const auto rx = init_rx ? *init_rx
                            : circle_packing_init(rx_count, scene.rx_region, scene.min_distance);
    // The transmit array never moves, so its region only has to hold it.
    ChannelScene frozen = scene;
    frozen.tx_region = enclosing(scene.tx_region, tx);
    int sca_count = 0;
    auto report = alternating_optimize(frozen, tx, rx, cfg, SweepPlan{true, false},
                                       sca_updater(cfg, &sca_count));
    return from_report(SchemeTag::RMA, std::move(report));
}

std::size_t grid_count(double extent, double step) {
    if (!(step > 0.0) || !(extent >= 0.0))
        throw ConfigError("grid needs a positive step and a non-negative extent");
    return static_cast<std::size_t>(std::floor(extent / step + 1e-9)) + 1;
}

std::vector<Position> grid_nodes(const Region &region, double step) {
    double x0, y0, width, height;
    if (region.is_rectangle()) {
        const auto &r = region.rectangle();
        x0 = r.x_low;
        y0 = r.y_low;
        width = r.x_high - r.x_low;
        height = r.y_high - r.y_low;
    } else {
        const auto &c = region.circle();
        x0 = c.center.x - c.radius;
        y0 = c.center.y - c.radius;
        width = height = 2.0 * c.radius;
    }
    const std::size_t nx = grid_count(width, step), ny = grid_count(height, step);
    std::vector<Position> nodes;
    nodes.reserve(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const Position p{x0 + static_cast<double>(i) * step, y0 + static_cast<double>(j) * step};
            if (region.contains(p))
                nodes.push_back(p);
        }
    return nodes;
}

SchemeResult run_aps(const ChannelScene &scene, std::size_t tx_count, std::size_t rx_count,
                     const SolverConfig &cfg, double grid_step) {
    const double step = grid_step_or(grid_step, scene.min_distance);
    const auto tx_nodes = grid_nodes(scene.tx_region, step);
    const auto rx_nodes = grid_nodes(scene.rx_region, step);
    const auto tx = snap_to_grid(circle_packing_init(tx_count, scene.tx_region, scene.min_distance),
                                 tx_nodes, scene.tx_region);
    const auto rx = snap_to_grid(circle_packing_init(rx_count, scene.rx_region, scene.min_distance),
                                 rx_nodes, scene.rx_region);

    const PositionUpdater search = [step](const QuadraticFormObjective &obj, Position start,
                                          const Region &region, const std::vector<Position> &others,
                                          double min_distance) {
        Position best = start;
        double best_value = obj.value(start);
        for (const auto &node : grid_nodes(region, step)) {
            if (!is_feasible_position(node, region, others, min_distance))
                continue;
            const double v = obj.value(node);
            if (v > best_value) {
                best_value = v;
                best = node;
            }
        }
        return best;
    };
    return from_report(SchemeTag::APS,
                       alternating_optimize(scene, tx, rx, cfg, SweepPlan{}, search));
}

SchemeResult run_proposed(const ChannelScene &scene, std::size_t tx_count, std::size_t rx_count,
                          const SolverConfig &cfg) {
    const auto tx = circle_packing_init(tx_count, scene.tx_region, scene.min_distance);
    const auto rx = circle_packing_init(rx_count, scene.rx_region, scene.min_distance);
    SolveReport report;
    if (rx_count == 1)
        report = solve_miso(scene, tx, cfg);
    else if (tx_count == 1)
        report = solve_simo(scene, rx, cfg);
    else
        report = solve(scene, tx, rx, cfg);
    return from_report(SchemeTag::PROPOSED, std::move(report));
}

SchemeResult run_sepm(const ChannelScene &scene, std::size_t tx_count, std::size_t rx_count,
                      const SolverConfig &cfg) {
    const auto tx = circle_packing_init(tx_count, scene.tx_region, scene.min_distance);
    const auto rx = circle_packing_init(rx_count, scene.rx_region, scene.min_distance);
    return from_report(SchemeTag::SEPM, solve_sepm(scene, tx, rx, cfg));
}

SchemeResult run_scheme(SchemeTag tag, const ChannelScene &scene, std::size_t tx_count,
                        std::size_t rx_count, const SolverConfig &cfg) {
    switch (tag) {
    case SchemeTag::FPA:
        return run_fpa(scene, tx_count, rx_count, cfg.power, cfg.noise_power);
    case SchemeTag::AS:
        return run_antenna_selection(scene, cfg.power, cfg.noise_power, tx_count, rx_count);
    case SchemeTag::RMA:
        return run_rma(scene, tx_count, std::nullopt, rx_count, cfg);
    case SchemeTag::APS:
        return run_aps(scene, tx_count, rx_count, cfg);
    case SchemeTag::SEPM:
        return run_sepm(scene, tx_count, rx_count, cfg);
    case SchemeTag::PROPOSED:
        return run_proposed(scene, tx_count, rx_count, cfg);
    }
    throw ConfigError("unknown scheme");
}

} // namespace mamimo
