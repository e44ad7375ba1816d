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

#pragma once

#include "mamimo/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mamimo {

enum class SchemeTag { FPA, AS, RMA, APS, SEPM, PROPOSED };

std::string to_string(SchemeTag tag);
SchemeTag parse_scheme(const std::string &name);

struct SchemeResult {
    SchemeTag scheme = SchemeTag::FPA;
    ChannelMetrics metrics;
    AntennaLayout tx_layout;
    AntennaLayout rx_layout;
    int outer_iterations = 0;
    std::vector<double> capacity_trace; ///< empty for the non-iterative schemes
};

enum class ArrayAxis { x, y };

/// Uniform linear array with λ/2 spacing centered on `center`.
AntennaLayout fpa_layout(std::size_t count, double wavelength, ArrayAxis axis = ArrayAxis::x,
                         Position center = {});

/// Candidate array for antenna selection: 2·count elements at λ/2 that contain
/// fpa_layout(count) as a contiguous block.
AntennaLayout selection_candidates(std::size_t count, double wavelength,
                                   ArrayAxis axis = ArrayAxis::x, Position center = {});

SchemeResult run_fpa(const ChannelScene &scene, std::size_t tx_count, std::size_t rx_count,
                     double power, double noise_power, ArrayAxis axis = ArrayAxis::x);

SchemeResult run_antenna_selection(const ChannelScene &scene, double power, double noise_power,
                                   std::size_t tx_count, std::size_t rx_count,
                                   ArrayAxis axis = ArrayAxis::x);

/// Transmit ULA frozen, receive antennas moved by the SCA sweeps. Without `init_rx` the
/// receive layout starts from circle packing.
SchemeResult run_rma(const ChannelScene &scene, std::size_t tx_count,
                     const std::optional<AntennaLayout> &init_rx, std::size_t rx_count,
                     const SolverConfig &cfg, ArrayAxis axis = ArrayAxis::x);

/// Number of grid nodes along one axis of a side-`extent` region with spacing `step`.
std::size_t grid_count(double extent, double step);

/// Grid nodes inside `region`, anchored at the lower-left corner of its bounding box.
std::vector<Position> grid_nodes(const Region &region, double step);

/// Alternating exhaustive search over grid nodes spaced `grid_step` (D when ≤ 0).
SchemeResult run_aps(const ChannelScene &scene, std::size_t tx_count, std::size_t rx_count,
                     const SolverConfig &cfg, double grid_step = 0.0);

/// Proposed scheme from circle-packing initial layouts. One-antenna sides use the
/// MISO/SIMO specializations.
SchemeResult run_proposed(const ChannelScene &scene, std::size_t tx_count, std::size_t rx_count,
                          const SolverConfig &cfg);

SchemeResult run_sepm(const ChannelScene &scene, std::size_t tx_count, std::size_t rx_count,
                      const SolverConfig &cfg);

/// Dispatch on `tag` with the harness defaults for each scheme.
SchemeResult run_scheme(SchemeTag tag, const ChannelScene &scene, std::size_t tx_count,
                        std::size_t rx_count, const SolverConfig &cfg);

} // namespace mamimo
