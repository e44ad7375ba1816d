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

#include "mamimo/geometry.hpp"
#include "mamimo/types.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mamimo {

/// Elevation and azimuth angles (radians, each in [0, π]) of the propagation paths seen
/// from one side of the link.
struct PathSet {
    std::vector<double> elevation;
    std::vector<double> azimuth;

    std::size_t size() const { return elevation.size(); }
    void validate() const;
};

/// One quasi-static channel realization: path geometry on both sides, the path response
/// matrix between the two region origins, and the movement regions.
struct ChannelScene {
    PathSet tx_paths;
    PathSet rx_paths;
    ComplexMatrix sigma; ///< L_r × L_t path response matrix.
    double wavelength = 1.0;
    Region tx_region = Region::square(1.0);
    Region rx_region = Region::square(1.0);
    double min_distance = 0.5;

    void validate() const;
};

/// Path length difference ρ^k(p) between `p` and the region origin for path k.
double propagation_offset(Position p, std::size_t path, const PathSet &paths);

/// Field response vector: entry k is exp(j 2π ρ^k(p) / λ).
ComplexVector field_response(Position p, const PathSet &paths, double wavelength);

/// L × count matrix whose column n is the field response of antenna n.
ComplexMatrix field_response_matrix(const std::vector<Position> &positions, const PathSet &paths,
                                    double wavelength);
ComplexMatrix field_response_matrix(const AntennaLayout &layout, const PathSet &paths,
                                    double wavelength);

/// H = F(r)^H Σ G(t), M × N.
ComplexMatrix assemble_channel(const ChannelScene &scene, const AntennaLayout &tx,
                               const AntennaLayout &rx);

/// Random scene following the simulation protocol: L_t = L_r = L, diagonal Σ with
/// CN(0, 1/L) entries, all angles i.i.d. uniform on [0, π], A × A square regions.
///
/// The seed is split into three independent streams, drawn in this order and never shared:
/// stream 0 for Σ (real then imaginary part per diagonal entry), stream 1 for the transmit
/// angles (all elevations, then all azimuths), stream 2 for the receive angles.
ChannelScene random_scene(std::size_t paths, double wavelength, double side, double min_distance,
                          std::uint64_t seed);

/// splitmix64 finalizer; used for every seed derivation in the project.
std::uint64_t splitmix64(std::uint64_t x);

// Scene files are JSON. Keys mirror the struct fields; complex entries are [re, im] pairs
// and sigma is stored row-major as a list of rows.
std::string scene_to_json(const ChannelScene &scene);
ChannelScene scene_from_json(const std::string &text);
void save_scene(const ChannelScene &scene, const std::string &path);
ChannelScene load_scene(const std::string &path);

} // namespace mamimo
