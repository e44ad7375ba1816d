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

#include "mamimo/capacity.hpp"
#include "mamimo/channel.hpp"
#include "mamimo/geometry.hpp"
#include "mamimo/position_opt.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mamimo {

enum class SolveMode { full, sepm, miso, simo };

std::string to_string(SolveMode mode);
SolveMode parse_solve_mode(const std::string &name);

struct SolverConfig {
    double power = 1.0;           ///< P
    double noise_power = 1.0;     ///< σ²
    double sca_tolerance = 1e-3;  ///< ε1, relative increase of f^H B f
    double outer_tolerance = 1e-3;///< ε2, relative increase of the outer objective
    int max_outer_iters = 100;
    int max_sca_iters = 100;
    double rank_tolerance = kRankTolerance;
    SolveMode mode = SolveMode::full;

    void validate() const;
};

struct SolveReport {
    AntennaLayout tx_layout;
    AntennaLayout rx_layout;
    ComplexMatrix covariance;
    /// Outer objective, one entry for the initial layouts plus one per outer iteration.
    /// full/miso/simo: water-filled capacity. sepm: single-stream capacity
    /// log2(1 + P σ_max² / σ²), the quantity SEPM maximizes.
    std::vector<double> capacity_trace;
    std::vector<double> strongest_eig_trace; ///< σ_max² alongside every trace entry
    ChannelMetrics final_metrics;            ///< capacity here is always water-filled
    int outer_iterations = 0;
    int sca_iterations = 0; ///< inner iterations summed over every antenna update
    bool converged = false;
    SolveMode mode = SolveMode::full;
};

/// Columns w(r_m) = V_Q^{1/2} U_Q^H G^H Σ^H f(r_m), returned as an N × M matrix.
ComplexMatrix effective_columns_rx(const ChannelScene &scene, const AntennaLayout &tx,
                                   const AntennaLayout &rx, const ComplexMatrix &q);

/// Columns p(t_n) = V_S^{1/2} U_S^H F^H Σ g(t_n), returned as an M × N matrix.
ComplexMatrix effective_columns_tx(const ChannelScene &scene, const AntennaLayout &tx,
                                   const AntennaLayout &rx, const ComplexMatrix &s);

/// (I + W_m^H W_m / σ²)^{-1} where W_m^H holds every column except `excluded`, computed
/// directly.
ComplexMatrix leave_one_out_inverse(const ComplexMatrix &columns, Eigen::Index excluded,
                                    double noise_power);

/// Matrix-inversion-lemma step from the inverse excluding column m-1 to the one excluding
/// column m: the stack gains `previous` (possibly already moved) and loses `next`.
ComplexMatrix rank_two_update(const ComplexMatrix &inverse, const ComplexVector &previous,
                              const ComplexVector &next, double noise_power);

/// B_m = Σ G K A_m K^H G^H Σ^H with K = U_Q V_Q^{1/2} (see covariance_factor).
QuadraticFormObjective build_rx_objective(const ChannelScene &scene, const AntennaLayout &tx,
                                          const ComplexMatrix &inverse,
                                          const ComplexMatrix &q_factor);

/// D_n = Σ^H F K_S C_n K_S^H F^H Σ.
QuadraticFormObjective build_tx_objective(const ChannelScene &scene, const AntennaLayout &rx,
                                          const ComplexMatrix &inverse,
                                          const ComplexMatrix &s_factor);

/// Solver for one antenna's subproblem inside the alternating loop.
using PositionUpdater =
    std::function<Position(const QuadraticFormObjective &objective, Position start,
                           const Region &region, const std::vector<Position> &others,
                           double min_distance)>;

/// Which sides are moved during an outer iteration.
struct SweepPlan {
    bool receive = true;
    bool transmit = true;
};

/// The alternating loop: water-filled Q, sequential receive updates on B_m, water-filled S,
/// sequential transmit updates on D_n; stops when the relative capacity increase is below
/// outer_tolerance. `updater` solves each per-antenna subproblem.
SolveReport alternating_optimize(const ChannelScene &scene, AntennaLayout tx, AntennaLayout rx,
                                 const SolverConfig &cfg, SweepPlan plan,
                                 const PositionUpdater &updater);

/// The successive convex approximation updater used by every continuous scheme.
PositionUpdater sca_updater(const SolverConfig &cfg, int *iteration_counter = nullptr);

/// Full joint optimization of both layouts and the transmit covariance.
SolveReport solve(const ChannelScene &scene, const AntennaLayout &init_tx,
                  const AntennaLayout &init_rx, const SolverConfig &cfg);

/// Low-SNR variant: maximizes the strongest eigenchannel power with rank-one objectives.
SolveReport solve_sepm(const ChannelScene &scene, const AntennaLayout &init_tx,
                       const AntennaLayout &init_rx, const SolverConfig &cfg);

/// Single receive antenna (starting at the receive region center): maximizes ||h||².
SolveReport solve_miso(const ChannelScene &scene, const AntennaLayout &init_tx,
                       const SolverConfig &cfg);

/// Single transmit antenna (starting at the transmit region center): maximizes ||h||².
SolveReport solve_simo(const ChannelScene &scene, const AntennaLayout &init_rx,
                       const SolverConfig &cfg);

/// Dispatch on cfg.mode. miso needs one receive antenna and simo one transmit antenna.
SolveReport optimize(const ChannelScene &scene, const AntennaLayout &init_tx,
                     const AntennaLayout &init_rx, const SolverConfig &cfg);

/// JSON document with keys mode, tx_layout, rx_layout, min_distance, covariance ([re, im]
/// rows), capacity_trace, strongest_eig_trace, final_metrics, outer_iterations,
/// sca_iterations, converged.
std::string report_to_json(const SolveReport &report);

} // namespace mamimo
