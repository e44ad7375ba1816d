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

#include "mamimo/benchmarks.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mamimo {

struct ExperimentConfig {
    std::size_t N = 4;
    std::size_t M = 4;
    std::size_t L = 10;
    std::vector<double> A_over_lambda{3.0};
    std::vector<double> snr_db{15.0};
    double D_over_lambda = 0.5;
    std::size_t realizations = 200;
    std::uint64_t seed = 1;
    std::vector<SchemeTag> schemes{SchemeTag::PROPOSED, SchemeTag::FPA};
    double eps1 = 1e-3;
    double eps2 = 1e-3;
    int max_outer_iters = 100;
    int max_sca_iters = 100;
    std::size_t workers = 1;
    std::string output;

    void validate() const;
    /// Solver settings at one SNR point: σ² = 1, P = 10^(snr/10).
    SolverConfig solver_config(double snr) const;
};

ExperimentConfig experiment_config_from_json(const std::string &text);
ExperimentConfig load_experiment_config(const std::string &path);
std::string experiment_config_to_json(const ExperimentConfig &cfg);

struct AggregateRow {
    SchemeTag scheme = SchemeTag::FPA;
    double A_over_lambda = 0.0;
    double snr_db = 0.0;
    std::size_t L = 0;
    double mean_capacity = 0.0;
    double stderr_capacity = 0.0;
    double mean_total_power = 0.0;
    double mean_strongest_eig_power = 0.0;
    double mean_condition_number = 0.0;
    double mean_outer_iters = 0.0;
    std::size_t realizations = 0; ///< configured count; successes = realizations - failures
    std::size_t failures = 0;
};

using FailureLog = std::function<void(const std::string &)>;

/// Seed of the scene used by realization `index` at grid point (a_over_lambda, snr_db). It does
/// not depend on the scheme, so every scheme sees the same paths.
std::uint64_t scene_seed(std::uint64_t master, std::size_t paths, double a_over_lambda,
                         double snr_db, std::size_t index);

/// Scene for one realization at one grid point.
ChannelScene experiment_scene(const ExperimentConfig &cfg, double a_over_lambda, double snr_db,
                              std::size_t index);

/// Rows ordered by scheme (config order), then region size, then SNR.
std::vector<AggregateRow> run_experiment(const ExperimentConfig &cfg, const FailureLog &log = {});

struct ConvergenceTrace {
    std::vector<std::vector<double>> per_realization;
    std::vector<double> mean; ///< finished runs hold their last value
    std::size_t failures = 0;
};

/// PROPOSED traces at the single grid point of `cfg`.
ConvergenceTrace run_convergence_trace(const ExperimentConfig &cfg, const FailureLog &log = {});

inline constexpr const char *kCsvHeader =
    "scheme,A_over_lambda,snr_db,L,mean_capacity_bps_hz,stderr,mean_total_power,"
    "mean_strongest_eig_power,mean_condition_number,mean_outer_iters,realizations,failures";

std::string format_csv(const std::vector<AggregateRow> &rows);
void emit_csv(const std::vector<AggregateRow> &rows, const std::string &path);

std::string format_trace_csv(const ConvergenceTrace &trace);
void emit_trace_csv(const ConvergenceTrace &trace, const std::string &path);

/// Runs fn(i) for i in [0, count) on `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &fn);

} // namespace mamimo
