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

#include "mamimo/types.hpp"

namespace mamimo {

/// Default relative rank tolerance: singular values ≤ tol·σ_max are discarded.
inline constexpr double kRankTolerance = 1e-10;

/// H ≈ left · diag(singular) · right^H with only the retained singular values.
struct SpectralDecomposition {
    ComplexMatrix left;  ///< M × S
    RealVector singular; ///< descending, strictly positive
    ComplexMatrix right; ///< N × S

    Eigen::Index rank() const { return singular.size(); }
};

struct WaterFilling {
    RealVector powers;  ///< per-stream power, sums to the budget
    double water_level; ///< 1/p0
};

/// Capacity together with the eigenmode transmission that achieves it.
struct CapacityResult {
    double capacity;             ///< bps/Hz
    ComplexMatrix covariance;    ///< optimal Q (or S on the reverse link)
    RealVector singular;         ///< retained singular values of the channel
    WaterFilling allocation;
};

struct ChannelMetrics {
    double capacity = 0.0;            ///< water-filled capacity, bps/Hz
    double total_power = 0.0;         ///< ||H||_F^2
    double strongest_eig_power = 0.0; ///< σ_max^2
    double condition_number = 0.0;    ///< σ_max / σ_min over retained values
};

/// Throws AllZeroChannel when the largest singular value is zero.
SpectralDecomposition truncated_svd(const ComplexMatrix &h, double tol = kRankTolerance);

/// Exact water-filling over descending, positive singular values by the active-set sweep
/// k = S, ..., 1. Inactive streams get exactly zero power.
WaterFilling water_fill(const RealVector &singular, double power, double noise_power);

/// log2 det(I + H Q H^H / σ²), from the eigenvalues of the Hermitian argument.
double capacity_of(const ComplexMatrix &h, const ComplexMatrix &q, double noise_power);

/// Σ_s log2(1 + λ_s² p_s / σ²).
double eigenmode_capacity(const RealVector &singular, const RealVector &powers,
                          double noise_power);

/// Eigenmode transmission Q* = V diag(p*) V^H and its capacity.
CapacityResult optimal_covariance(const ComplexMatrix &h, double power, double noise_power,
                                  double tol = kRankTolerance);

/// Optimal S* = U diag(p*) U^H for the reverse link H^H (M × M).
CapacityResult receive_side_covariance(const ComplexMatrix &h, double power, double noise_power,
                                       double tol = kRankTolerance);

/// Water-filled capacity only, from the eigenvalues of the smaller Gram matrix. Used on the
/// hot paths of the exhaustive benchmarks.
double water_filled_capacity(const ComplexMatrix &h, double power, double noise_power,
                             double tol = kRankTolerance);

ChannelMetrics metrics_of(const ComplexMatrix &h, double power, double noise_power,
                          double tol = kRankTolerance);

/// Throws InvalidCovariance unless q is Hermitian (1e-10), PSD (min eigenvalue ≥ -1e-9) and,
/// when power > 0, has trace ≤ power + 1e-9.
void check_covariance(const ComplexMatrix &q, double power = -1.0);

/// Factor K = U_Q V_Q^{1/2} with Q = K K^H. Eigenvalues in [-1e-9, 0) are clamped to zero.
ComplexMatrix covariance_factor(const ComplexMatrix &q);

} // namespace mamimo
