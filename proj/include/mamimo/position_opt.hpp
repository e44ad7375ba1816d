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

#include "mamimo/channel.hpp"
#include "mamimo/geometry.hpp"
#include "mamimo/types.hpp"

#include <vector>

namespace mamimo {

/// Objective f(r)^H B f(r) of one antenna, where f is the field response over `paths`.
struct QuadraticFormObjective {
    ComplexMatrix matrix; ///< Hermitian PSD, L × L
    PathSet paths;
    double wavelength = 1.0;

    double value(Position r) const;
};

/// Half-plane (reference - anchor)^T (r - anchor) / ||reference - anchor|| ≥ min_distance,
/// the first-order under-estimate of ||r - anchor|| ≥ min_distance around `reference`.
struct LinearizedDistanceConstraint {
    Position anchor;
    Position reference;
    double min_distance;

    Position normal() const;  ///< unit normal pointing into the feasible side
    double offset() const;    ///< right-hand side c of normal^T r ≥ c
    bool holds(Position r) const;
};

/// Per-iteration state of the SCA loop for one antenna.
struct ScaState {
    Position current;
    double objective_value;
    int iteration;
};

struct ScaResult {
    Position position;
    std::vector<double> objective_trace; ///< f^H B f at the start and after every accepted step
    int iterations = 0;
    int qp_solves = 0;
};

/// b = B f(at).
ComplexVector surrogate_coefficients(const QuadraticFormObjective &obj, Position at);

/// ḡ(r) = Re{b^H f(r)}.
double surrogate_value(const ComplexVector &b, Position r, const PathSet &paths,
                       double wavelength);

/// Closed-form gradient of ḡ at `at`.
Eigen::Vector2d surrogate_gradient(const ComplexVector &b, Position at, const PathSet &paths,
                                   double wavelength);

/// Closed-form Hessian of ḡ at `at`; symmetric by construction.
Eigen::Matrix2d surrogate_hessian(const ComplexVector &b, Position at, const PathSet &paths,
                                  double wavelength);

/// δ = (8π²/λ²) Σ|b_q|, a global bound on the spectral norm of the Hessian of ḡ.
double majorizer_delta(const ComplexVector &b, double wavelength);

/// Maximizer of the quadratic minorizer over the whole plane: at + grad/δ.
/// With δ = 0 the surrogate is flat and `at` is returned unchanged.
Position unconstrained_step(const Eigen::Vector2d &grad, double delta, Position at);

/// Value of g̃(r) = -(δ/2) r^T r + (grad + δ·at)^T r.
double quadratic_surrogate(const Eigen::Vector2d &grad, double delta, Position at, Position r);

/// Maximizes g̃ subject to the rectangle bounds and the linearized distance constraints, by
/// enumerating every active set of size 0, 1 and 2 in the plane. Circular regions are handled
/// by projecting the half-plane solution onto the disc afterwards. The result is always
/// feasible for the original (non-linearized) distance constraints and the region, and its
/// surrogate value is never below that of `at`. Ties go to the lexicographically smallest point.
Position solve_constrained_qp(double delta, const Eigen::Vector2d &grad, Position at,
                             const Region &region,
                             const std::vector<LinearizedDistanceConstraint> &constraints);

struct ScaOptions {
    double tolerance = 1e-3; ///< stop when the relative objective increase falls below this
    int max_iters = 100;
};

/// One antenna's successive convex approximation: repeat {b, gradient, δ, closed-form step;
/// if infeasible fall back to the constrained QP (or the region projection when there are no
/// neighbors)} until the relative increase of f^H B f drops below the tolerance. The objective
/// never decreases and every iterate is feasible.
ScaResult sca_optimize_position(const QuadraticFormObjective &obj, Position start,
                                const Region &region, const std::vector<Position> &others,
                                double min_distance, const ScaOptions &options = {});

} // namespace mamimo
