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

#include "mamimo/position_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace mamimo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Direction cosines (sinθ cosφ, cosθ) of path q projected on the antenna plane.
Eigen::Vector2d path_direction(const PathSet &paths, std::size_t q) {
    const double theta = paths.elevation[q];
    return {std::sin(theta) * std::cos(paths.azimuth[q]), std::cos(theta)};
}

double phase_argument(const ComplexVector &b, Position at, const PathSet &paths,
                      double wavelength, std::size_t q) {
    return kTwoPi * propagation_offset(at, q, paths) / wavelength -
           std::arg(b(static_cast<Eigen::Index>(q)));
}

struct HalfPlane {
    Eigen::Vector2d normal;
    double offset;
};

bool lexicographically_less(Position a, Position b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

} // namespace

double QuadraticFormObjective::value(Position r) const {
    const ComplexVector f = field_response(r, paths, wavelength);
    return f.dot(matrix * f).real();
}

Position LinearizedDistanceConstraint::normal() const {
    const Position d = reference - anchor;
    return (1.0 / norm(d)) * d;
}

double LinearizedDistanceConstraint::offset() const {
    return min_distance + dot(normal(), anchor);
}

bool LinearizedDistanceConstraint::holds(Position r) const {
    return dot(normal(), r - anchor) >= min_distance;
}

ComplexVector surrogate_coefficients(const QuadraticFormObjective &obj, Position at) {
    return obj.matrix * field_response(at, obj.paths, obj.wavelength);
}

double surrogate_value(const ComplexVector &b, Position r, const PathSet &paths,
                       double wavelength) {
    return b.dot(field_response(r, paths, wavelength)).real();
}

Eigen::Vector2d surrogate_gradient(const ComplexVector &b, Position at, const PathSet &paths,
                                   double wavelength) {
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    for (std::size_t q = 0; q < paths.size(); ++q) {
        const double mag = std::abs(b(static_cast<Eigen::Index>(q)));
        if (mag == 0.0)
            continue;
        grad += mag * std::sin(phase_argument(b, at, paths, wavelength, q)) *
                path_direction(paths, q);
    }
    return -(kTwoPi / wavelength) * grad;
}

Eigen::Matrix2d surrogate_hessian(const ComplexVector &b, Position at, const PathSet &paths,
                                  double wavelength) {
    Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
    for (std::size_t q = 0; q < paths.size(); ++q) {
        const double mag = std::abs(b(static_cast<Eigen::Index>(q)));
        if (mag == 0.0)
            continue;
        const Eigen::Vector2d a = path_direction(paths, q);
        hess += mag * std::cos(phase_argument(b, at, paths, wavelength, q)) * (a * a.transpose());
    }
    const double k = kTwoPi / wavelength;
    return -(k * k) * hess;
}

double majorizer_delta(const ComplexVector &b, double wavelength) {
    return 2.0 * (kTwoPi / wavelength) * (kTwoPi / wavelength) * b.cwiseAbs().sum();
}

Position unconstrained_step(const Eigen::Vector2d &grad, double delta, Position at) {
    if (delta == 0.0)
        return at;
    return {at.x + grad.x() / delta, at.y + grad.y() / delta};
}

double quadratic_surrogate(const Eigen::Vector2d &grad, double delta, Position at, Position r) {
    const double lin_x = grad.x() + delta * at.x;
    const double lin_y = grad.y() + delta * at.y;
    return -0.5 * delta * dot(r, r) + lin_x * r.x + lin_y * r.y;
}

Position solve_constrained_qp(double delta, const Eigen::Vector2d &grad, Position at,
                             const Region &region,
                             const std::vector<LinearizedDistanceConstraint> &constraints) {
    std::vector<Position> anchors;
    double min_distance = 0.0;
    std::vector<HalfPlane> planes;
    for (const auto &c : constraints) {
        const Position n = c.normal();
        planes.push_back({{n.x, n.y}, c.offset()});
        anchors.push_back(c.anchor);
        min_distance = std::max(min_distance, c.min_distance);
    }
    if (region.is_rectangle()) {
        const auto &r = region.rectangle();
        planes.push_back({{1.0, 0.0}, r.x_low});
        planes.push_back({{-1.0, 0.0}, -r.x_high});
        planes.push_back({{0.0, 1.0}, r.y_low});
        planes.push_back({{0.0, -1.0}, -r.y_high});
    }

    // Candidates on a constraint line are computed against a slightly tightened offset so that
    // rounding cannot push them across the original (non-linearized) boundary.
    auto tightened = [](const HalfPlane &h) { return h.offset + 1e-12 * (1.0 + std::abs(h.offset)); };
    auto satisfies_planes = [&](Position r) {
        for (const auto &h : planes)
            if (h.normal.x() * r.x + h.normal.y() * r.y < h.offset - 1e-12 * (1.0 + std::abs(h.offset)))
                return false;
        return true;
    };

    std::optional<Position> best;
    double best_value = -std::numeric_limits<double>::infinity();
    auto consider = [&](Position r, bool check_planes) {
        if (!std::isfinite(r.x) || !std::isfinite(r.y))
            return;
        if (check_planes && !satisfies_planes(r))
            return;
        if (region.is_rectangle())
            r = project_rectangle(r, region.rectangle());
        else
            r = project_circle(r, region.circle());
        if (!is_feasible_position(r, region, anchors, min_distance))
            return;
        const double v = quadratic_surrogate(grad, delta, at, r);
        if (!best || v > best_value || (v == best_value && lexicographically_less(r, *best))) {
            best = r;
            best_value = v;
        }
    };

    consider(at, false);
    if (delta > 0.0) {
        const Position target = unconstrained_step(grad, delta, at);
        const Eigen::Vector2d z{target.x, target.y};
        consider(target, true);
        for (const auto &h : planes) {
            const Eigen::Vector2d p = z + (tightened(h) - h.normal.dot(z)) * h.normal;
            consider({p.x(), p.y()}, true);
        }
        for (std::size_t i = 0; i < planes.size(); ++i) {
            for (std::size_t j = i + 1; j < planes.size(); ++j) {
                Eigen::Matrix2d a;
                a.row(0) = planes[i].normal.transpose();
                a.row(1) = planes[j].normal.transpose();
                const double det = a.determinant();
                if (std::abs(det) < 1e-12)
                    continue;
                const Eigen::Vector2d p =
                    a.inverse() * Eigen::Vector2d{tightened(planes[i]), tightened(planes[j])};
                consider({p.x(), p.y()}, true);
            }
        }
    }
    if (!best)
        throw NumericalFailure("constrained QP found no feasible candidate; the reference point "
                               "violates the constraints");
    return *best;
}

ScaResult sca_optimize_position(const QuadraticFormObjective &obj, Position start,
                                const Region &region, const std::vector<Position> &others,
                                double min_distance, const ScaOptions &options) {
    ScaState state{start, obj.value(start), 0};
    ScaResult result;
    result.objective_trace.push_back(state.objective_value);
    const bool has_neighbors = !others.empty() && min_distance > 0.0;

    while (state.iteration < options.max_iters) {
        ++state.iteration;
        const ComplexVector b = surrogate_coefficients(obj, state.current);
        const double delta = majorizer_delta(b, obj.wavelength);
        if (delta == 0.0)
            break;
        const Eigen::Vector2d grad = surrogate_gradient(b, state.current, obj.paths, obj.wavelength);

        Position next = unconstrained_step(grad, delta, state.current);
        if (!is_feasible_position(next, region, others, min_distance)) {
            if (!has_neighbors) {
                next = region.project(next);
            } else {
                std::vector<LinearizedDistanceConstraint> linearized;
                linearized.reserve(others.size());
                for (const auto &o : others)
                    linearized.push_back({o, state.current, min_distance});
                next = solve_constrained_qp(delta, grad, state.current, region, linearized);
                ++result.qp_solves;
            }
            if (!is_feasible_position(next, region, others, min_distance))
                break;
        }

        const double value = obj.value(next);
        if (value < state.objective_value)
            break; // only reachable through rounding; keep the feasible incumbent
        const double increase = value - state.objective_value;
        const double scale = std::max(std::abs(state.objective_value),
                                      std::numeric_limits<double>::min());
        state.current = next;
        state.objective_value = value;
        result.objective_trace.push_back(value);
        if (increase <= options.tolerance * scale)
            break;
    }
    result.position = state.current;
    result.iterations = state.iteration;
    return result;
}

} // namespace mamimo
