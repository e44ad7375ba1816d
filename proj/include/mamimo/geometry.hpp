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

#include <cstddef>
#include <variant>
#include <vector>

namespace mamimo {

/// Antenna coordinate in the plane of its region, in meters (or wavelengths when λ = 1).
struct Position {
    double x = 0.0;
    double y = 0.0;

    friend Position operator+(Position a, Position b) { return {a.x + b.x, a.y + b.y}; }
    friend Position operator-(Position a, Position b) { return {a.x - b.x, a.y - b.y}; }
    friend Position operator*(double s, Position a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Position &, const Position &) = default;
};

double dot(Position a, Position b);
double norm(Position p);
double distance(Position a, Position b);

struct Rectangle {
    double x_low;
    double x_high;
    double y_low;
    double y_high;
};

struct Circle {
    Position center;
    double radius;
};

/// Closed convex region an antenna may move in. Either an axis-aligned rectangle or a disc.
class Region {
public:
    explicit Region(Rectangle rect);
    explicit Region(Circle circle);

    /// A×A square centered on the origin, the phase reference of the field-response model.
    static Region square(double side);

    bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape_); }
    bool is_circle() const { return std::holds_alternative<Circle>(shape_); }
    const Rectangle &rectangle() const;
    const Circle &circle() const;

    bool contains(Position p) const;
    Position center() const;
    /// Euclidean projection onto the region.
    Position project(Position p) const;

    Region translated(Position offset) const;

private:
    std::variant<Rectangle, Circle> shape_;
};

struct AntennaLayout {
    std::vector<Position> positions;
    double min_distance = 0.0;

    std::size_t size() const { return positions.size(); }
};

Position project_rectangle(Position p, const Rectangle &rect);
Position project_circle(Position p, const Circle &circle);

/// True iff every position lies in the region and every pair is at least
/// min_distance apart. Comparisons are exact.
bool is_feasible(const AntennaLayout &layout, const Region &region);

/// Exact check for one candidate position against the region and a set of fixed neighbors.
bool is_feasible_position(Position candidate, const Region &region,
                          const std::vector<Position> &others, double min_distance);

/// Deterministic square-grid packing: centers of a g×g grid (g = ceil(sqrt(count))) laid over
/// the region with equal margins, first `count` cells in row-major order (rows by ascending y).
/// Circular regions use their inscribed square. Throws InfeasibleRegion when the cell pitch
/// falls below `min_distance`.
AntennaLayout circle_packing_init(std::size_t count, const Region &region, double min_distance);

} // namespace mamimo
