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

#include "mamimo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mamimo {

double dot(Position a, Position b) { return a.x * b.x + a.y * b.y; }

double norm(Position p) { return std::hypot(p.x, p.y); }

double distance(Position a, Position b) { return norm(a - b); }

Region::Region(Rectangle rect) : shape_(rect) {
    if (!(rect.x_low < rect.x_high) || !(rect.y_low < rect.y_high))
        throw ConfigError("rectangle region needs x_low < x_high and y_low < y_high");
}

Region::Region(Circle circle) : shape_(circle) {
    if (!(circle.radius > 0.0))
        throw ConfigError("circle region needs a positive radius");
}

Region Region::square(double side) {
    const double h = side / 2.0;
    return Region(Rectangle{-h, h, -h, h});
}

const Rectangle &Region::rectangle() const {
    if (const auto *r = std::get_if<Rectangle>(&shape_))
        return *r;
    throw ConfigError("region is not a rectangle");
}

const Circle &Region::circle() const {
    if (const auto *c = std::get_if<Circle>(&shape_))
        return *c;
    throw ConfigError("region is not a circle");
}

bool Region::contains(Position p) const {
    if (const auto *r = std::get_if<Rectangle>(&shape_))
        return p.x >= r->x_low && p.x <= r->x_high && p.y >= r->y_low && p.y <= r->y_high;
    const auto &c = std::get<Circle>(shape_);
    const Position d = p - c.center;
    return dot(d, d) <= c.radius * c.radius;
}

Position Region::center() const {
    if (const auto *r = std::get_if<Rectangle>(&shape_))
        return {(r->x_low + r->x_high) / 2.0, (r->y_low + r->y_high) / 2.0};
    return std::get<Circle>(shape_).center;
}

Position Region::project(Position p) const {
    if (const auto *r = std::get_if<Rectangle>(&shape_))
        return project_rectangle(p, *r);
    return project_circle(p, std::get<Circle>(shape_));
}

Region Region::translated(Position offset) const {
    if (const auto *r = std::get_if<Rectangle>(&shape_))
        return Region(Rectangle{r->x_low + offset.x, r->x_high + offset.x, r->y_low + offset.y,
                                r->y_high + offset.y});
    const auto &c = std::get<Circle>(shape_);
    return Region(Circle{c.center + offset, c.radius});
}

Position project_rectangle(Position p, const Rectangle &rect) {
    return {std::min(std::max(p.x, rect.x_low), rect.x_high),
            std::min(std::max(p.y, rect.y_low), rect.y_high)};
}

Position project_circle(Position p, const Circle &circle) {
    const Position d = p - circle.center;
    const double len = norm(d);
    if (len <= circle.radius)
        return p;
    Position q = circle.center + (circle.radius / len) * d;
    // Rounding can leave the scaled point a hair outside; pull it in until contains() holds.
    const Region disc(circle);
    for (int i = 0; i < 8 && !disc.contains(q); ++i)
        q = circle.center + (circle.radius / len * (1.0 - 1e-15 * (1 << i))) * d;
    return q;
}

bool is_feasible_position(Position candidate, const Region &region,
                          const std::vector<Position> &others, double min_distance) {
    if (!std::isfinite(candidate.x) || !std::isfinite(candidate.y) || !region.contains(candidate))
        return false;
    for (const auto &o : others)
        if (distance(candidate, o) < min_distance)
            return false;
    return true;
}

bool is_feasible(const AntennaLayout &layout, const Region &region) {
    const auto &pos = layout.positions;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (!std::isfinite(pos[i].x) || !std::isfinite(pos[i].y) || !region.contains(pos[i]))
            return false;
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            if (distance(pos[i], pos[j]) < layout.min_distance)
                return false;
    }
    return true;
}

AntennaLayout circle_packing_init(std::size_t count, const Region &region, double min_distance) {
    if (count == 0)
        throw ConfigError("circle_packing_init needs at least one antenna");

    Rectangle box{};
    if (region.is_rectangle()) {
        box = region.rectangle();
    } else {
        const auto &c = region.circle();
        const double h = c.radius / std::sqrt(2.0);
        box = Rectangle{c.center.x - h, c.center.x + h, c.center.y - h, c.center.y + h};
    }

    const auto grid = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
    const double pitch_x = (box.x_high - box.x_low) / static_cast<double>(grid);
    const double pitch_y = (box.y_high - box.y_low) / static_cast<double>(grid);
    if (count > 1 && std::min(pitch_x, pitch_y) < min_distance) {
        std::ostringstream msg;
        msg << "region too small for " << count << " antennas: grid pitch "
            << std::min(pitch_x, pitch_y) << " < minimum distance " << min_distance;
        throw InfeasibleRegion(msg.str());
    }

    AntennaLayout layout;
    layout.min_distance = min_distance;
    layout.positions.reserve(count);
    if (count == 1) {
        layout.positions.push_back(region.center());
        return layout;
    }
    for (std::size_t row = 0; row < grid && layout.positions.size() < count; ++row)
        for (std::size_t col = 0; col < grid && layout.positions.size() < count; ++col)
            layout.positions.push_back({box.x_low + (static_cast<double>(col) + 0.5) * pitch_x,
                                        box.y_low + (static_cast<double>(row) + 0.5) * pitch_y});

    if (!is_feasible(layout, region))
        throw InfeasibleRegion("grid packing violates the minimum distance after rounding");
    return layout;
}

} // namespace mamimo
