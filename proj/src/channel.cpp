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

#include "mamimo/channel.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace mamimo {

using nlohmann::json;

void PathSet::validate() const {
    if (elevation.size() != azimuth.size())
        throw ShapeMismatch("path set has different elevation and azimuth counts");
    for (std::size_t k = 0; k < elevation.size(); ++k) {
        const double t = elevation[k];
        const double p = azimuth[k];
        if (!(t >= 0.0 && t <= std::numbers::pi) || !(p >= 0.0 && p <= std::numbers::pi))
            throw ConfigError("path angles must lie in [0, pi]");
    }
}

void ChannelScene::validate() const {
    tx_paths.validate();
    rx_paths.validate();
    if (static_cast<std::size_t>(sigma.rows()) != rx_paths.size() ||
        static_cast<std::size_t>(sigma.cols()) != tx_paths.size())
        throw ShapeMismatch("sigma must be L_r x L_t");
    if (!(wavelength > 0.0))
        throw ConfigError("wavelength must be positive");
    if (!sigma.allFinite())
        throw ConfigError("sigma has non-finite entries");
    if (min_distance < 0.0)
        throw ConfigError("minimum distance must be non-negative");
}

double propagation_offset(Position p, std::size_t path, const PathSet &paths) {
    const double theta = paths.elevation.at(path);
    const double phi = paths.azimuth.at(path);
    return p.x * std::sin(theta) * std::cos(phi) + p.y * std::cos(theta);
}

ComplexVector field_response(Position p, const PathSet &paths, double wavelength) {
    const std::size_t count = paths.size();
    ComplexVector f(static_cast<Eigen::Index>(count));
    const double k = 2.0 * std::numbers::pi / wavelength;
    for (std::size_t q = 0; q < count; ++q)
        f(static_cast<Eigen::Index>(q)) = std::polar(1.0, k * propagation_offset(p, q, paths));
    return f;
}

ComplexMatrix field_response_matrix(const std::vector<Position> &positions, const PathSet &paths,
                                    double wavelength) {
    ComplexMatrix out(static_cast<Eigen::Index>(paths.size()),
                      static_cast<Eigen::Index>(positions.size()));
    for (std::size_t n = 0; n < positions.size(); ++n)
        out.col(static_cast<Eigen::Index>(n)) = field_response(positions[n], paths, wavelength);
    return out;
}

ComplexMatrix field_response_matrix(const AntennaLayout &layout, const PathSet &paths,
                                    double wavelength) {
    return field_response_matrix(layout.positions, paths, wavelength);
}

ComplexMatrix assemble_channel(const ChannelScene &scene, const AntennaLayout &tx,
                               const AntennaLayout &rx) {
    if (static_cast<std::size_t>(scene.sigma.rows()) != scene.rx_paths.size() ||
        static_cast<std::size_t>(scene.sigma.cols()) != scene.tx_paths.size())
        throw ShapeMismatch("sigma shape does not match the scene path sets");
    const ComplexMatrix g = field_response_matrix(tx, scene.tx_paths, scene.wavelength);
    const ComplexMatrix f = field_response_matrix(rx, scene.rx_paths, scene.wavelength);
    return f.adjoint() * scene.sigma * g;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::mt19937_64 component_stream(std::uint64_t seed, std::uint64_t component) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(component)));
}

PathSet random_paths(std::size_t count, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    PathSet paths;
    paths.elevation.resize(count);
    paths.azimuth.resize(count);
    for (auto &t : paths.elevation)
        t = angle(rng);
    for (auto &p : paths.azimuth)
        p = angle(rng);
    return paths;
}

} // namespace

ChannelScene random_scene(std::size_t paths, double wavelength, double side, double min_distance,
                          std::uint64_t seed) {
    if (paths == 0)
        throw ConfigError("random_scene needs at least one path");
    if (!(wavelength > 0.0) || !(side > 0.0))
        throw ConfigError("wavelength and region side must be positive");

    ChannelScene scene;
    scene.wavelength = wavelength;
    scene.min_distance = min_distance;
    scene.tx_region = Region::square(side);
    scene.rx_region = Region::square(side);

    const auto l = static_cast<Eigen::Index>(paths);
    scene.sigma = ComplexMatrix::Zero(l, l);
    auto sigma_rng = component_stream(seed, 0);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 / static_cast<double>(paths)));
    for (Eigen::Index p = 0; p < l; ++p) {
        const double re = normal(sigma_rng);
        const double im = normal(sigma_rng);
        scene.sigma(p, p) = Complex(re, im);
    }

    auto tx_rng = component_stream(seed, 1);
    scene.tx_paths = random_paths(paths, tx_rng);
    auto rx_rng = component_stream(seed, 2);
    scene.rx_paths = random_paths(paths, rx_rng);
    return scene;
}

namespace {

json region_to_json(const Region &region) {
    if (region.is_rectangle()) {
        const auto &r = region.rectangle();
        return {{"type", "rectangle"},
                {"x_low", r.x_low},
                {"x_high", r.x_high},
                {"y_low", r.y_low},
                {"y_high", r.y_high}};
    }
    const auto &c = region.circle();
    return {{"type", "circle"}, {"center", {c.center.x, c.center.y}}, {"radius", c.radius}};
}

Region region_from_json(const json &j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "rectangle")
        return Region(Rectangle{j.at("x_low").get<double>(), j.at("x_high").get<double>(),
                                j.at("y_low").get<double>(), j.at("y_high").get<double>()});
    if (type == "circle") {
        const auto &c = j.at("center");
        return Region(Circle{{c.at(0).get<double>(), c.at(1).get<double>()},
                             j.at("radius").get<double>()});
    }
    throw ConfigError("unknown region type '" + type + "'");
}

json paths_to_json(const PathSet &paths) {
    return {{"elevation", paths.elevation}, {"azimuth", paths.azimuth}};
}

PathSet paths_from_json(const json &j) {
    return {j.at("elevation").get<std::vector<double>>(), j.at("azimuth").get<std::vector<double>>()};
}

} // namespace

std::string scene_to_json(const ChannelScene &scene) {
    json sigma = json::array();
    for (Eigen::Index q = 0; q < scene.sigma.rows(); ++q) {
        json row = json::array();
        for (Eigen::Index p = 0; p < scene.sigma.cols(); ++p)
            row.push_back({scene.sigma(q, p).real(), scene.sigma(q, p).imag()});
        sigma.push_back(std::move(row));
    }
    json j = {{"tx_paths", paths_to_json(scene.tx_paths)},
              {"rx_paths", paths_to_json(scene.rx_paths)},
              {"sigma", std::move(sigma)},
              {"wavelength", scene.wavelength},
              {"tx_region", region_to_json(scene.tx_region)},
              {"rx_region", region_to_json(scene.rx_region)},
              {"min_distance", scene.min_distance}};
    return j.dump(2);
}

ChannelScene scene_from_json(const std::string &text) {
    try {
        const json j = json::parse(text);
        ChannelScene scene;
        scene.tx_paths = paths_from_json(j.at("tx_paths"));
        scene.rx_paths = paths_from_json(j.at("rx_paths"));
        const auto &rows = j.at("sigma");
        const auto lr = static_cast<Eigen::Index>(rows.size());
        const auto lt = lr == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.at(0).size());
        scene.sigma.resize(lr, lt);
        for (Eigen::Index q = 0; q < lr; ++q) {
            const auto &row = rows.at(static_cast<std::size_t>(q));
            if (static_cast<Eigen::Index>(row.size()) != lt)
                throw ShapeMismatch("sigma rows have different lengths");
            for (Eigen::Index p = 0; p < lt; ++p) {
                const auto &e = row.at(static_cast<std::size_t>(p));
                scene.sigma(q, p) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            }
        }
        scene.wavelength = j.at("wavelength").get<double>();
        scene.tx_region = region_from_json(j.at("tx_region"));
        scene.rx_region = region_from_json(j.at("rx_region"));
        scene.min_distance = j.at("min_distance").get<double>();
        scene.validate();
        return scene;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed scene: ") + e.what());
    }
}

void save_scene(const ChannelScene &scene, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    out << scene_to_json(scene) << '\n';
    if (!out)
        throw Error("failed writing scene to '" + path + "'");
}

ChannelScene load_scene(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open scene file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scene_from_json(buf.str());
}

} // namespace mamimo
