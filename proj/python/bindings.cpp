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

#include <mamimo/harness.hpp>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mamimo;

namespace {

using PointArray = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

AntennaLayout to_layout(const PointArray &points, double min_distance) {
    AntennaLayout layout;
    layout.min_distance = min_distance;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        layout.positions.push_back({points(i, 0), points(i, 1)});
    return layout;
}

PointArray to_points(const AntennaLayout &layout) {
    PointArray out(static_cast<Eigen::Index>(layout.size()), 2);
    for (std::size_t i = 0; i < layout.size(); ++i) {
        out(static_cast<Eigen::Index>(i), 0) = layout.positions[i].x;
        out(static_cast<Eigen::Index>(i), 1) = layout.positions[i].y;
    }
    return out;
}

SolverConfig solver_config(double power, double noise_power, const std::string &mode, double eps1,
                           double eps2, int max_outer_iters, int max_sca_iters) {
    SolverConfig cfg;
    cfg.power = power;
    cfg.noise_power = noise_power;
    cfg.mode = parse_solve_mode(mode);
    cfg.sca_tolerance = eps1;
    cfg.outer_tolerance = eps2;
    cfg.max_outer_iters = max_outer_iters;
    cfg.max_sca_iters = max_sca_iters;
    return cfg;
}

py::dict metrics_dict(const ChannelMetrics &m) {
    py::dict d;
    d["capacity"] = m.capacity;
    d["total_power"] = m.total_power;
    d["strongest_eig_power"] = m.strongest_eig_power;
    d["condition_number"] = m.condition_number;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Capacity maximization for MIMO links with movable antennas";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<ChannelScene>(m, "Scene")
        .def_property_readonly("sigma", [](const ChannelScene &s) { return s.sigma; })
        .def_property_readonly("wavelength", [](const ChannelScene &s) { return s.wavelength; })
        .def_property_readonly("min_distance", [](const ChannelScene &s) { return s.min_distance; })
        .def_property_readonly("paths", [](const ChannelScene &s) { return s.tx_paths.size(); })
        .def("to_json", &scene_to_json)
        .def_static("from_json", &scene_from_json, py::arg("text"));

    m.def("random_scene", &random_scene, py::arg("paths"), py::arg("wavelength"), py::arg("side"),
          py::arg("min_distance"), py::arg("seed"));

    m.def(
        "circle_packing",
        [](std::size_t count, const ChannelScene &scene, bool transmit) {
            const Region &region = transmit ? scene.tx_region : scene.rx_region;
            return to_points(circle_packing_init(count, region, scene.min_distance));
        },
        py::arg("count"), py::arg("scene"), py::arg("transmit") = true);

    m.def(
        "channel",
        [](const ChannelScene &scene, const PointArray &tx, const PointArray &rx) {
            return assemble_channel(scene, to_layout(tx, scene.min_distance),
                                    to_layout(rx, scene.min_distance));
        },
        py::arg("scene"), py::arg("tx"), py::arg("rx"));

    m.def(
        "water_filled_capacity",
        [](const ComplexMatrix &h, double power, double noise_power) {
            return water_filled_capacity(h, power, noise_power);
        },
        py::arg("h"), py::arg("power"), py::arg("noise_power") = 1.0);

    m.def(
        "metrics",
        [](const ComplexMatrix &h, double power, double noise_power) {
            return metrics_dict(metrics_of(h, power, noise_power));
        },
        py::arg("h"), py::arg("power"), py::arg("noise_power") = 1.0);

    m.def(
        "_optimize_json",
        [](const ChannelScene &scene, const PointArray &tx, const PointArray &rx, double power,
           double noise_power, const std::string &mode, double eps1, double eps2,
           int max_outer_iters, int max_sca_iters) {
            const auto cfg = solver_config(power, noise_power, mode, eps1, eps2, max_outer_iters,
                                           max_sca_iters);
            py::gil_scoped_release release;
            return report_to_json(optimize(scene, to_layout(tx, scene.min_distance),
                                           to_layout(rx, scene.min_distance), cfg));
        },
        py::arg("scene"), py::arg("tx"), py::arg("rx"), py::arg("power"), py::arg("noise_power"),
        py::arg("mode"), py::arg("eps1"), py::arg("eps2"), py::arg("max_outer_iters"),
        py::arg("max_sca_iters"));

    m.def(
        "run_scheme",
        [](const std::string &name, const ChannelScene &scene, std::size_t tx_count,
           std::size_t rx_count, double power, double noise_power) {
            const auto cfg = solver_config(power, noise_power, "full", 1e-3, 1e-3, 100, 100);
            SchemeResult r;
            {
                py::gil_scoped_release release;
                r = run_scheme(parse_scheme(name), scene, tx_count, rx_count, cfg);
            }
            py::dict d = metrics_dict(r.metrics);
            d["scheme"] = to_string(r.scheme);
            d["tx"] = to_points(r.tx_layout);
            d["rx"] = to_points(r.rx_layout);
            d["outer_iterations"] = r.outer_iterations;
            d["capacity_trace"] = r.capacity_trace;
            return d;
        },
        py::arg("scheme"), py::arg("scene"), py::arg("tx_count"), py::arg("rx_count"),
        py::arg("power"), py::arg("noise_power") = 1.0);

    m.def(
        "_sweep_csv",
        [](const std::string &config_json) {
            const auto cfg = experiment_config_from_json(config_json);
            py::gil_scoped_release release;
            return format_csv(run_experiment(cfg));
        },
        py::arg("config_json"));

    m.def(
        "_trace_csv",
        [](const std::string &config_json) {
            const auto cfg = experiment_config_from_json(config_json);
            py::gil_scoped_release release;
            return format_trace_csv(run_convergence_trace(cfg));
        },
        py::arg("config_json"));

    m.attr("CSV_HEADER") = kCsvHeader;
}
