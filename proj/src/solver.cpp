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

#include "mamimo/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <utility>

namespace mamimo {

using nlohmann::json;

namespace {

ComplexMatrix hermitian_part(const ComplexMatrix &a) { return 0.5 * (a + a.adjoint()); }

std::vector<Position> all_but(const std::vector<Position> &positions, std::size_t skip) {
    std::vector<Position> out;
    out.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (i != skip)
            out.push_back(positions[i]);
    return out;
}

void require_feasible(const AntennaLayout &layout, const Region &region, const char *side) {
    if (layout.size() == 0)
        throw ConfigError(std::string(side) + " layout is empty");
    if (!is_feasible(layout, region))
        throw ConfigError(std::string("initial ") + side +
                          " layout violates its region or minimum distance");
}

double relative_increase(double previous, double current) {
    return (current - previous) / std::max(std::abs(previous), 1e-300);
}

double single_stream_capacity(double strongest, const SolverConfig &cfg) {
    return std::log1p(cfg.power * strongest / cfg.noise_power) / std::numbers::ln2;
}

// One sequential sweep over the antennas of a side. `t` maps a field response to the
// effective column (T^H f); the leave-one-out inverse is carried from antenna to antenna with
// the rank-two update, and each column is refreshed as soon as its antenna has moved.
void sweep_side(std::vector<Position> &positions, double min_distance, const Region &region,
                const PathSet &paths, double wavelength, const ComplexMatrix &t, double sigma2,
                const PositionUpdater &updater) {
    ComplexMatrix columns = t.adjoint() * field_response_matrix(positions, paths, wavelength);
    ComplexMatrix inverse = leave_one_out_inverse(columns, 0, sigma2);
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        if (k > 0)
            inverse = rank_two_update(inverse, columns.col(col - 1), columns.col(col), sigma2);
        const QuadraticFormObjective obj{hermitian_part(t * inverse * t.adjoint()), paths,
                                         wavelength};
        positions[k] = updater(obj, positions[k], region, all_but(positions, k), min_distance);
        columns.col(col) = t.adjoint() * field_response(positions[k], paths, wavelength);
    }
}

void finish_report(SolveReport &report, const ChannelScene &scene, const SolverConfig &cfg) {
    const ComplexMatrix h = assemble_channel(scene, report.tx_layout, report.rx_layout);
    report.final_metrics = metrics_of(h, cfg.power, cfg.noise_power, cfg.rank_tolerance);
    report.outer_iterations = static_cast<int>(report.capacity_trace.size()) - 1;
    report.mode = cfg.mode;
}

} // namespace

std::string to_string(SolveMode mode) {
    switch (mode) {
    case SolveMode::full: return "full";
    case SolveMode::sepm: return "sepm";
    case SolveMode::miso: return "miso";
    case SolveMode::simo: return "simo";
    }
    return "full";
}

SolveMode parse_solve_mode(const std::string &name) {
    if (name == "full") return SolveMode::full;
    if (name == "sepm") return SolveMode::sepm;
    if (name == "miso") return SolveMode::miso;
    if (name == "simo") return SolveMode::simo;
    throw ConfigError("unknown solve mode '" + name + "' (expected full, sepm, miso or simo)");
}

void SolverConfig::validate() const {
    if (!(power > 0.0) || !(noise_power > 0.0))
        throw ConfigError("power and noise power must be positive");
    if (!(sca_tolerance > 0.0) || !(outer_tolerance > 0.0))
        throw ConfigError("convergence thresholds must be positive");
    if (max_outer_iters < 0 || max_sca_iters < 1)
        throw ConfigError("iteration limits must be non-negative (outer) and positive (SCA)");
    if (!(rank_tolerance >= 0.0))
        throw ConfigError("rank tolerance must be non-negative");
}

ComplexMatrix effective_columns_rx(const ChannelScene &scene, const AntennaLayout &tx,
                                   const AntennaLayout &rx, const ComplexMatrix &q) {
    if (static_cast<std::size_t>(q.rows()) != tx.size())
        throw ShapeMismatch("Q must be N x N");
    const ComplexMatrix k = covariance_factor(q);
    const ComplexMatrix g = field_response_matrix(tx, scene.tx_paths, scene.wavelength);
    const ComplexMatrix f = field_response_matrix(rx, scene.rx_paths, scene.wavelength);
    return (scene.sigma * g * k).adjoint() * f;
}

ComplexMatrix effective_columns_tx(const ChannelScene &scene, const AntennaLayout &tx,
                                   const AntennaLayout &rx, const ComplexMatrix &s) {
    if (static_cast<std::size_t>(s.rows()) != rx.size())
        throw ShapeMismatch("S must be M x M");
    const ComplexMatrix k = covariance_factor(s);
    const ComplexMatrix g = field_response_matrix(tx, scene.tx_paths, scene.wavelength);
    const ComplexMatrix f = field_response_matrix(rx, scene.rx_paths, scene.wavelength);
    return (scene.sigma.adjoint() * f * k).adjoint() * g;
}

ComplexMatrix leave_one_out_inverse(const ComplexMatrix &columns, Eigen::Index excluded,
                                    double noise_power) {
    const Eigen::Index n = columns.rows();
    ComplexMatrix gram = ComplexMatrix::Identity(n, n);
    for (Eigen::Index k = 0; k < columns.cols(); ++k)
        if (k != excluded)
            gram += columns.col(k) * columns.col(k).adjoint() / noise_power;
    return hermitian_part(gram.llt().solve(ComplexMatrix::Identity(n, n)));
}

ComplexMatrix rank_two_update(const ComplexMatrix &inverse, const ComplexVector &previous,
                              const ComplexVector &next, double noise_power) {
    const Eigen::Index n = inverse.rows();
    ComplexMatrix z1(n, 2);
    ComplexMatrix z2(n, 2);
    z1 << previous, next;
    z2 << previous, -next;
    const ComplexMatrix az1 = inverse * z1;
    const ComplexMatrix core =
        ComplexMatrix::Identity(2, 2) + z2.adjoint() * az1 / noise_power;
    const ComplexMatrix updated =
        inverse - az1 * core.partialPivLu().solve(z2.adjoint() * inverse) / noise_power;
    return hermitian_part(updated);
}

QuadraticFormObjective build_rx_objective(const ChannelScene &scene, const AntennaLayout &tx,
                                          const ComplexMatrix &inverse,
                                          const ComplexMatrix &q_factor) {
    const ComplexMatrix t =
        scene.sigma * field_response_matrix(tx, scene.tx_paths, scene.wavelength) * q_factor;
    return {hermitian_part(t * inverse * t.adjoint()), scene.rx_paths, scene.wavelength};
}

QuadraticFormObjective build_tx_objective(const ChannelScene &scene, const AntennaLayout &rx,
                                          const ComplexMatrix &inverse,
                                          const ComplexMatrix &s_factor) {
    const ComplexMatrix t = scene.sigma.adjoint() *
                            field_response_matrix(rx, scene.rx_paths, scene.wavelength) * s_factor;
    return {hermitian_part(t * inverse * t.adjoint()), scene.tx_paths, scene.wavelength};
}

PositionUpdater sca_updater(const SolverConfig &cfg, int *iteration_counter) {
    const ScaOptions options{cfg.sca_tolerance, cfg.max_sca_iters};
    return [options, iteration_counter](const QuadraticFormObjective &obj, Position start,
                                        const Region &region, const std::vector<Position> &others,
                                        double min_distance) {
        const auto result = sca_optimize_position(obj, start, region, others, min_distance, options);
        if (iteration_counter)
            *iteration_counter += result.iterations;
        return result.position;
    };
}

SolveReport alternating_optimize(const ChannelScene &scene, AntennaLayout tx, AntennaLayout rx,
                                 const SolverConfig &cfg, SweepPlan plan,
                                 const PositionUpdater &updater) {
    cfg.validate();
    scene.validate();
    require_feasible(tx, scene.tx_region, "transmit");
    require_feasible(rx, scene.rx_region, "receive");

    const double sigma2 = cfg.noise_power;
    SolveReport report;
    report.mode = cfg.mode;

    auto record = [&](const ComplexMatrix &h) {
        const auto result = optimal_covariance(h, cfg.power, sigma2, cfg.rank_tolerance);
        report.capacity_trace.push_back(result.capacity);
        report.strongest_eig_trace.push_back(result.singular(0) * result.singular(0));
        report.covariance = result.covariance;
        return result;
    };

    auto current = record(assemble_channel(scene, tx, rx));
    for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
        const double before = report.capacity_trace.back();

        if (plan.receive) {
            // The transmit covariance stays fixed for the whole receive sweep.
            const ComplexMatrix t = scene.sigma *
                                    field_response_matrix(tx, scene.tx_paths, scene.wavelength) *
                                    covariance_factor(current.covariance);
            sweep_side(rx.positions, rx.min_distance, scene.rx_region, scene.rx_paths,
                       scene.wavelength, t, sigma2, updater);
        }

        if (plan.transmit) {
            const ComplexMatrix h = assemble_channel(scene, tx, rx);
            const auto reverse = receive_side_covariance(h, cfg.power, sigma2, cfg.rank_tolerance);
            const ComplexMatrix t = scene.sigma.adjoint() *
                                    field_response_matrix(rx, scene.rx_paths, scene.wavelength) *
                                    covariance_factor(reverse.covariance);
            sweep_side(tx.positions, tx.min_distance, scene.tx_region, scene.tx_paths,
                       scene.wavelength, t, sigma2, updater);
        }

        current = record(assemble_channel(scene, tx, rx));
        if (relative_increase(before, report.capacity_trace.back()) < cfg.outer_tolerance) {
            report.converged = true;
            break;
        }
    }

    report.tx_layout = std::move(tx);
    report.rx_layout = std::move(rx);
    finish_report(report, scene, cfg);
    return report;
}

namespace {

void update_all(std::vector<Position> &positions, double min_distance, const Region &region,
                const QuadraticFormObjective &obj, const PositionUpdater &updater) {
    for (std::size_t k = 0; k < positions.size(); ++k)
        positions[k] = updater(obj, positions[k], region, all_but(positions, k), min_distance);
}

QuadraticFormObjective rank_one(const ComplexVector &v, const PathSet &paths, double wavelength) {
    return {v * v.adjoint(), paths, wavelength};
}

void check_inputs(const ChannelScene &scene, const AntennaLayout &tx, const AntennaLayout &rx,
                  const SolverConfig &cfg) {
    cfg.validate();
    scene.validate();
    require_feasible(tx, scene.tx_region, "transmit");
    require_feasible(rx, scene.rx_region, "receive");
}

// Shared loop for the single-stream schemes (SEPM, MISO, SIMO). `step` performs one outer
// iteration on the layouts and returns nothing; the loop records σ_max² after each one.
template <typename Step>
SolveReport single_stream_loop(const ChannelScene &scene, AntennaLayout tx, AntennaLayout rx,
                               const SolverConfig &cfg, Step &&step) {
    SolveReport report;
    report.mode = cfg.mode;
    auto record = [&] {
        const ComplexMatrix h = assemble_channel(scene, tx, rx);
        const auto svd = truncated_svd(h, cfg.rank_tolerance);
        const double strongest = svd.singular(0) * svd.singular(0);
        report.strongest_eig_trace.push_back(strongest);
        report.capacity_trace.push_back(single_stream_capacity(strongest, cfg));
        return svd;
    };

    auto svd = record();
    for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
        const double before = report.strongest_eig_trace.back();
        step(tx, rx, svd);
        svd = record();
        if (relative_increase(before, report.strongest_eig_trace.back()) < cfg.outer_tolerance) {
            report.converged = true;
            break;
        }
    }
    report.tx_layout = std::move(tx);
    report.rx_layout = std::move(rx);
    return report;
}

AntennaLayout single_antenna_at_center(const Region &region, double min_distance) {
    return AntennaLayout{{region.center()}, min_distance};
}

} // namespace

SolveReport solve(const ChannelScene &scene, const AntennaLayout &init_tx,
                  const AntennaLayout &init_rx, const SolverConfig &cfg) {
    SolverConfig full = cfg;
    full.mode = SolveMode::full;
    int sca_count = 0;
    auto report = alternating_optimize(scene, init_tx, init_rx, full, SweepPlan{},
                                       sca_updater(full, &sca_count));
    report.sca_iterations = sca_count;
    return report;
}

SolveReport solve_sepm(const ChannelScene &scene, const AntennaLayout &init_tx,
                       const AntennaLayout &init_rx, const SolverConfig &cfg) {
    SolverConfig sepm = cfg;
    sepm.mode = SolveMode::sepm;
    check_inputs(scene, init_tx, init_rx, sepm);
    int sca_count = 0;
    const auto updater = sca_updater(sepm, &sca_count);

    auto step = [&](AntennaLayout &tx, AntennaLayout &rx, const SpectralDecomposition &svd) {
        // Transmit beam fixed: each receive antenna maximizes |c^H f(r_m)|².
        const ComplexVector c = scene.sigma *
                                field_response_matrix(tx, scene.tx_paths, scene.wavelength) *
                                svd.right.col(0);
        update_all(rx.positions, rx.min_distance, scene.rx_region,
                   rank_one(c, scene.rx_paths, scene.wavelength), updater);

        // Strongest right singular vector of H^H is the strongest left singular vector of H.
        const auto reverse = truncated_svd(assemble_channel(scene, tx, rx), sepm.rank_tolerance);
        const ComplexVector d = scene.sigma.adjoint() *
                                field_response_matrix(rx, scene.rx_paths, scene.wavelength) *
                                reverse.left.col(0);
        update_all(tx.positions, tx.min_distance, scene.tx_region,
                   rank_one(d, scene.tx_paths, scene.wavelength), updater);
    };

    auto report = single_stream_loop(scene, init_tx, init_rx, sepm, step);
    const ComplexMatrix h = assemble_channel(scene, report.tx_layout, report.rx_layout);
    report.covariance =
        optimal_covariance(h, sepm.power, sepm.noise_power, sepm.rank_tolerance).covariance;
    report.sca_iterations = sca_count;
    finish_report(report, scene, sepm);
    return report;
}

SolveReport solve_miso(const ChannelScene &scene, const AntennaLayout &init_tx,
                       const SolverConfig &cfg) {
    SolverConfig miso = cfg;
    miso.mode = SolveMode::miso;
    const auto init_rx = single_antenna_at_center(scene.rx_region, init_tx.min_distance);
    check_inputs(scene, init_tx, init_rx, miso);
    int sca_count = 0;
    const auto updater = sca_updater(miso, &sca_count);

    auto step = [&](AntennaLayout &tx, AntennaLayout &rx, const SpectralDecomposition &) {
        const ComplexMatrix sg =
            scene.sigma * field_response_matrix(tx, scene.tx_paths, scene.wavelength);
        update_all(rx.positions, rx.min_distance, scene.rx_region,
                   {hermitian_part(sg * sg.adjoint()), scene.rx_paths, scene.wavelength}, updater);
        const ComplexVector d =
            scene.sigma.adjoint() * field_response(rx.positions[0], scene.rx_paths, scene.wavelength);
        update_all(tx.positions, tx.min_distance, scene.tx_region,
                   rank_one(d, scene.tx_paths, scene.wavelength), updater);
    };

    auto report = single_stream_loop(scene, init_tx, init_rx, miso, step);
    // Maximum ratio transmission.
    const ComplexMatrix h = assemble_channel(scene, report.tx_layout, report.rx_layout);
    const ComplexVector hv = h.row(0).adjoint();
    report.covariance = miso.power * hv * hv.adjoint() / hv.squaredNorm();
    report.sca_iterations = sca_count;
    finish_report(report, scene, miso);
    return report;
}

SolveReport solve_simo(const ChannelScene &scene, const AntennaLayout &init_rx,
                       const SolverConfig &cfg) {
    SolverConfig simo = cfg;
    simo.mode = SolveMode::simo;
    const auto init_tx = single_antenna_at_center(scene.tx_region, init_rx.min_distance);
    check_inputs(scene, init_tx, init_rx, simo);
    int sca_count = 0;
    const auto updater = sca_updater(simo, &sca_count);

    auto step = [&](AntennaLayout &tx, AntennaLayout &rx, const SpectralDecomposition &) {
        const ComplexMatrix sf =
            scene.sigma.adjoint() * field_response_matrix(rx, scene.rx_paths, scene.wavelength);
        update_all(tx.positions, tx.min_distance, scene.tx_region,
                   {hermitian_part(sf * sf.adjoint()), scene.tx_paths, scene.wavelength}, updater);
        const ComplexVector c =
            scene.sigma * field_response(tx.positions[0], scene.tx_paths, scene.wavelength);
        update_all(rx.positions, rx.min_distance, scene.rx_region,
                   rank_one(c, scene.rx_paths, scene.wavelength), updater);
    };

    auto report = single_stream_loop(scene, init_tx, init_rx, simo, step);
    report.covariance = ComplexMatrix::Constant(1, 1, Complex(simo.power, 0.0));
    report.sca_iterations = sca_count;
    finish_report(report, scene, simo);
    return report;
}

SolveReport optimize(const ChannelScene &scene, const AntennaLayout &init_tx,
                     const AntennaLayout &init_rx, const SolverConfig &cfg) {
    switch (cfg.mode) {
    case SolveMode::full:
        return solve(scene, init_tx, init_rx, cfg);
    case SolveMode::sepm:
        return solve_sepm(scene, init_tx, init_rx, cfg);
    case SolveMode::miso:
        if (init_rx.size() != 1)
            throw ShapeMismatch("miso mode needs exactly one receive antenna");
        return solve_miso(scene, init_tx, cfg);
    case SolveMode::simo:
        if (init_tx.size() != 1)
            throw ShapeMismatch("simo mode needs exactly one transmit antenna");
        return solve_simo(scene, init_rx, cfg);
    }
    throw ConfigError("unknown solve mode");
}

namespace {

json layout_to_json(const AntennaLayout &layout) {
    json out = json::array();
    for (const auto &p : layout.positions)
        out.push_back({p.x, p.y});
    return out;
}

json matrix_to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string report_to_json(const SolveReport &report) {
    const auto &m = report.final_metrics;
    json j = {{"mode", to_string(report.mode)},
              {"tx_layout", layout_to_json(report.tx_layout)},
              {"rx_layout", layout_to_json(report.rx_layout)},
              {"min_distance", report.tx_layout.min_distance},
              {"covariance", matrix_to_json(report.covariance)},
              {"capacity_trace", report.capacity_trace},
              {"strongest_eig_trace", report.strongest_eig_trace},
              {"final_metrics",
               {{"capacity", m.capacity},
                {"total_power", m.total_power},
                {"strongest_eig_power", m.strongest_eig_power},
                {"condition_number", m.condition_number}}},
              {"outer_iterations", report.outer_iterations},
              {"sca_iterations", report.sca_iterations},
              {"converged", report.converged}};
    return j.dump(2);
}

} // namespace mamimo
