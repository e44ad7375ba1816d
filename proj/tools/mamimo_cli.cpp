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

#include "mamimo/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace mamimo;

namespace {

struct Overrides {
    std::string config_path;
    std::size_t N = 0, M = 0, L = 0;
    std::vector<double> A_over_lambda, snr_db;
    double D_over_lambda = -1.0;
    std::size_t realizations = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> schemes;
    double eps1 = -1.0, eps2 = -1.0;
    int max_outer_iters = -1, max_sca_iters = -1;
    std::size_t workers = 0;
    std::string output;
};

void add_experiment_flags(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--config", o.config_path, "JSON file with experiment settings")->check(CLI::ExistingFile);
    cmd->add_option("-N,--tx", o.N, "transmit antennas");
    cmd->add_option("-M,--rx", o.M, "receive antennas");
    cmd->add_option("-L,--paths", o.L, "propagation paths per side");
    cmd->add_option("-A,--A-over-lambda", o.A_over_lambda, "region side in wavelengths (list)");
    cmd->add_option("--snr-db", o.snr_db, "SNR P/noise in dB (list)");
    cmd->add_option("-D,--D-over-lambda", o.D_over_lambda, "minimum antenna distance in wavelengths");
    cmd->add_option("-r,--realizations", o.realizations, "channel realizations per grid point");
    cmd->add_option("-s,--seed", o.seed, "master seed");
    cmd->add_option("--schemes", o.schemes, "FPA AS RMA APS SEPM PROPOSED");
    cmd->add_option("--eps1", o.eps1, "inner relative tolerance");
    cmd->add_option("--eps2", o.eps2, "outer relative tolerance");
    cmd->add_option("--max-outer-iters", o.max_outer_iters);
    cmd->add_option("--max-sca-iters", o.max_sca_iters);
    cmd->add_option("-j,--workers", o.workers, "worker threads");
    cmd->add_option("-o,--output", o.output, "output file (stdout when empty)");
}

ExperimentConfig resolve(const CLI::App *cmd, const Overrides &o) {
    ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_experiment_config(o.config_path);
    auto given = [cmd](const char *name) { return cmd->count(name) > 0; };
    if (given("--tx")) cfg.N = o.N;
    if (given("--rx")) cfg.M = o.M;
    if (given("--paths")) cfg.L = o.L;
    if (given("--A-over-lambda")) cfg.A_over_lambda = o.A_over_lambda;
    if (given("--snr-db")) cfg.snr_db = o.snr_db;
    if (given("--D-over-lambda")) cfg.D_over_lambda = o.D_over_lambda;
    if (given("--realizations")) cfg.realizations = o.realizations;
    if (given("--seed")) cfg.seed = o.seed;
    if (given("--schemes")) {
        cfg.schemes.clear();
        for (const auto &s : o.schemes)
            cfg.schemes.push_back(parse_scheme(s));
    }
    if (given("--eps1")) cfg.eps1 = o.eps1;
    if (given("--eps2")) cfg.eps2 = o.eps2;
    if (given("--max-outer-iters")) cfg.max_outer_iters = o.max_outer_iters;
    if (given("--max-sca-iters")) cfg.max_sca_iters = o.max_sca_iters;
    if (given("--workers")) cfg.workers = o.workers;
    if (given("--output")) cfg.output = o.output;
    cfg.validate();
    return cfg;
}

void deliver(const std::string &text, const std::string &path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out || !(out << text))
        throw Error("cannot write '" + path + "'");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Capacity maximization for movable-antenna MIMO links"};
    app.require_subcommand(1);

    Overrides solve_opts, trace_opts, sweep_opts;
    std::string scene_path, mode_name = "full", save_scene_path;
    std::size_t realization = 0;

    auto *solve_cmd = app.add_subcommand("solve", "optimize one scene and print the report as JSON");
    add_experiment_flags(solve_cmd, solve_opts);
    solve_cmd->add_option("--scene", scene_path, "scene JSON file (otherwise drawn from the seed)")
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--realization", realization, "realization index of the drawn scene");
    solve_cmd->add_option("--mode", mode_name, "full, sepm, miso or simo");
    solve_cmd->add_option("--save-scene", save_scene_path, "write the scene used to this file");

    auto *trace_cmd = app.add_subcommand("trace", "mean capacity per outer iteration as CSV");
    add_experiment_flags(trace_cmd, trace_opts);

    auto *sweep_cmd = app.add_subcommand("sweep", "scheme comparison over region sizes and SNRs as CSV");
    add_experiment_flags(sweep_cmd, sweep_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (solve_cmd->parsed()) {
            const auto cfg = resolve(solve_cmd, solve_opts);
            ChannelScene scene = scene_path.empty()
                                     ? experiment_scene(cfg, cfg.A_over_lambda.front(), cfg.snr_db.front(),
                                                        realization)
                                     : load_scene(scene_path);
            if (!save_scene_path.empty())
                save_scene(scene, save_scene_path);
            SolverConfig solver = cfg.solver_config(cfg.snr_db.front());
            solver.mode = parse_solve_mode(mode_name);
            AntennaLayout tx = circle_packing_init(cfg.N, scene.tx_region, scene.min_distance);
            AntennaLayout rx = circle_packing_init(cfg.M, scene.rx_region, scene.min_distance);
            deliver(report_to_json(optimize(scene, tx, rx, solver)) + "\n", cfg.output);
        } else if (trace_cmd->parsed()) {
            const auto cfg = resolve(trace_cmd, trace_opts);
            deliver(format_trace_csv(run_convergence_trace(cfg)), cfg.output);
        } else if (sweep_cmd->parsed()) {
            const auto cfg = resolve(sweep_cmd, sweep_opts);
            const auto rows = run_experiment(cfg);
            if (cfg.output.empty())
                std::cout << format_csv(rows);
            else
                emit_csv(rows, cfg.output);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
