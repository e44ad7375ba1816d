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

#include <json.hpp>

#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace mamimo {

using nlohmann::json;

void ExperimentConfig::validate() const {
    if (N == 0 || M == 0)
        throw ConfigError("N and M must be at least 1");
    if (L == 0)
        throw ConfigError("L must be at least 1");
    if (A_over_lambda.empty() || snr_db.empty() || schemes.empty())
        throw ConfigError("A_over_lambda, snr_db and schemes must be non-empty");
    for (double a : A_over_lambda)
        if (!(a > 0.0) || !std::isfinite(a))
            throw ConfigError("A_over_lambda values must be positive");
    for (double s : snr_db)
        if (!std::isfinite(s))
            throw ConfigError("snr_db values must be finite");
    if (!(D_over_lambda >= 0.0) || !std::isfinite(D_over_lambda))
        throw ConfigError("D_over_lambda must be non-negative");
    if (realizations == 0)
        throw ConfigError("realizations must be at least 1");
    if (workers == 0)
        throw ConfigError("workers must be at least 1");
    solver_config(snr_db.front()).validate();
}

SolverConfig ExperimentConfig::solver_config(double snr) const {
    SolverConfig cfg;
    cfg.power = std::pow(10.0, snr / 10.0);
    cfg.noise_power = 1.0;
    cfg.sca_tolerance = eps1;
    cfg.outer_tolerance = eps2;
    cfg.max_outer_iters = max_outer_iters;
    cfg.max_sca_iters = max_sca_iters;
    return cfg;
}

namespace {

std::vector<double> number_or_list(const json &j, const char *key) {
    if (j.is_number())
        return {j.get<double>()};
    if (j.is_array())
        return j.get<std::vector<double>>();
    throw ConfigError(std::string(key) + " must be a number or a list of numbers");
}

} // namespace

ExperimentConfig experiment_config_from_json(const std::string &text) {
    ExperimentConfig cfg;
    try {
        const json j = json::parse(text);
        if (!j.is_object())
            throw ConfigError("config must be a JSON object");
        for (const auto &[key, value] : j.items()) {
            if (key == "N") cfg.N = value.get<std::size_t>();
            else if (key == "M") cfg.M = value.get<std::size_t>();
            else if (key == "L") cfg.L = value.get<std::size_t>();
            else if (key == "A_over_lambda") cfg.A_over_lambda = number_or_list(value, "A_over_lambda");
            else if (key == "snr_db") cfg.snr_db = number_or_list(value, "snr_db");
            else if (key == "D_over_lambda") cfg.D_over_lambda = value.get<double>();
            else if (key == "realizations") cfg.realizations = value.get<std::size_t>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "schemes") {
                cfg.schemes.clear();
                for (const auto &s : value)
                    cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
            } else if (key == "eps1") cfg.eps1 = value.get<double>();
            else if (key == "eps2") cfg.eps2 = value.get<double>();
            else if (key == "max_outer_iters") cfg.max_outer_iters = value.get<int>();
            else if (key == "max_sca_iters") cfg.max_sca_iters = value.get<int>();
            else if (key == "workers") cfg.workers = value.get<std::size_t>();
            else if (key == "output") cfg.output = value.get<std::string>();
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return experiment_config_from_json(buffer.str());
}

std::string experiment_config_to_json(const ExperimentConfig &cfg) {
    std::vector<std::string> schemes;
    for (auto s : cfg.schemes)
        schemes.push_back(to_string(s));
    const json j = {{"N", cfg.N},
                    {"M", cfg.M},
                    {"L", cfg.L},
                    {"A_over_lambda", cfg.A_over_lambda},
                    {"snr_db", cfg.snr_db},
                    {"D_over_lambda", cfg.D_over_lambda},
                    {"realizations", cfg.realizations},
                    {"seed", cfg.seed},
                    {"schemes", schemes},
                    {"eps1", cfg.eps1},
                    {"eps2", cfg.eps2},
                    {"max_outer_iters", cfg.max_outer_iters},
                    {"max_sca_iters", cfg.max_sca_iters},
                    {"workers", cfg.workers},
                    {"output", cfg.output}};
    return j.dump(2);
}

namespace {

std::uint64_t value_bits(double v) { return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v); }

} // namespace

std::uint64_t scene_seed(std::uint64_t master, std::size_t paths, double a_over_lambda,
                         double snr_db, std::size_t index) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(paths));
    h = splitmix64(h ^ value_bits(a_over_lambda));
    h = splitmix64(h ^ value_bits(snr_db));
    return splitmix64(h ^ static_cast<std::uint64_t>(index));
}

ChannelScene experiment_scene(const ExperimentConfig &cfg, double a_over_lambda, double snr_db,
                              std::size_t index) {
    const double wavelength = 1.0;
    return random_scene(cfg.L, wavelength, a_over_lambda * wavelength,
                        cfg.D_over_lambda * wavelength,
                        scene_seed(cfg.seed, cfg.L, a_over_lambda, snr_db, index));
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

namespace {

void default_log(const std::string &message) { std::cerr << message << '\n'; }

struct Outcome {
    std::optional<SchemeResult> result;
    std::string error;
};

} // namespace

std::vector<AggregateRow> run_experiment(const ExperimentConfig &cfg, const FailureLog &log) {
    cfg.validate();
    const FailureLog &sink = log ? log : FailureLog(default_log);
    const std::size_t n_a = cfg.A_over_lambda.size(), n_snr = cfg.snr_db.size();
    const std::size_t n_schemes = cfg.schemes.size(), n_real = cfg.realizations;

    // outcomes[((a * n_snr + s) * n_real + r) * n_schemes + k]
    std::vector<Outcome> outcomes(n_a * n_snr * n_real * n_schemes);
    parallel_for(n_a * n_snr * n_real, cfg.workers, [&](std::size_t job) {
        const std::size_t r = job % n_real;
        const std::size_t s = (job / n_real) % n_snr;
        const std::size_t a = job / (n_real * n_snr);
        const ChannelScene scene = experiment_scene(cfg, cfg.A_over_lambda[a], cfg.snr_db[s], r);
        const SolverConfig solver = cfg.solver_config(cfg.snr_db[s]);
        for (std::size_t k = 0; k < n_schemes; ++k) {
            auto &slot = outcomes[job * n_schemes + k];
            try {
                slot.result = run_scheme(cfg.schemes[k], scene, cfg.N, cfg.M, solver);
            } catch (const std::exception &e) {
                slot.error = e.what();
            }
        }
    });

    std::vector<AggregateRow> rows;
    for (std::size_t k = 0; k < n_schemes; ++k)
        for (std::size_t a = 0; a < n_a; ++a)
            for (std::size_t s = 0; s < n_snr; ++s) {
                AggregateRow row;
                row.scheme = cfg.schemes[k];
                row.A_over_lambda = cfg.A_over_lambda[a];
                row.snr_db = cfg.snr_db[s];
                row.L = cfg.L;
                row.realizations = n_real;
                double sum = 0.0, sum_sq = 0.0;
                std::size_t ok = 0;
                for (std::size_t r = 0; r < n_real; ++r) {
                    const auto &slot = outcomes[((a * n_snr + s) * n_real + r) * n_schemes + k];
                    if (!slot.result) {
                        ++row.failures;
                        std::ostringstream msg;
                        msg << to_string(row.scheme) << " A/lambda=" << row.A_over_lambda
                            << " snr_db=" << row.snr_db << " realization " << r
                            << " failed: " << slot.error;
                        sink(msg.str());
                        continue;
                    }
                    const auto &m = slot.result->metrics;
                    ++ok;
                    sum += m.capacity;
                    sum_sq += m.capacity * m.capacity;
                    row.mean_total_power += m.total_power;
                    row.mean_strongest_eig_power += m.strongest_eig_power;
                    row.mean_condition_number += m.condition_number;
                    row.mean_outer_iters += slot.result->outer_iterations;
                }
                if (ok > 0) {
                    const double n = static_cast<double>(ok);
                    row.mean_capacity = sum / n;
                    row.mean_total_power /= n;
                    row.mean_strongest_eig_power /= n;
                    row.mean_condition_number /= n;
                    row.mean_outer_iters /= n;
                    if (ok > 1) {
                        const double var = std::max(0.0, (sum_sq - n * row.mean_capacity * row.mean_capacity) / (n - 1.0));
                        row.stderr_capacity = std::sqrt(var / n);
                    }
                }
                rows.push_back(row);
            }
    return rows;
}

ConvergenceTrace run_convergence_trace(const ExperimentConfig &cfg, const FailureLog &log) {
    cfg.validate();
    if (cfg.A_over_lambda.size() != 1 || cfg.snr_db.size() != 1)
        throw ConfigError("a convergence trace needs a single A_over_lambda and snr_db");
    const FailureLog &sink = log ? log : FailureLog(default_log);
    const SolverConfig solver = cfg.solver_config(cfg.snr_db.front());

    std::vector<Outcome> outcomes(cfg.realizations);
    parallel_for(cfg.realizations, cfg.workers, [&](std::size_t r) {
        try {
            const auto scene = experiment_scene(cfg, cfg.A_over_lambda.front(), cfg.snr_db.front(), r);
            outcomes[r].result = run_proposed(scene, cfg.N, cfg.M, solver);
        } catch (const std::exception &e) {
            outcomes[r].error = e.what();
        }
    });

    ConvergenceTrace trace;
    std::size_t longest = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        if (!outcomes[r].result) {
            ++trace.failures;
            sink("realization " + std::to_string(r) + " failed: " + outcomes[r].error);
            continue;
        }
        trace.per_realization.push_back(outcomes[r].result->capacity_trace);
        longest = std::max(longest, trace.per_realization.back().size());
    }
    trace.mean.assign(longest, 0.0);
    if (trace.per_realization.empty())
        return trace;
    for (const auto &run : trace.per_realization)
        for (std::size_t i = 0; i < longest; ++i)
            trace.mean[i] += run[std::min(i, run.size() - 1)];
    for (auto &v : trace.mean)
        v /= static_cast<double>(trace.per_realization.size());
    return trace;
}

namespace {

void write_text(const std::string &text, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out)
        throw Error("failed writing '" + path + "'");
}

} // namespace

std::string format_csv(const std::vector<AggregateRow> &rows) {
    if (rows.empty())
        throw Error("no rows to write");
    std::ostringstream out;
    out << std::setprecision(15) << kCsvHeader << '\n';
    for (const auto &r : rows)
        out << to_string(r.scheme) << ',' << r.A_over_lambda << ',' << r.snr_db << ',' << r.L << ','
            << r.mean_capacity << ',' << r.stderr_capacity << ',' << r.mean_total_power << ','
            << r.mean_strongest_eig_power << ',' << r.mean_condition_number << ','
            << r.mean_outer_iters << ',' << r.realizations << ',' << r.failures << '\n';
    return out.str();
}

void emit_csv(const std::vector<AggregateRow> &rows, const std::string &path) {
    write_text(format_csv(rows), path);
}

std::string format_trace_csv(const ConvergenceTrace &trace) {
    if (trace.mean.empty())
        throw Error("empty convergence trace");
    std::ostringstream out;
    out << std::setprecision(15) << "iteration,mean_capacity_bps_hz,realizations\n";
    for (std::size_t i = 0; i < trace.mean.size(); ++i)
        out << i << ',' << trace.mean[i] << ',' << trace.per_realization.size() << '\n';
    return out.str();
}

void emit_trace_csv(const ConvergenceTrace &trace, const std::string &path) {
    write_text(format_trace_csv(trace), path);
}

} // namespace mamimo
