// Copyright 2026 The qpulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver for the experiments.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpulse/experiments.h"

namespace {

enum Exit { kOk = 0, kError = 1, kValidationFailed = 2, kInfeasible = 3, kConfigError = 4 };

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out, scheme, name;
    std::vector<std::string> perturbations, schemes, pulses;
    std::optional<int> workers, n_levels, verification_levels, segments, seeds, starts,
        lambda_points, drag_steps;
    std::optional<double> alpha, delta, time, epsilon, target_only_time;
    std::vector<double> times, alphas;
    bool optimize_missing = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "base random seed");
    cmd->add_option("--out", o.out, "output directory (default out)");
    cmd->add_option("--name", o.name, "experiment name");
    cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
    cmd->add_option("--n-levels", o.n_levels, "transmon levels N");
    cmd->add_option("--verification-levels", o.verification_levels, "N for re-simulation");
    cmd->add_option("--alpha", o.alpha, "alpha / Omega");
    cmd->add_option("--delta", o.delta, "delta / Omega");
    cmd->add_option("--segments", o.segments, "piecewise-constant segments M");
    cmd->add_option("--epsilon", o.epsilon, "stage-B threshold on J_A");
    cmd->add_option("--scheme", o.scheme, "T, TR, TL or TRL");
    cmd->add_option("--schemes", o.schemes, "scheme list");
    cmd->add_option("--perturbation", o.perturbations, "perturbation(s): n, q, n2");
    cmd->add_option("--time", o.time, "gate time T / T_Omega");
    cmd->add_option("--target-only-time", o.target_only_time, "gate time of the T protocol in scans");
    cmd->add_option("--times", o.times, "descending gate times T / T_Omega");
    cmd->add_option("--alphas", o.alphas, "alpha / Omega grid");
    cmd->add_option("--seeds", o.seeds, "random starts per optimization");
    cmd->add_option("--starts", o.starts, "multistart count for tradeoff");
    cmd->add_option("--lambda-points", o.lambda_points, "points on the lambda_tilde grid");
    cmd->add_option("--drag-steps", o.drag_steps, "midpoint steps for DRAG");
    cmd->add_option("--pulse", o.pulses, "KEY=outcome.json (keys T, TR, TL, TR:n, ...)");
    cmd->add_flag("--optimize-missing", o.optimize_missing, "optimize pulses not given by --pulse");
}

qpulse::ExperimentSpec build_spec(const Overrides& o) {
    using namespace qpulse;
    ExperimentSpec s;
    if (!o.config.empty()) s = spec_from_json(read_json(o.config));
    if (o.seed) s.seed = *o.seed;
    if (o.out) s.output_dir = *o.out;
    if (o.name) s.name = *o.name;
    if (o.workers) s.workers = *o.workers;
    if (o.n_levels) s.model.n_levels = *o.n_levels;
    if (o.verification_levels) s.verification_n_levels = *o.verification_levels;
    if (o.alpha) s.model.alpha_over_omega = *o.alpha;
    if (o.delta) s.model.delta_over_omega = *o.delta;
    if (o.segments) s.optimizer.n_segments = *o.segments;
    if (o.epsilon) s.optimizer.epsilon_a = *o.epsilon;
    try {
        if (o.scheme) s.optimizer.scheme = scheme_from_string(*o.scheme);
        if (!o.schemes.empty()) {
            s.schemes.clear();
            for (const auto& x : o.schemes) s.schemes.push_back(scheme_from_string(x));
            s.scatter_schemes = s.schemes;
        }
        if (!o.perturbations.empty()) {
            s.perturbations.clear();
            for (const auto& x : o.perturbations) s.perturbations.push_back(perturbation_from_string(x));
            s.optimizer.perturbation = s.perturbations.front();
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigurationError(e.what());
    }
    if (o.time) {
        s.t_over_tomega = *o.time;
        s.scatter_times = {*o.time};
    }
    if (o.target_only_time) s.target_only_time = *o.target_only_time;
    if (!o.times.empty()) s.times = o.times;
    if (!o.alphas.empty()) s.alphas = o.alphas;
    if (o.alpha) s.scatter_alphas = {*o.alpha};
    if (o.seeds) s.n_seeds = *o.seeds;
    if (o.starts) s.n_starts = *o.starts;
    if (o.lambda_points) s.lambdas.points = *o.lambda_points;
    if (o.drag_steps) s.drag_steps = *o.drag_steps;
    for (const auto& p : o.pulses) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigurationError("--pulse expects KEY=PATH, got " + p);
        s.pulses[p.substr(0, eq)] = p.substr(eq + 1);
    }
    if (o.optimize_missing) s.optimize_missing = true;
    s.validate();
    return s;
}

int report(const qpulse::RunResult& r, bool validation = false) {
    for (const auto& m : r.messages) std::cerr << "qpulse: " << m << '\n';
    std::cout << r.directory.string() << '\n';
    std::fprintf(stderr, "qpulse: %d rows, %d failures, %d infeasible\n", r.rows, r.failures,
                 r.infeasible);
    if (validation) return r.failures ? kValidationFailed : kOk;
    if (r.infeasible || r.failures) return kInfeasible;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transmon pulse synthesis: optimization, sweeps, scans and validation"};
    app.require_subcommand(1);
    Overrides o;
    bool flip_sign = false;

    struct Command {
        const char* name;
        const char* help;
        std::function<qpulse::RunResult(const qpulse::ExperimentSpec&)> run;
    };
    const std::vector<Command> commands{
        {"optimize", "two-stage optimization at one gate time", qpulse::run_optimize},
        {"sweep-time", "optimized costs against gate time", qpulse::run_time_sweep},
        {"sweep-alpha", "time sweeps for several anharmonicities", qpulse::run_alpha_sweep},
        {"scan-perturbation", "target infidelity under a static perturbation", qpulse::run_perturbation_scan},
        {"traces", "time-resolved fidelity and leakage", qpulse::run_dynamics_traces},
        {"tradeoff", "multistart robustness-leakage scatter", qpulse::run_tradeoff_scatter},
        {"drag", "DRAG baseline pulses", qpulse::run_drag},
    };
    std::vector<CLI::App*> subs;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, o);
        subs.push_back(sub);
    }
    CLI::App* validate = app.add_subcommand("validate", "run the oracle suite");
    add_common(validate, o);
    validate->add_flag("--flip-susceptibility-sign", flip_sign, "mutation smoke test");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        const qpulse::ExperimentSpec spec = build_spec(o);
        if (validate->parsed()) {
            qpulse::ValidationOptions opts;
            if (flip_sign)
                opts.susceptibility = [](const qpulse::AveragedPerturbation& v,
                                         const qpulse::ComplexMatrix& p, int d, double t) {
                    return -qpulse::susceptibility(v, p, d, t);
                };
            return report(qpulse::run_validation(spec, opts), true);
        }
        for (std::size_t i = 0; i < commands.size(); ++i)
            if (subs[i]->parsed()) return report(commands[i].run(spec));
    } catch (const qpulse::ConfigurationError& e) {
        std::cerr << "qpulse: configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "qpulse: " << e.what() << '\n';
        return kError;
    }
    return kError;
}
