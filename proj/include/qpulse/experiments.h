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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpulse/costfn.h"
#include "qpulse/drag.h"
#include "qpulse/optimizer.h"
#include "qpulse/oracles.h"
#include "qpulse/serialize.h"
#include "qpulse/transmon.h"

namespace qpulse {

struct LambdaGrid {
    double min = -0.15;
    double max = 0.15;
    int points = 41;

    std::vector<double> values() const;
};

/// Everything an experiment needs; loaded from JSON and overridden by CLI
/// flags. Times are in T_Omega, alphas in units of Omega.
struct ExperimentSpec {
    std::string name = "experiment";
    TransmonParams model;
    OptimizationConfig optimizer;
    std::vector<Scheme> schemes{Scheme::T, Scheme::TR};
    std::vector<PerturbationKind> perturbations{PerturbationKind::Number};
    std::vector<double> times{2.0, 1.5, 1.0, 0.7, 0.6, 0.5, 0.4, 0.3};
    std::vector<double> alphas{-1.0, -2.0, -5.0};
    LambdaGrid lambdas;
    std::optional<std::uint64_t> seed;
    int n_seeds = 10;
    int n_starts = 50;
    double t_over_tomega = 1.3;
    double target_only_time = 0.6;
    int verification_n_levels = 11;
    int workers = 0;
    std::filesystem::path output_dir = "out";
    DragParams drag;
    int drag_steps = kDefaultSampledSteps;
    std::vector<double> scatter_times{1.3};
    std::vector<double> scatter_alphas{-2.0};
    std::vector<Scheme> scatter_schemes{Scheme::T, Scheme::TR, Scheme::TL, Scheme::TRL};
    std::vector<double> drag_times;
    std::vector<double> drag_sigmas;
    /// Protocol key ("T", "TR", "TL", "TR:n", ...) -> saved outcome JSON.
    std::map<std::string, std::filesystem::path> pulses;
    bool optimize_missing = false;

    void validate() const;
    std::uint64_t require_seed(const std::string& command) const;
};

ExperimentSpec spec_from_json(const Json& j, ExperimentSpec base = {});
Json to_json(const ExperimentSpec& s);

struct RunResult {
    std::filesystem::path directory;
    int rows = 0;
    int failures = 0;
    int infeasible = 0;
    std::vector<std::string> messages;
};

/// out/<experiment>/<UTC timestamp>/ with charts/ and spec.json.
std::filesystem::path make_run_directory(const ExperimentSpec& spec, const std::string& experiment);

RunResult run_optimize(const ExperimentSpec& spec);
RunResult run_time_sweep(const ExperimentSpec& spec);
RunResult run_alpha_sweep(const ExperimentSpec& spec);
RunResult run_perturbation_scan(const ExperimentSpec& spec);
RunResult run_dynamics_traces(const ExperimentSpec& spec);
RunResult run_tradeoff_scatter(const ExperimentSpec& spec);
RunResult run_drag(const ExperimentSpec& spec);

using SusceptibilityFn =
    std::function<double(const AveragedPerturbation&, const ComplexMatrix&, int, double)>;

struct ValidationOptions {
    SusceptibilityFn susceptibility;  // empty: the library closed form
    int mc_samples = 100000;
    std::uint64_t seed = 12345;
};

/// Every registered oracle check, in a fixed order.
std::vector<OracleReport> validation_checks(const ValidationOptions& options = {});

/// Runs validation_checks and writes validation.jsonl. `failures` counts
/// failed checks.
RunResult run_validation(const ExperimentSpec& spec, const ValidationOptions& options = {});

/// Rebuilds every chart of a run from its CSV files.
void render_charts(const std::filesystem::path& run_directory, const std::string& experiment);

}  // namespace qpulse
