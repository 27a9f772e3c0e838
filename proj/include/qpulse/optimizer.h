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
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpulse/costfn.h"
#include "qpulse/evaluator.h"
#include "qpulse/lbfgsb.h"
#include "qpulse/transmon.h"

namespace qpulse {

/// T: J_U only.  TR: J_U, then J_R with J_U <= eps.  TL: J_U, then J_L with
/// J_U <= eps.  TRL: J_U + J_R, then J_L with J_U + J_R <= eps.
enum class Scheme { T, TR, TL, TRL };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);
bool has_stage_b(Scheme s);
unsigned stage_a_terms(Scheme s);
unsigned stage_b_terms(Scheme s);
double stage_a_cost(Scheme s, const CostTerms& c);
double stage_b_cost(Scheme s, const CostTerms& c);

inline constexpr double kFeasibilitySlack = 1e-6;

struct OptimizationConfig {
    Scheme scheme = Scheme::T;
    double epsilon_a = 1e-4;
    int n_segments = 15;
    double bound = 1.0;
    int substeps = 8;
    int max_iters_stage_a = 2000;
    int max_iters_stage_b = 400;
    double gradient_step = 1e-6;
    double tolerance = 1e-10;           // stage-A relative cost decrease
    double gradient_tolerance = 1e-8;   // stage-A projected gradient
    std::uint64_t seed = 0;
    PerturbationKind perturbation = PerturbationKind::Number;

    void validate() const;
};

struct StageResult {
    std::vector<double> x;
    double cost = 0.0;
    int iterations = 0;
    opt::Status status = opt::Status::IterationLimit;
    std::vector<double> history;
};

struct OptimizationOutcome {
    Scheme scheme = Scheme::T;
    double t_over_tomega = 0.0;
    ControlPulse pulse;
    CostReport cost;
    int stage_a_iters = 0;
    int stage_b_iters = 0;
    double stage_a_final = 0.0;
    double stage_b_final = 0.0;
    opt::Status stage_a_status = opt::Status::IterationLimit;
    opt::Status stage_b_status = opt::Status::IterationLimit;
    bool feasible = true;   // J_A <= eps (1 + slack) at the returned pulse
    bool converged = false;
    bool failed = false;    // non-finite costs or an exception
    std::uint64_t seed = 0;
    std::string message;
};

/// Uniform draws in [-bound, bound] for all 2M amplitudes.
std::vector<double> random_guess(int n_segments, double bound, std::uint64_t seed);

PulseCostEvaluator make_evaluator(const TransmonModel& model, const OptimizationConfig& config,
                                  double t_over_tomega);

StageResult stage_a(const TransmonModel& model, const OptimizationConfig& config,
                    double t_over_tomega, std::span<const double> initial_guess);

/// Minimises J_B subject to J_A <= eps from `warm_start`. If the warm start is
/// infeasible, stage A is re-run from it once before the constrained solve.
OptimizationOutcome stage_b(const TransmonModel& model, const OptimizationConfig& config,
                            double t_over_tomega, std::span<const double> warm_start);

/// Stage A followed by stage B when the scheme has one.
OptimizationOutcome optimize(const TransmonModel& model, const OptimizationConfig& config,
                             double t_over_tomega, std::span<const double> initial_guess);

/// Ordering used to pick among runs: not failed, then feasible, then the
/// cost of the last stage.
bool better(const OptimizationOutcome& a, const OptimizationOutcome& b);

/// Best of `n_seeds` random starts with seeds config.seed, config.seed + 1, ...
OptimizationOutcome best_of_seeds(const TransmonModel& model, const OptimizationConfig& config,
                                  double t_over_tomega, int n_seeds, int workers = 0);

/// Descending gate times; the first uses `n_seeds` random starts (seeds
/// config.seed, config.seed + 1, ...) and keeps the best, every later time is
/// warm-started from the previous optimum.
std::vector<OptimizationOutcome> time_sweep(const TransmonModel& model,
                                            const OptimizationConfig& config,
                                            std::span<const double> times_over_tomega,
                                            int n_seeds, int workers = 0);

struct ScatterRow {
    Scheme scheme;
    std::uint64_t seed;
    double j_u, j_r, j_l;
    bool converged;
    bool failed;
    std::vector<double> parameters;
};

/// For each start (seed = config.seed + k), the same random guess goes through
/// every scheme. Rows are ordered by (start, scheme position) regardless of
/// worker count.
std::vector<ScatterRow> multistart_scatter(const TransmonModel& model,
                                           std::span<const Scheme> schemes, int n_starts,
                                           double t_over_tomega, const OptimizationConfig& config,
                                           int workers = 0);

/// Runs `count` independent jobs on up to `workers` threads (0 = hardware).
void parallel_for(int count, int workers, const std::function<void(int)>& job);

}  // namespace qpulse
