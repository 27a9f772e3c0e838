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

#include "qpulse/optimizer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>

#include "qpulse/sqp.h"

namespace qpulse {

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::T: return "T";
        case Scheme::TR: return "TR";
        case Scheme::TL: return "TL";
        case Scheme::TRL: return "TRL";
    }
    return "?";
}

Scheme scheme_from_string(std::string_view s) {
    if (s == "T") return Scheme::T;
    if (s == "TR" || s == "T-R") return Scheme::TR;
    if (s == "TL" || s == "T-L") return Scheme::TL;
    if (s == "TRL" || s == "TR-L") return Scheme::TRL;
    throw std::invalid_argument("unknown scheme '" + std::string(s) + "' (expected T, TR, TL, TRL)");
}

bool has_stage_b(Scheme s) { return s != Scheme::T; }

unsigned stage_a_terms(Scheme s) {
    return s == Scheme::TRL ? (kTargetTerm | kRobustTerm) : kTargetTerm;
}

unsigned stage_b_terms(Scheme s) {
    switch (s) {
        case Scheme::T: return 0u;
        case Scheme::TR: return kRobustTerm;
        case Scheme::TL:
        case Scheme::TRL: return kLeakageTerm;
    }
    return 0u;
}

double stage_a_cost(Scheme s, const CostTerms& c) {
    return s == Scheme::TRL ? c.j_u + c.j_r : c.j_u;
}

double stage_b_cost(Scheme s, const CostTerms& c) {
    switch (s) {
        case Scheme::T: return 0.0;
        case Scheme::TR: return c.j_r;
        case Scheme::TL:
        case Scheme::TRL: return c.j_l;
    }
    return 0.0;
}

void OptimizationConfig::validate() const {
    if (!(epsilon_a > 0.0)) throw std::invalid_argument("epsilon_a must be positive");
    if (n_segments < 1) throw std::invalid_argument("n_segments must be positive");
    if (!(bound > 0.0)) throw std::invalid_argument("bound must be positive");
    if (max_iters_stage_a < 1 || max_iters_stage_b < 1)
        throw std::invalid_argument("iteration caps must be positive");
    if (!(gradient_step > 0.0)) throw std::invalid_argument("gradient_step must be positive");
}

std::vector<double> random_guess(int n_segments, double bound, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> x(2 * n_segments);
    for (double& v : x) v = dist(rng);
    return x;
}

PulseCostEvaluator make_evaluator(const TransmonModel& model, const OptimizationConfig& config,
                                  double t_over_tomega) {
    config.validate();
    PulseCostEvaluator::Options o;
    o.substeps = config.substeps;
    o.fd_step = config.gradient_step;
    return PulseCostEvaluator(model, t_over_tomega, config.n_segments, config.perturbation, o);
}

namespace {

CostTerms terms_from_report(const CostReport& r) { return {r.j_u, r.j_r, r.j_l}; }

StageResult run_stage_a(const PulseCostEvaluator& ev, Scheme scheme,
                        const OptimizationConfig& config, std::span<const double> guess) {
    const unsigned terms = stage_a_terms(scheme);
    std::vector<CostTerms> grad;
    opt::Objective objective = [&](std::span<const double> x, std::span<double> g) {
        const CostTerms v = ev.evaluate_with_gradient(x, grad, terms);
        for (size_t i = 0; i < g.size(); ++i) g[i] = stage_a_cost(scheme, grad[i]);
        return stage_a_cost(scheme, v);
    };
    opt::BoxOptions bo;
    bo.max_iterations = config.max_iters_stage_a;
    bo.ftol = config.tolerance;
    bo.gtol = config.gradient_tolerance;
    const opt::BoxResult r = opt::minimize_box(
        objective, std::vector<double>(guess.begin(), guess.end()),
        opt::Bounds::uniform(ev.n_parameters(), config.bound), bo);
    return {r.x, r.f, r.iterations, r.status, r.history};
}

void finalize(OptimizationOutcome& out, const TransmonModel& model,
              const OptimizationConfig& config, double t_over_tomega,
              std::span<const double> x) {
    out.pulse = ControlPulse::from_parameters(x, t_over_tomega, config.bound);
    out.cost = evaluate_pulse(model, out.pulse, config.perturbation, config.substeps);
    const CostTerms t = terms_from_report(out.cost);
    out.feasible = stage_a_cost(config.scheme, t) <= config.epsilon_a * (1.0 + kFeasibilitySlack);
    if (!std::isfinite(t.j_u) || !std::isfinite(t.j_r) || !std::isfinite(t.j_l)) out.failed = true;
}

}  // namespace

StageResult stage_a(const TransmonModel& model, const OptimizationConfig& config,
                    double t_over_tomega, std::span<const double> initial_guess) {
    const PulseCostEvaluator ev = make_evaluator(model, config, t_over_tomega);
    if (static_cast<int>(initial_guess.size()) != ev.n_parameters())
        throw std::invalid_argument("initial guess has wrong length");
    return run_stage_a(ev, config.scheme, config, initial_guess);
}

OptimizationOutcome stage_b(const TransmonModel& model, const OptimizationConfig& config,
                            double t_over_tomega, std::span<const double> warm_start) {
    const Scheme scheme = config.scheme;
    const PulseCostEvaluator ev = make_evaluator(model, config, t_over_tomega);
    if (static_cast<int>(warm_start.size()) != ev.n_parameters())
        throw std::invalid_argument("warm start has wrong length");
    OptimizationOutcome out;
    out.scheme = scheme;
    out.t_over_tomega = t_over_tomega;
    out.seed = config.seed;

    std::vector<double> start(warm_start.begin(), warm_start.end());
    opt::Bounds::uniform(ev.n_parameters(), config.bound).clamp(start);
    const double eps = config.epsilon_a;
    if (stage_a_cost(scheme, ev.evaluate(start, stage_a_terms(scheme))) > eps * (1.0 + kFeasibilitySlack)) {
        const StageResult again = run_stage_a(ev, scheme, config, start);
        out.stage_a_iters += again.iterations;
        start = again.x;
        out.message = "warm start infeasible; stage A re-run";
    }

    // Aim just inside eps so that points accepted within the SQP feasibility
    // tolerance still satisfy J_A <= eps.
    const double target = eps * (1.0 - 2.0 * kFeasibilitySlack);
    const unsigned terms = stage_a_terms(scheme) | stage_b_terms(scheme);
    std::vector<CostTerms> grad;
    opt::ConstrainedObjective problem = [&](std::span<const double> x, std::span<double> gf,
                                            std::span<double> gc) {
        CostTerms v;
        if (gf.empty()) {
            v = ev.evaluate(x, terms);
        } else {
            v = ev.evaluate_with_gradient(x, grad, terms);
            for (size_t i = 0; i < gf.size(); ++i) {
                gf[i] = stage_b_cost(scheme, grad[i]);
                gc[i] = stage_a_cost(scheme, grad[i]);
            }
        }
        return opt::ConstrainedValue{stage_b_cost(scheme, v), stage_a_cost(scheme, v) - target};
    };
    opt::SqpOptions so;
    so.max_iterations = config.max_iters_stage_b;
    so.feasibility_tol = eps * kFeasibilitySlack;
    const opt::SqpResult r = opt::minimize_constrained(
        problem, start, opt::Bounds::uniform(ev.n_parameters(), config.bound), so);

    out.stage_b_iters = r.iterations;
    out.stage_b_status = r.status;
    out.stage_b_final = r.f;
    finalize(out, model, config, t_over_tomega, r.x);
    out.stage_a_final = stage_a_cost(scheme, terms_from_report(out.cost));
    out.converged = out.feasible && !out.failed &&
                    (opt::is_converged(r.status) || r.status == opt::Status::IterationLimit);
    if (!r.feasible) out.message += (out.message.empty() ? "" : "; ") + std::string("no feasible iterate");
    return out;
}

OptimizationOutcome optimize(const TransmonModel& model, const OptimizationConfig& config,
                             double t_over_tomega, std::span<const double> initial_guess) {
    OptimizationOutcome out;
    out.scheme = config.scheme;
    out.t_over_tomega = t_over_tomega;
    out.seed = config.seed;
    try {
        const StageResult a = stage_a(model, config, t_over_tomega, initial_guess);
        if (has_stage_b(config.scheme)) {
            out = stage_b(model, config, t_over_tomega, a.x);
            out.stage_a_iters += a.iterations;
            out.stage_a_status = a.status;
            return out;
        }
        out.stage_a_iters = a.iterations;
        out.stage_a_status = a.status;
        finalize(out, model, config, t_over_tomega, a.x);
        out.stage_a_final = out.cost.j_u;
        out.converged = !out.failed && opt::is_converged(a.status);
        if (a.status == opt::Status::NonFinite) out.failed = true;
    } catch (const std::exception& e) {
        out.failed = true;
        out.converged = false;
        out.message = e.what();
    }
    return out;
}

void parallel_for(int count, int workers, const std::function<void(int)>& job) {
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

bool better(const OptimizationOutcome& a, const OptimizationOutcome& b) {
    if (a.failed != b.failed) return !a.failed;
    if (a.feasible != b.feasible) return a.feasible;
    if (has_stage_b(a.scheme) && a.feasible) return a.stage_b_final < b.stage_b_final;
    return a.stage_a_final < b.stage_a_final;
}

OptimizationOutcome best_of_seeds(const TransmonModel& model, const OptimizationConfig& config,
                                  double t_over_tomega, int n_seeds, int workers) {
    if (n_seeds < 1) throw std::invalid_argument("best_of_seeds: need at least one seed");
    std::vector<OptimizationOutcome> runs(n_seeds);
    parallel_for(n_seeds, workers, [&](int k) {
        OptimizationConfig c = config;
        c.seed = config.seed + k;
        runs[k] = optimize(model, c, t_over_tomega, random_guess(c.n_segments, c.bound, c.seed));
    });
    return *std::min_element(runs.begin(), runs.end(), better);
}

std::vector<OptimizationOutcome> time_sweep(const TransmonModel& model,
                                            const OptimizationConfig& config,
                                            std::span<const double> times_over_tomega,
                                            int n_seeds, int workers) {
    if (times_over_tomega.empty()) throw std::invalid_argument("time_sweep: empty time grid");
    for (size_t i = 1; i < times_over_tomega.size(); ++i)
        if (!(times_over_tomega[i] < times_over_tomega[i - 1]))
            throw std::invalid_argument("time_sweep: times must be strictly descending");
    if (n_seeds < 1) throw std::invalid_argument("time_sweep: need at least one seed");

    std::vector<OptimizationOutcome> out;
    out.push_back(best_of_seeds(model, config, times_over_tomega[0], n_seeds, workers));

    for (size_t i = 1; i < times_over_tomega.size(); ++i) {
        const OptimizationOutcome& prev = out.back();
        OptimizationConfig c = config;
        c.seed = prev.seed;
        out.push_back(optimize(model, c, times_over_tomega[i], prev.pulse.parameters()));
    }
    return out;
}

std::vector<ScatterRow> multistart_scatter(const TransmonModel& model,
                                           std::span<const Scheme> schemes, int n_starts,
                                           double t_over_tomega, const OptimizationConfig& config,
                                           int workers) {
    if (n_starts < 1) throw std::invalid_argument("multistart: need at least one start");
    if (schemes.empty()) throw std::invalid_argument("multistart: no schemes");
    const size_t ns = schemes.size();
    std::vector<ScatterRow> rows(n_starts * ns);

    parallel_for(n_starts, workers, [&](int k) {
        const std::uint64_t seed = config.seed + k;
        const std::vector<double> guess = random_guess(config.n_segments, config.bound, seed);
        // stage A depends only on J_A, so T, TR and TL share one run
        std::map<unsigned, StageResult> stage_a_cache;
        for (size_t s = 0; s < ns; ++s) {
            OptimizationConfig c = config;
            c.scheme = schemes[s];
            c.seed = seed;
            ScatterRow& row = rows[k * ns + s];
            row.scheme = c.scheme;
            row.seed = seed;
            try {
                const unsigned key = stage_a_terms(c.scheme);
                auto it = stage_a_cache.find(key);
                if (it == stage_a_cache.end())
                    it = stage_a_cache.emplace(key, stage_a(model, c, t_over_tomega, guess)).first;
                OptimizationOutcome o;
                if (has_stage_b(c.scheme)) {
                    o = stage_b(model, c, t_over_tomega, it->second.x);
                } else {
                    o.scheme = c.scheme;
                    o.pulse = ControlPulse::from_parameters(it->second.x, t_over_tomega, c.bound);
                    o.cost = evaluate_pulse(model, o.pulse, c.perturbation, c.substeps, false);
                    o.converged = opt::is_converged(it->second.status);
                }
                row.j_u = o.cost.j_u;
                row.j_r = o.cost.j_r;
                row.j_l = o.cost.j_l;
                row.converged = o.converged;
                row.failed = o.failed;
                row.parameters = o.pulse.parameters();
            } catch (const std::exception&) {
                row.failed = true;
                row.converged = false;
                row.j_u = row.j_r = row.j_l = std::nan("");
            }
        }
    });
    return rows;
}

}  // namespace qpulse
