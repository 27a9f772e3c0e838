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

#include "qpulse/sqp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpulse::opt {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Bound : char { Free, Lower, Upper };

}  // namespace

VectorXd solve_box_qp(const MatrixXd& b, const VectorXd& g, const VectorXd& lower,
                      const VectorXd& upper) {
    const int n = static_cast<int>(g.size());
    VectorXd d = VectorXd::Zero(n).cwiseMax(lower).cwiseMin(upper);
    std::vector<Bound> state(n, Bound::Free);
    for (int i = 0; i < n; ++i) {
        if (d(i) <= lower(i) && lower(i) > 0.0) state[i] = Bound::Lower;
        if (d(i) >= upper(i) && upper(i) < 0.0) state[i] = Bound::Upper;
    }

    for (int iter = 0; iter < 20 * n + 20; ++iter) {
        std::vector<int> free;
        for (int i = 0; i < n; ++i)
            if (state[i] == Bound::Free) free.push_back(i);
        const int nf = static_cast<int>(free.size());

        VectorXd step = VectorXd::Zero(n);
        if (nf > 0) {
            MatrixXd bff(nf, nf);
            VectorXd rhs(nf);
            const VectorXd grad = b * d + g;
            for (int r = 0; r < nf; ++r) {
                rhs(r) = -grad(free[r]);
                for (int c = 0; c < nf; ++c) bff(r, c) = b(free[r], free[c]);
            }
            const VectorXd sol = bff.ldlt().solve(rhs);
            for (int r = 0; r < nf; ++r) step(free[r]) = sol(r);
        }

        const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
        if (step.cwiseAbs().maxCoeff() <= 1e-15 * scale) {
            const VectorXd grad = b * d + g;
            int release = -1;
            double worst = 0.0;
            for (int i = 0; i < n; ++i) {
                double violation = 0.0;
                if (state[i] == Bound::Lower) violation = -grad(i);
                if (state[i] == Bound::Upper) violation = grad(i);
                if (violation > worst) {
                    worst = violation;
                    release = i;
                }
            }
            if (release < 0) return d;
            state[release] = Bound::Free;
            continue;
        }

        double tau = 1.0;
        int blocking = -1;
        Bound side = Bound::Free;
        for (int i : free) {
            if (step(i) < 0.0) {
                const double t = (lower(i) - d(i)) / step(i);
                if (t < tau) { tau = t; blocking = i; side = Bound::Lower; }
            } else if (step(i) > 0.0) {
                const double t = (upper(i) - d(i)) / step(i);
                if (t < tau) { tau = t; blocking = i; side = Bound::Upper; }
            }
        }
        d += std::max(tau, 0.0) * step;
        if (blocking >= 0) {
            d(blocking) = side == Bound::Lower ? lower(blocking) : upper(blocking);
            state[blocking] = side;
        }
    }
    return d;
}

QpSolution solve_qp_one_constraint(const MatrixXd& b, const VectorXd& g, const VectorXd& lower,
                                   const VectorXd& upper, const VectorXd& a, double c) {
    QpSolution out;
    out.d = solve_box_qp(b, g, lower, upper);
    auto residual = [&](const VectorXd& d) { return c + a.dot(d); };
    if (residual(out.d) <= 0.0) return out;

    double best_possible = c;
    for (int i = 0; i < a.size(); ++i) best_possible += a(i) * (a(i) > 0.0 ? lower(i) : upper(i));
    if (best_possible > 0.0) {
        out.feasible = false;
        return out;
    }

    double mu_lo = 0.0, mu_hi = 1.0;
    VectorXd d_hi = solve_box_qp(b, g + mu_hi * a, lower, upper);
    while (residual(d_hi) > 0.0) {
        mu_lo = mu_hi;
        mu_hi *= 4.0;
        if (mu_hi > 1e300) {
            out.feasible = false;
            return out;
        }
        d_hi = solve_box_qp(b, g + mu_hi * a, lower, upper);
    }
    for (int it = 0; it < 200 && mu_hi - mu_lo > 1e-15 * mu_hi; ++it) {
        const double mid = 0.5 * (mu_lo + mu_hi);
        VectorXd d_mid = solve_box_qp(b, g + mid * a, lower, upper);
        if (residual(d_mid) > 0.0) {
            mu_lo = mid;
        } else {
            mu_hi = mid;
            d_hi = std::move(d_mid);
        }
    }
    out.d = std::move(d_hi);
    out.multiplier = mu_hi;
    return out;
}

SqpResult minimize_constrained(const ConstrainedObjective& problem, std::vector<double> x0,
                               const Bounds& bounds, const SqpOptions& options) {
    const int n = static_cast<int>(x0.size());
    if (static_cast<int>(bounds.lower.size()) != n || static_cast<int>(bounds.upper.size()) != n)
        throw std::invalid_argument("minimize_constrained: bounds do not match x0");

    SqpResult r;
    bounds.clamp(x0);
    VectorXd x = Eigen::Map<VectorXd>(x0.data(), n);
    VectorXd gf(n), gc(n), gf_t(n), gc_t(n);
    auto eval_full = [&](const VectorXd& at, VectorXd& grad_f, VectorXd& grad_c) {
        ++r.evaluations;
        return problem({at.data(), static_cast<size_t>(n)}, {grad_f.data(), static_cast<size_t>(n)},
                       {grad_c.data(), static_cast<size_t>(n)});
    };
    auto eval_value = [&](const VectorXd& at) {
        ++r.evaluations;
        return problem({at.data(), static_cast<size_t>(n)}, {}, {});
    };

    ConstrainedValue cur = eval_full(x, gf, gc);
    if (!std::isfinite(cur.f) || !std::isfinite(cur.c)) {
        r.x = x0;
        r.f = cur.f;
        r.c = cur.c;
        r.status = Status::NonFinite;
        return r;
    }

    const VectorXd lo = Eigen::Map<const VectorXd>(bounds.lower.data(), n);
    const VectorXd hi = Eigen::Map<const VectorXd>(bounds.upper.data(), n);
    MatrixXd hess = MatrixXd::Identity(n, n);
    bool scaled = false;
    double rho = 0.0;
    double mu = 0.0;

    VectorXd best_x = x;
    ConstrainedValue best = cur;
    bool have_feasible = cur.c <= options.feasibility_tol;
    auto consider = [&](const VectorXd& at, const ConstrainedValue& v) {
        const bool feasible = v.c <= options.feasibility_tol;
        if (feasible && (!have_feasible || v.f < best.f)) {
            best_x = at;
            best = v;
            have_feasible = true;
        } else if (!have_feasible && v.c < best.c) {
            best_x = at;
            best = v;
        }
    };

    int stall = 0;
    int stuck = 0;  // consecutive restoration rounds that barely reduced c
    int line_search_failures = 0;
    r.status = Status::IterationLimit;
    for (r.iterations = 0; r.iterations < options.max_iterations; ++r.iterations) {
        QpSolution qp = solve_qp_one_constraint(hess, gf, lo - x, hi - x, gc, cur.c);
        // A multiplier far beyond |grad f| / |grad c| means the linearised
        // constraint is only just satisfiable: treat it like an infeasible one.
        const double mu_scale = std::max(gf.norm(), 1e-300) / std::max(gc.norm(), 1e-300);
        if (!qp.d.allFinite() || !std::isfinite(qp.multiplier) ||
            qp.multiplier > options.max_multiplier_ratio * mu_scale)
            qp.feasible = false;
        if (!qp.feasible) {
            const double c_before = cur.c;
            // augmented-Lagrangian round on the box, then resume SQP
            ++r.fallbacks;
            const double pen = 1e2 * std::max(std::abs(cur.f), 1e-12) /
                               std::max(cur.c * cur.c, 1e-30);
            const double lam = mu;
            Objective al = [&](std::span<const double> xs, std::span<double> grad) {
                VectorXd gf_l(n), gc_l(n);
                const ConstrainedValue v = problem(xs, {gf_l.data(), static_cast<size_t>(n)},
                                                   {gc_l.data(), static_cast<size_t>(n)});
                ++r.evaluations;
                const double shifted = std::max(0.0, v.c + lam / pen);
                for (int i = 0; i < n; ++i) grad[i] = gf_l(i) + pen * shifted * gc_l(i);
                return v.f + 0.5 * pen * shifted * shifted;
            };
            BoxOptions bo;
            bo.max_iterations = options.fallback_iterations;
            std::vector<double> start(x.data(), x.data() + n);
            const BoxResult inner = minimize_box(al, std::move(start), bounds, bo);
            x = Eigen::Map<const VectorXd>(inner.x.data(), n);
            cur = eval_full(x, gf, gc);
            mu = std::max(0.0, lam + pen * cur.c);
            hess = MatrixXd::Identity(n, n);
            scaled = false;
            consider(x, cur);
            if (!std::isfinite(cur.f) || !std::isfinite(cur.c)) {
                r.status = Status::NonFinite;
                break;
            }
            stuck = (cur.c > options.feasibility_tol && cur.c > 0.9 * c_before) ? stuck + 1 : 0;
            if (stuck >= 2) {
                r.status = Status::Infeasible;
                break;
            }
            continue;
        }
        stuck = 0;
        mu = qp.multiplier;
        const VectorXd& d = qp.d;
        if (d.cwiseAbs().maxCoeff() <= options.step_tol) {
            r.status = Status::StepTolerance;
            break;
        }

        rho = std::max(rho, 1.5 * mu + 1e-12);
        const double viol = std::max(0.0, cur.c);
        const double merit = cur.f + rho * viol;
        const double slope = gf.dot(d) - rho * viol;

        double step = 1.0;
        bool accepted = false;
        VectorXd xt(n);
        ConstrainedValue trial{};
        for (int bt = 0; bt < options.max_backtracks; ++bt, step *= 0.5) {
            xt = (x + step * d).cwiseMax(lo).cwiseMin(hi);
            trial = eval_value(xt);
            if (!std::isfinite(trial.f) || !std::isfinite(trial.c)) continue;
            const double mt = trial.f + rho * std::max(0.0, trial.c);
            if (mt <= merit + 1e-4 * step * std::min(slope, 0.0)) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (++line_search_failures > 3) {
                r.status = Status::LineSearchFailed;
                break;
            }
            hess = MatrixXd::Identity(n, n);
            scaled = false;
            continue;
        }
        line_search_failures = 0;

        trial = eval_full(xt, gf_t, gc_t);
        const VectorXd s = xt - x;
        VectorXd y = (gf_t + mu * gc_t) - (gf + mu * gc);
        if (!scaled && y.squaredNorm() > 0.0 && s.dot(y) > 0.0) {
            hess = MatrixXd::Identity(n, n) * (y.squaredNorm() / s.dot(y));
            scaled = true;
        }
        const VectorXd bs = hess * s;
        const double sbs = s.dot(bs);
        double sy = s.dot(y);
        if (sbs > 0.0 && y.allFinite()) {
            if (sy < 0.2 * sbs) {  // Powell damping keeps the update positive definite
                const double theta = 0.8 * sbs / (sbs - sy);
                y = theta * y + (1.0 - theta) * bs;
                sy = s.dot(y);
            }
            hess += (y * y.transpose()) / sy - (bs * bs.transpose()) / sbs;
            if (!hess.allFinite()) {
                hess = MatrixXd::Identity(n, n);
                scaled = false;
            }
        }

        const double previous_f = cur.f;
        x = xt;
        cur = trial;
        gf = gf_t;
        gc = gc_t;
        consider(x, cur);

        const bool feasible = cur.c <= options.feasibility_tol;
        const double rel = std::abs(previous_f - cur.f) /
                           std::max({std::abs(cur.f), std::abs(previous_f),
                                     std::numeric_limits<double>::min()});
        stall = (feasible && rel <= options.ftol) ? stall + 1 : 0;
        if (stall >= options.stall_iterations) {
            r.status = Status::CostTolerance;
            ++r.iterations;
            break;
        }
        if (feasible && s.cwiseAbs().maxCoeff() <= options.step_tol) {
            r.status = Status::StepTolerance;
            ++r.iterations;
            break;
        }
    }

    r.x.assign(best_x.data(), best_x.data() + n);
    r.f = best.f;
    r.c = best.c;
    r.feasible = have_feasible;
    if (!have_feasible && is_converged(r.status)) r.status = Status::Infeasible;
    return r;
}

}  // namespace qpulse::opt
