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

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qpulse/lbfgsb.h"

namespace qpulse::opt {

// Dense QP subproblems for the SQP step.

struct QpSolution {
    Eigen::VectorXd d;
    double multiplier = 0.0;  // of the linear constraint
    bool feasible = true;
};

/// min 0.5 d^T B d + g^T d  s.t.  lower <= d <= upper, for positive definite B.
/// Primal active-set method.
Eigen::VectorXd solve_box_qp(const Eigen::MatrixXd& b, const Eigen::VectorXd& g,
                             const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

/// Adds the single linear inequality c + a^T d <= 0. The multiplier is found
/// by bisection on the monotone map mu -> c + a^T d(mu). Reports
/// feasible = false when no d in the box satisfies the inequality.
QpSolution solve_qp_one_constraint(const Eigen::MatrixXd& b, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                   const Eigen::VectorXd& a, double c);

/// f and c with optional gradients; empty spans mean "value only".
struct ConstrainedValue {
    double f;
    double c;
};
using ConstrainedObjective = std::function<ConstrainedValue(
    std::span<const double> x, std::span<double> grad_f, std::span<double> grad_c)>;

struct SqpOptions {
    int max_iterations = 400;
    double step_tol = 1e-10;
    double ftol = 1e-9;          // relative change of f over `stall_iterations` steps
    int stall_iterations = 3;
    double feasibility_tol = 1e-10;  // c <= feasibility_tol counts as feasible
    int max_backtracks = 30;
    int fallback_iterations = 200;  // augmented-Lagrangian inner iterations
    double max_multiplier_ratio = 1e8;  // relative to |grad f| / |grad c|
};

struct SqpResult {
    std::vector<double> x;
    double f = 0.0;
    double c = 0.0;
    bool feasible = false;
    int iterations = 0;
    int evaluations = 0;
    int fallbacks = 0;
    Status status = Status::IterationLimit;
};

/// min f(x) s.t. c(x) <= 0 and the box. Each iteration solves a QP built from
/// a damped-BFGS Lagrangian Hessian and the linearised constraint, then
/// backtracks on the L1 merit f + rho max(0, c). When the linearisation has no
/// feasible step inside the box, one augmented-Lagrangian round on the box
/// takes its place; two such rounds in a row that leave c nearly unchanged end
/// the run as Infeasible. Returns the best feasible iterate seen, or the least
/// infeasible one.
SqpResult minimize_constrained(const ConstrainedObjective& problem, std::vector<double> x0,
                               const Bounds& bounds, const SqpOptions& options = {});

}  // namespace qpulse::opt
