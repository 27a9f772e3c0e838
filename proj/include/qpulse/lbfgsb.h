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
#include <string>
#include <vector>

namespace qpulse::opt {

/// Returns f(x) and writes the gradient into `grad` (same length as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    static Bounds uniform(int n, double bound) {
        return {std::vector<double>(n, -bound), std::vector<double>(n, bound)};
    }
    void clamp(std::span<double> x) const;
};

enum class Status {
    GradientTolerance,
    CostTolerance,
    StepTolerance,
    IterationLimit,
    LineSearchFailed,
    NonFinite,
    Infeasible,
};

std::string to_string(Status s);
/// True for the statuses that mean the method stopped by its own criteria.
bool is_converged(Status s);

struct BoxOptions {
    int max_iterations = 2000;
    double ftol = 1e-10;  // (f_k - f_{k+1}) / max(|f_k|, |f_{k+1}|, 1)
    double gtol = 1e-8;   // inf-norm of the projected gradient
    int memory = 10;
    int max_backtracks = 40;
};

struct BoxResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    Status status = Status::IterationLimit;
    std::vector<double> history;  // accepted costs, starting with f(x0)
};

/// Limited-memory BFGS restricted to a box: the quasi-Newton direction is
/// built on the variables that are not held at a bound, and the step is a
/// projected backtracking (Armijo) search along the projection arc.
BoxResult minimize_box(const Objective& objective, std::vector<double> x0, const Bounds& bounds,
                       const BoxOptions& options = {});

}  // namespace qpulse::opt
