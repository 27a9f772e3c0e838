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

#include <numbers>

#include "qpulse/costfn.h"
#include "qpulse/propagate.h"
#include "qpulse/transmon.h"

namespace qpulse {

/// First-order DRAG: a Gaussian in-phase envelope clipped to start and end at
/// zero, a derivative quadrature, and a quadratic detuning. Times in T_Omega.
struct DragParams {
    double total_time = 1.3;
    double sigma = 0.369;
    double area = std::numbers::pi;
    double alpha_over_omega = -2.0;

    void validate() const;
};

/// Field functions of absolute time (units of 1/Omega). Amplitudes are the
/// dimensionless d_r, d_i of TransmonModel; delta is an absolute detuning
/// that replaces the model's constant one.
struct DragFields {
    TimeFunction d_r;
    TimeFunction d_i;
    TimeFunction delta;
    double total_time = 0.0;  // absolute
};

/// With H = ... + (Omega/sqrt2)(d_r q - d_i p), the leakage-cancelling
/// quadrature is d_i = +d_r' / (sqrt2 alpha); delta = Omega^2 d_r^2 (1 - sqrt2) / (2 alpha).
DragFields drag_fields(const DragParams& params, double omega = 1.0);

/// Adaptive Gauss-Kronrod integral of Omega d_r over [0, T]; should equal `area`.
double drag_area(const DragFields& fields, double omega = 1.0);

struct DragSimulation {
    PropagationRecord record;
    CostReport report;
    int n_steps = 0;
    int n_levels = 0;
    double step_halving_defect = 0.0;  // max |U_2n(T) - U_n(T)|
};

inline constexpr double kStepHalvingTolerance = 1e-8;

/// Simulates the DRAG pulse on `model` (alpha taken from the model). Throws
/// std::runtime_error naming a larger step count when halving the step moves
/// U(T) by more than kStepHalvingTolerance.
DragSimulation simulate_drag(const TransmonModel& model, const DragParams& params,
                             PerturbationKind kind = PerturbationKind::Number,
                             int n_steps = kDefaultSampledSteps);

/// U(T) of the DRAG pulse under an additional static lambda * V.
ComplexMatrix drag_final_unitary(const TransmonModel& model, const DragParams& params,
                                 const ComplexMatrix* v, double lambda,
                                 int n_steps = kDefaultSampledSteps);

}  // namespace qpulse
