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
#include <ostream>
#include <string>
#include <vector>

#include "qpulse/linops.h"
#include "qpulse/transmon.h"

namespace qpulse {

/// Central second difference per step, Richardson-combined over the two
/// smallest steps.
struct SecondDerivative {
    double value = 0.0;
    std::vector<double> per_step;  // in the order of `steps`
    bool noisy = false;            // step convergence was not monotone
};

/// `steps` must be positive and strictly descending.
SecondDerivative fd_second_derivative(const std::function<double(double)>& f,
                                      const std::vector<double>& steps);

/// Steps proportional to 1 / (T * spectral radius of V).
std::vector<double> default_fd_steps(double total_time, const ComplexMatrix& v);

/// d^2 F_lambda / d lambda^2 at 0 by finite differences of F_lambda alone.
/// `projector` (rank `d_p`) defaults to the model's qubit projector.
SecondDerivative fd_susceptibility(const TransmonModel& model, const ControlPulse& pulse,
                                   const ComplexMatrix& v, const std::vector<double>& steps,
                                   const ComplexMatrix* projector = nullptr, int d_p = 0);
SecondDerivative fd_susceptibility(const TransmonModel& model, const ControlPulse& pulse,
                                   PerturbationKind kind, const std::vector<double>& steps);

/// Constant resonant pi pulse on three levels with Omega = pi / T.
struct ThreeLevelPopulation {
    double full = 0.0;        // exact three-level propagation
    double effective = 0.0;   // closed form of the adiabatically eliminated model
    double asymptotic = 0.0;  // 1 - pi^2 / (4 alpha^2 T^2)
};

ThreeLevelPopulation three_level_pi_pulse(double alpha_over_omega, double total_time = 1.0);

struct MonteCarloAverage {
    double fidelity = 0.0;
    double fidelity_stderr = 0.0;
    double leakage = 0.0;
    double leakage_stderr = 0.0;
    int n_samples = 0;
};

/// Haar-random states in the range of P: mean of |<U psi| P |U_ref psi>|^2 and
/// of 1 - |P U psi|^2.
MonteCarloAverage mc_state_average(const ComplexMatrix& u, const ComplexMatrix& u_ref,
                                   const ComplexMatrix& p, int n_samples, std::uint64_t seed);

/// Haar-random unitary (QR of a complex Gaussian matrix, phases fixed).
ComplexMatrix random_unitary(int n, std::uint64_t seed);

struct OracleReport {
    std::string name;
    double primary_value = 0.0;
    double oracle_value = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tol_abs = 0.0;
    double tol_rel = 0.0;
    bool passed = false;
    std::string note;
};

/// Fills the error fields; passes when either tolerance is met.
OracleReport compare(std::string name, double primary, double oracle, double tol_abs,
                     double tol_rel);

void write_jsonl(std::ostream& out, const OracleReport& report);

}  // namespace qpulse
