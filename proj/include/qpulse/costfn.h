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

#include <stdexcept>
#include <utility>
#include <vector>

#include "qpulse/linops.h"
#include "qpulse/propagate.h"
#include "qpulse/transmon.h"

namespace qpulse {

class ConfigurationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Final-time leakage above which the reference unitary of F_lambda is flagged.
inline constexpr double kLeakyReferenceThreshold = 1e-4;

struct TracePoint {
    double t;
    double value;
};
using Trace = std::vector<TracePoint>;

struct CostReport {
    double j_u = 0.0;
    double j_r = 0.0;
    double j_l = 0.0;
    Trace f0_trace;
    Trace l0_trace;
};

/// Time-averaged perturbation (1/T) int_0^T U^H(t) V U(t) dt.
struct AveragedPerturbation {
    ComplexMatrix matrix;
};

struct PerturbedFidelity {
    double value = 1.0;
    double reference_leakage = 0.0;
    bool leaky_reference = false;
};

/// Gate fidelity inside the subspace of P:
///   G = {Tr[X P X^H P Y P Y^H P] + |Tr[P X P Y^H]|^2} / (d_P (d_P + 1)).
double subspace_fidelity(const ComplexMatrix& x, const ComplexMatrix& y, const ComplexMatrix& p,
                         int d_p);

/// J_U = 1 - G[U_tar (+) 1, U(T)]. `target` may be d_P x d_P (it is then
/// embedded) or already full-size.
double target_cost(const PropagationRecord& record, const ComplexMatrix& target,
                   const ComplexMatrix& p, int d_p);

/// F_lambda = {Tr[P U_l P U_l^H] + |Tr[P U_l P U_0^H]|^2} / (d_P (d_P + 1)),
/// with the whole bracket normalised so that F_0 = 1 for a non-leaky U_0.
PerturbedFidelity perturbed_fidelity(const ComplexMatrix& u_lambda, const ComplexMatrix& u0_final,
                                     const ComplexMatrix& p, int d_p);
PerturbedFidelity perturbed_fidelity(const PropagationRecord& record_lambda,
                                     const ComplexMatrix& u0_final, const ComplexMatrix& p,
                                     int d_p);

/// Composite-Simpson weights for every node of a record; they sum to T.
/// Throws ConfigurationError unless substeps is even.
std::vector<double> simpson_weights(const PropagationRecord& record);

AveragedPerturbation averaged_perturbation(const PropagationRecord& record,
                                           const ComplexMatrix& v);

/// d^2 F_lambda / d lambda^2 at lambda = 0:
///   -(2 T^2 / d_P) { Tr_P[Vb^2] - (Tr_P[Vb]^2 + Tr_P[Vb P Vb]) / (d_P + 1) }.
double susceptibility(const AveragedPerturbation& vbar, const ComplexMatrix& p, int d_p,
                      double total_time);

/// J_R = -susc / (2 Omega^2 T^2).
double robustness_cost(double susc, double omega, double total_time);

/// L[U] = 1 - Tr(P U P U^H) / d_P.
double leakage(const ComplexMatrix& u, const ComplexMatrix& p, int d_p);

/// J_L = (1/T) int_0^T L[U(t)] dt.
double leakage_cost(const PropagationRecord& record, const ComplexMatrix& p, int d_p);

/// f0(t) = G[U_tar (+) 1, U(t)] and l0(t) = L[U(t)] at every node.
std::pair<Trace, Trace> dynamical_traces(const PropagationRecord& record,
                                         const ComplexMatrix& target, const ComplexMatrix& p,
                                         int d_p);

/// Full report for a pulse on a model with target X; J_R uses `kind`.
CostReport evaluate_pulse(const TransmonModel& model, const ControlPulse& pulse,
                          PerturbationKind kind, int substeps = kDefaultSubsteps,
                          bool with_traces = true);

/// 1 - F_lambda for a pulse under lambda * V (lambda absolute).
double perturbed_infidelity(const TransmonModel& model, const ControlPulse& pulse,
                            const ComplexMatrix& v, double lambda);

/// 1 - G[X (+) 1, U_lambda(T)]: final-time target infidelity under lambda * V.
double target_infidelity(const TransmonModel& model, const ControlPulse& pulse,
                         const ComplexMatrix& v, double lambda);

}  // namespace qpulse
