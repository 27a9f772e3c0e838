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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpulse/linops.h"

namespace qpulse {

/// One gate period T_Omega = 2 pi / Omega, in units of 1/Omega.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class PerturbationKind { Number, Quadrature, NumberSquared };

std::string_view to_string(PerturbationKind kind);
PerturbationKind perturbation_from_string(std::string_view s);

struct TransmonParams {
    int n_levels = 6;
    double delta_over_omega = -0.5;
    double alpha_over_omega = -2.0;
    double omega = 1.0;
};

/// Driven anharmonic oscillator in the rotating frame of the drive:
///
///   H = (delta - alpha/2) n + (alpha/2) n^2 + (Omega/sqrt2) [d_r q - d_i p]
///
/// truncated to n_levels, with the qubit in levels {0, 1}.
/// Energies are in absolute units of Omega; `duration()` converts gate times
/// quoted in T_Omega to the same time units.
class TransmonModel {
  public:
    explicit TransmonModel(TransmonParams params = {});

    const TransmonParams& params() const { return params_; }
    int dim() const { return params_.n_levels; }
    int subspace_dim() const { return 2; }
    double omega() const { return params_.omega; }
    double delta() const { return params_.delta_over_omega * params_.omega; }
    double alpha() const { return params_.alpha_over_omega * params_.omega; }
    /// Gate time in T_Omega units -> absolute time.
    double duration(double t_over_tomega) const { return t_over_tomega * kTwoPi / params_.omega; }

    const ComplexMatrix& number() const { return number_; }
    const ComplexMatrix& quadrature() const { return quadrature_; }
    const ComplexMatrix& momentum() const { return momentum_; }
    const ComplexMatrix& projector() const { return projector_; }

    /// Drift for the given detuning (absolute units); defaults to the model's.
    ComplexMatrix drift(std::optional<double> delta_override = std::nullopt) const;
    /// The two drive generators scaled by Omega/sqrt2: (q, -p).
    const ComplexMatrix& drive_in_phase() const { return drive_r_; }
    const ComplexMatrix& drive_quadrature() const { return drive_i_; }

    ComplexMatrix hamiltonian_at(double d_r, double d_i,
                                 std::optional<double> delta_override = std::nullopt) const;

    ComplexMatrix perturbation(PerturbationKind kind) const;

    /// Tr_P(V^2): the factor lambda is divided by to compare perturbations.
    double rescale_factor(PerturbationKind kind) const;

    /// U_tar (d_P x d_P) embedded as U_tar (+) identity on the complement.
    ComplexMatrix embed(const ComplexMatrix& subspace_unitary) const;

  private:
    TransmonParams params_;
    ComplexMatrix number_, quadrature_, momentum_, projector_;
    ComplexMatrix drive_r_, drive_i_, fixed_drift_;
};

/// X = |0><1| + |1><0| on the qubit.
ComplexMatrix pauli_x_gate();

/// Piecewise-constant two-quadrature pulse: M segments of equal length over
/// total_time (in T_Omega). Amplitudes are dimensionless and bounded by `bound`.
struct ControlPulse {
    double total_time = 1.0;
    std::vector<double> d_r;
    std::vector<double> d_i;
    double bound = 1.0;

    int n_segments() const { return static_cast<int>(d_r.size()); }
    void validate() const;

    static ControlPulse zeros(int n_segments, double total_time, double bound = 1.0);
    /// Parameter vector layout: (d_r[0..M), d_i[0..M)).
    static ControlPulse from_parameters(std::span<const double> x, double total_time,
                                       double bound = 1.0);
    std::vector<double> parameters() const;
};

}  // namespace qpulse
