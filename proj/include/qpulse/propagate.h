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
#include <vector>

#include "qpulse/linops.h"
#include "qpulse/transmon.h"

namespace qpulse {

inline constexpr int kDefaultSubsteps = 8;
inline constexpr int kDefaultSampledSteps = 16000;

/// Snapshots of U(t, 0) on a uniform grid: `n_segments` constant pieces, each
/// resolved at `substeps` equal sub-intervals. Node j*substeps + k sits at
/// t = (j + k/substeps) * dt. Times are absolute (units of 1/Omega).
struct PropagationRecord {
    std::vector<double> times;
    std::vector<ComplexMatrix> unitaries;
    int n_segments = 0;
    int substeps = 1;

    double total_time() const { return times.back(); }
    double segment_duration() const { return total_time() / n_segments; }
    const ComplexMatrix& final_unitary() const { return unitaries.back(); }
    /// Unitaries at segment boundaries only (n_segments + 1 entries).
    std::vector<ComplexMatrix> boundaries() const;
};

/// Worst deviations found across a record; used by tests and validation.
struct RecordDefects {
    double unitarity = 0.0;
    double determinant = 0.0;  // max | |det U| - 1 |
    double composition = 0.0;  // max |U(t_{k+1}) - S_k U(t_k)| over segment boundaries
    bool time_grid_ok = true;
};

using SegmentHamiltonian = std::function<ComplexMatrix(int segment)>;

/// Exact propagation of a piecewise-constant generator; one eigendecomposition
/// per segment.
PropagationRecord propagate_segments(const SegmentHamiltonian& hamiltonian, int n_segments,
                                     double total_time, int substeps);

/// U(T) only, without storing snapshots.
ComplexMatrix propagate_final(const SegmentHamiltonian& hamiltonian, int n_segments,
                              double total_time);

PropagationRecord propagate(const TransmonModel& model, const ControlPulse& pulse,
                            int substeps = kDefaultSubsteps);

/// Same scheme with lambda * V added to every segment Hamiltonian.
PropagationRecord propagate_perturbed(const TransmonModel& model, const ControlPulse& pulse,
                                      PerturbationKind kind, double lambda,
                                      int substeps = kDefaultSubsteps);
PropagationRecord propagate_perturbed(const TransmonModel& model, const ControlPulse& pulse,
                                      const ComplexMatrix& v, double lambda,
                                      int substeps = kDefaultSubsteps);

using TimeFunction = std::function<double(double)>;

/// Continuous controls sampled at step midpoints (absolute time). `delta`
/// replaces the model's constant detuning; pass an empty function to keep it.
PropagationRecord propagate_sampled(const TransmonModel& model, const TimeFunction& d_r,
                                    const TimeFunction& d_i, const TimeFunction& delta,
                                    double total_time, int n_steps, int substeps = 2);

RecordDefects inspect(const PropagationRecord& record,
                      const SegmentHamiltonian* hamiltonian = nullptr);

}  // namespace qpulse
