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

#include <span>
#include <vector>

#include "qpulse/linops.h"
#include "qpulse/transmon.h"

namespace qpulse {

struct CostTerms {
    double j_u = 0.0;
    double j_r = 0.0;
    double j_l = 0.0;
};

enum CostTerm : unsigned {
    kTargetTerm = 1u,
    kRobustTerm = 2u,
    kLeakageTerm = 4u,
    kAllTerms = 7u,
};

/// Evaluates J_U, J_R and J_L for the parameter vector x = (d_r, d_i) of an
/// M-segment pulse with target X, and their central-difference gradients.
///
/// The gradient perturbs one amplitude at a time. Only that segment is
/// re-diagonalised: everything before it is reused as a prefix, and everything
/// after it enters through suffix products and suffix-averaged operators
/// (sum over later nodes of w U^H V U taken relative to the segment end). The
/// result equals re-running the full Simpson-quadrature propagation to
/// rounding.
class PulseCostEvaluator {
  public:
    struct Options {
        int substeps = 8;
        double fd_step = 1e-6;
    };

    PulseCostEvaluator(const TransmonModel& model, double t_over_tomega, int n_segments,
                       PerturbationKind kind, Options options);
    PulseCostEvaluator(const TransmonModel& model, double t_over_tomega, int n_segments,
                       PerturbationKind kind)
        : PulseCostEvaluator(model, t_over_tomega, n_segments, kind, Options{}) {}

    int n_parameters() const { return 2 * n_segments_; }
    int n_segments() const { return n_segments_; }
    double total_time() const { return total_time_; }
    const TransmonModel& model() const { return model_; }

    CostTerms evaluate(std::span<const double> x, unsigned terms = kAllTerms) const;

    /// Value at x plus d(term)/dx_i for each parameter; `gradient` is resized
    /// to n_parameters().
    CostTerms evaluate_with_gradient(std::span<const double> x, std::vector<CostTerms>& gradient,
                                     unsigned terms = kAllTerms) const;

  private:
    struct Segment;
    struct Sweep;

    Segment build_segment(double d_r, double d_i, unsigned terms) const;
    Sweep sweep(std::span<const double> x, unsigned terms) const;
    CostTerms replace_segment(const Sweep& s, int j, const Segment& seg, unsigned terms) const;
    CostTerms finish(const ComplexMatrix& vbar_times_t, double kept_weight,
                     const ComplexMatrix& final_u, unsigned terms) const;

    TransmonModel model_;
    int n_segments_;
    double total_time_;
    double dt_;
    Options options_;
    ComplexMatrix v_;
    ComplexMatrix target_;
    std::vector<double> cell_weights_;  // Simpson weights within one segment
};

}  // namespace qpulse
