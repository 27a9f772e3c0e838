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

#include "qpulse/evaluator.h"

#include <cmath>
#include <stdexcept>

#include "qpulse/costfn.h"

namespace qpulse {

struct PulseCostEvaluator::Segment {
    ComplexMatrix step;      // exp(-i H dt)
    ComplexMatrix avg_v;     // sum_k w_k E(s_k)^H V E(s_k)
    ComplexMatrix avg_p;     // sum_k w_k E(s_k)^H P E(s_k)
};

struct PulseCostEvaluator::Sweep {
    std::vector<Segment> segments;
    std::vector<ComplexMatrix> start;        // U(t_j), j = 0..M
    std::vector<ComplexMatrix> suffix;       // S_{M-1} ... S_{j+1}
    std::vector<ComplexMatrix> prefix_v;     // sum over cells < j, absolute frame
    std::vector<double> prefix_kept;         // sum over cells < j of w Tr(P U P U^H)
    std::vector<ComplexMatrix> tail_v;       // cells > j, relative to t_{j+1}
    std::vector<ComplexMatrix> tail_p;
};

PulseCostEvaluator::PulseCostEvaluator(const TransmonModel& model, double t_over_tomega,
                                       int n_segments, PerturbationKind kind, Options options)
    : model_(model),
      n_segments_(n_segments),
      total_time_(model.duration(t_over_tomega)),
      dt_(total_time_ / n_segments),
      options_(options),
      v_(model.perturbation(kind)),
      target_(model.embed(pauli_x_gate())) {
    if (n_segments < 1) throw std::invalid_argument("evaluator: need at least one segment");
    if (!(t_over_tomega > 0.0)) throw std::invalid_argument("evaluator: gate time must be positive");
    const int k = options_.substeps;
    if (k < 2 || k % 2 != 0)
        throw ConfigurationError("evaluator: substeps must be even and >= 2");
    if (!(options_.fd_step > 0.0)) throw std::invalid_argument("evaluator: fd_step must be positive");
    const double h = dt_ / k;
    cell_weights_.resize(k + 1);
    for (int i = 0; i <= k; ++i)
        cell_weights_[i] = h / 3.0 * ((i == 0 || i == k) ? 1.0 : (i % 2 ? 4.0 : 2.0));
}

PulseCostEvaluator::Segment PulseCostEvaluator::build_segment(double d_r, double d_i,
                                                              unsigned terms) const {
    const Spectrum spec = diagonalize(model_.hamiltonian_at(d_r, d_i));
    Segment seg;
    seg.step = spec.propagator(dt_);
    if (!(terms & (kRobustTerm | kLeakageTerm))) return seg;

    // sum_k w_k e^{i(E_a - E_b) s_k}, Hermitian in (a, b)
    const int n = model_.dim();
    const int k = options_.substeps;
    const double h = dt_ / k;
    ComplexMatrix phase(n, n);
    for (int a = 0; a < n; ++a) {
        phase(a, a) = dt_;
        for (int b = a + 1; b < n; ++b) {
            const Complex z = std::polar(1.0, (spec.energies(a) - spec.energies(b)) * h);
            Complex zk = 1.0, acc = 0.0;
            for (int i = 0; i <= k; ++i) {
                acc += cell_weights_[i] * zk;
                zk *= z;
            }
            phase(a, b) = acc;
            phase(b, a) = std::conj(acc);
        }
    }
    const ComplexMatrix& q = spec.vectors;
    auto average = [&](const ComplexMatrix& op) {
        const ComplexMatrix rotated = conjugate_by(q, op);  // Q^H op Q
        const ComplexMatrix weighted = rotated.cwiseProduct(phase);
        return multiply_adjoint(multiply(q, weighted), q);
    };
    if (terms & kRobustTerm) seg.avg_v = average(v_);
    if (terms & kLeakageTerm) seg.avg_p = average(model_.projector());
    return seg;
}

PulseCostEvaluator::Sweep PulseCostEvaluator::sweep(std::span<const double> x,
                                                    unsigned terms) const {
    if (static_cast<int>(x.size()) != 2 * n_segments_)
        throw std::invalid_argument("evaluator: parameter vector has wrong length");
    const int m = n_segments_;
    const int n = model_.dim();
    const ComplexMatrix& p = model_.projector();
    const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
    Sweep s;
    s.segments.reserve(m);
    s.start.reserve(m + 1);
    s.start.push_back(ComplexMatrix::Identity(n, n));
    s.prefix_v.assign(m + 1, zero);
    s.prefix_kept.assign(m + 1, 0.0);
    for (int j = 0; j < m; ++j) {
        s.segments.push_back(build_segment(x[j], x[m + j], terms));
        const Segment& seg = s.segments.back();
        const ComplexMatrix& u = s.start.back();
        if (terms & kRobustTerm) s.prefix_v[j + 1] = s.prefix_v[j] + conjugate_by(u, seg.avg_v);
        if (terms & kLeakageTerm) {
            const ComplexMatrix upu = multiply_adjoint(multiply(u, p), u);
            s.prefix_kept[j + 1] = s.prefix_kept[j] + trace_product(seg.avg_p, upu).real();
        }
        s.start.push_back(multiply(seg.step, u));
    }
    s.suffix.assign(m, ComplexMatrix::Identity(n, n));
    for (int j = m - 2; j >= 0; --j) s.suffix[j] = multiply(s.suffix[j + 1], s.segments[j + 1].step);
    s.tail_v.assign(m, zero);
    s.tail_p.assign(m, zero);
    for (int j = m - 2; j >= 0; --j) {
        const Segment& next = s.segments[j + 1];
        if (terms & kRobustTerm)
            s.tail_v[j] = next.avg_v + conjugate_by(next.step, s.tail_v[j + 1]);
        if (terms & kLeakageTerm)
            s.tail_p[j] = next.avg_p + conjugate_by(next.step, s.tail_p[j + 1]);
    }
    return s;
}

CostTerms PulseCostEvaluator::finish(const ComplexMatrix& vbar_times_t, double kept_weight,
                                     const ComplexMatrix& final_u, unsigned terms) const {
    const ComplexMatrix& p = model_.projector();
    const int d = model_.subspace_dim();
    CostTerms out;
    if (terms & kTargetTerm) {
        const ComplexMatrix up = multiply(final_u, p);
        const double kept = trace_product(p, multiply_adjoint(up, final_u)).real();
        // target is block diagonal, so Tr[X P X^H P U P U^H P] = Tr[P U P U^H]
        const Complex overlap = trace_product(multiply(p, target_), multiply_adjoint(p, final_u));
        out.j_u = 1.0 - (kept + std::norm(overlap)) / (d * (d + 1.0));
    }
    if (terms & kRobustTerm) {
        ComplexMatrix vbar = vbar_times_t / total_time_;
        vbar = 0.5 * (vbar + vbar.adjoint());
        out.j_r = robustness_cost(susceptibility({vbar}, p, d, total_time_), model_.omega(),
                                  total_time_);
    }
    if (terms & kLeakageTerm) out.j_l = 1.0 - kept_weight / (d * total_time_);
    return out;
}

CostTerms PulseCostEvaluator::replace_segment(const Sweep& s, int j, const Segment& seg,
                                              unsigned terms) const {
    const ComplexMatrix& p = model_.projector();
    const ComplexMatrix& u = s.start[j];
    const ComplexMatrix x = multiply(seg.step, u);
    ComplexMatrix vt;
    double kept = 0.0;
    if (terms & kRobustTerm)
        vt = s.prefix_v[j] + conjugate_by(u, seg.avg_v) + conjugate_by(x, s.tail_v[j]);
    if (terms & kLeakageTerm) {
        const ComplexMatrix upu = multiply_adjoint(multiply(u, p), u);
        const ComplexMatrix xpx = multiply_adjoint(multiply(x, p), x);
        kept = s.prefix_kept[j] + trace_product(seg.avg_p, upu).real() +
               trace_product(s.tail_p[j], xpx).real();
    }
    return finish(vt, kept, multiply(s.suffix[j], x), terms);
}

CostTerms PulseCostEvaluator::evaluate(std::span<const double> x, unsigned terms) const {
    const Sweep s = sweep(x, terms);
    return finish(s.prefix_v.back(), s.prefix_kept.back(), s.start.back(), terms);
}

CostTerms PulseCostEvaluator::evaluate_with_gradient(std::span<const double> x,
                                                     std::vector<CostTerms>& gradient,
                                                     unsigned terms) const {
    const Sweep s = sweep(x, terms);
    const CostTerms value =
        finish(s.prefix_v.back(), s.prefix_kept.back(), s.start.back(), terms);
    const int m = n_segments_;
    const double h = options_.fd_step;
    gradient.assign(2 * m, CostTerms{});
    for (int i = 0; i < 2 * m; ++i) {
        const int j = i % m;
        double dr = x[j], di = x[m + j];
        double& moved = (i < m) ? dr : di;
        const double centre = moved;
        moved = centre + h;
        const CostTerms up = replace_segment(s, j, build_segment(dr, di, terms), terms);
        moved = centre - h;
        const CostTerms down = replace_segment(s, j, build_segment(dr, di, terms), terms);
        gradient[i] = {(up.j_u - down.j_u) / (2 * h), (up.j_r - down.j_r) / (2 * h),
                       (up.j_l - down.j_l) / (2 * h)};
    }
    return value;
}

}  // namespace qpulse
