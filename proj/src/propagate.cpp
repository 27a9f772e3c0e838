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

#include "qpulse/propagate.h"

#include <cmath>
#include <stdexcept>

namespace qpulse {

std::vector<ComplexMatrix> PropagationRecord::boundaries() const {
    std::vector<ComplexMatrix> out;
    out.reserve(n_segments + 1);
    for (int j = 0; j <= n_segments; ++j) out.push_back(unitaries[j * substeps]);
    return out;
}

PropagationRecord propagate_segments(const SegmentHamiltonian& hamiltonian, int n_segments,
                                     double total_time, int substeps) {
    if (n_segments < 1) throw std::invalid_argument("propagate: need at least one segment");
    if (substeps < 1) throw std::invalid_argument("propagate: substeps must be >= 1");
    if (!(total_time > 0.0) || !std::isfinite(total_time))
        throw std::invalid_argument("propagate: total time must be positive");

    const double dt = total_time / n_segments;
    const double h = dt / substeps;
    PropagationRecord rec;
    rec.n_segments = n_segments;
    rec.substeps = substeps;
    rec.times.reserve(n_segments * substeps + 1);
    rec.unitaries.reserve(n_segments * substeps + 1);

    ComplexMatrix start = hamiltonian(0);
    const int n = static_cast<int>(start.rows());
    rec.times.push_back(0.0);
    rec.unitaries.push_back(ComplexMatrix::Identity(n, n));

    for (int j = 0; j < n_segments; ++j) {
        const Spectrum spec = diagonalize(j == 0 ? start : hamiltonian(j));
        const ComplexMatrix& base = rec.unitaries[j * substeps];
        for (int k = 1; k <= substeps; ++k) {
            rec.unitaries.push_back(multiply(spec.propagator(k * h), base));
            // the last node of a segment is pinned to the boundary time exactly
            rec.times.push_back(k == substeps ? (j + 1) * dt : j * dt + k * h);
        }
    }
    rec.times.back() = total_time;
    return rec;
}

ComplexMatrix propagate_final(const SegmentHamiltonian& hamiltonian, int n_segments,
                              double total_time) {
    if (n_segments < 1) throw std::invalid_argument("propagate: need at least one segment");
    if (!(total_time > 0.0) || !std::isfinite(total_time))
        throw std::invalid_argument("propagate: total time must be positive");
    const double dt = total_time / n_segments;
    ComplexMatrix u;
    for (int j = 0; j < n_segments; ++j) {
        const ComplexMatrix step = diagonalize(hamiltonian(j)).propagator(dt);
        u = j == 0 ? step : multiply(step, u);
    }
    return u;
}

PropagationRecord propagate(const TransmonModel& model, const ControlPulse& pulse,
                            int substeps) {
    pulse.validate();
    return propagate_segments(
        [&](int j) { return model.hamiltonian_at(pulse.d_r[j], pulse.d_i[j]); },
        pulse.n_segments(), model.duration(pulse.total_time), substeps);
}

PropagationRecord propagate_perturbed(const TransmonModel& model, const ControlPulse& pulse,
                                      const ComplexMatrix& v, double lambda, int substeps) {
    pulse.validate();
    if (!std::isfinite(lambda)) throw std::invalid_argument("propagate: non-finite lambda");
    if (v.rows() != model.dim() || !is_hermitian(v))
        throw std::invalid_argument("perturbation must be Hermitian with the model dimension");
    return propagate_segments(
        [&](int j) {
            ComplexMatrix h = model.hamiltonian_at(pulse.d_r[j], pulse.d_i[j]);
            if (lambda != 0.0) h += lambda * v;
            return h;
        },
        pulse.n_segments(), model.duration(pulse.total_time), substeps);
}

PropagationRecord propagate_perturbed(const TransmonModel& model, const ControlPulse& pulse,
                                      PerturbationKind kind, double lambda, int substeps) {
    return propagate_perturbed(model, pulse, model.perturbation(kind), lambda, substeps);
}

PropagationRecord propagate_sampled(const TransmonModel& model, const TimeFunction& d_r,
                                    const TimeFunction& d_i, const TimeFunction& delta,
                                    double total_time, int n_steps, int substeps) {
    if (n_steps < 1) throw std::invalid_argument("propagate_sampled: n_steps must be >= 1");
    const double dt = total_time / n_steps;
    return propagate_segments(
        [&](int j) {
            const double t = (j + 0.5) * dt;
            std::optional<double> det;
            if (delta) det = delta(t);
            return model.hamiltonian_at(d_r ? d_r(t) : 0.0, d_i ? d_i(t) : 0.0, det);
        },
        n_steps, total_time, substeps);
}

RecordDefects inspect(const PropagationRecord& record, const SegmentHamiltonian* hamiltonian) {
    RecordDefects d;
    const auto& t = record.times;
    if (t.empty() || t.front() != 0.0) d.time_grid_ok = false;
    for (size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) d.time_grid_ok = false;
    for (const auto& u : record.unitaries) {
        d.unitarity = std::max(d.unitarity, unitarity_defect(u));
        d.determinant = std::max(d.determinant, std::abs(std::abs(u.determinant()) - 1.0));
    }
    if (hamiltonian) {
        const double dt = record.segment_duration();
        for (int j = 0; j < record.n_segments; ++j) {
            const ComplexMatrix step = expm_hermitian((*hamiltonian)(j), dt).matrix();
            const ComplexMatrix predicted = multiply(step, record.unitaries[j * record.substeps]);
            d.composition = std::max(
                d.composition, max_abs(predicted - record.unitaries[(j + 1) * record.substeps]));
        }
    }
    return d;
}

}  // namespace qpulse
