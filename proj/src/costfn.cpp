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

#include "qpulse/costfn.h"

#include <cmath>
#include <string>

namespace qpulse {
namespace {

constexpr double kImagResidue = 1e-10;

void require_projector(const ComplexMatrix& p, int d_p) {
    if (p.rows() != p.cols()) throw std::invalid_argument("projector must be square");
    const double idem = max_abs(p * p - p);
    const double herm = hermiticity_defect(p);
    const double rank = p.trace().real();
    if (idem > 1e-12 || herm > 1e-12 || std::abs(rank - d_p) > 1e-9)
        throw std::invalid_argument("P is not a rank-" + std::to_string(d_p) + " projector");
}

double real_part_checked(Complex z, const char* what) {
    if (std::abs(z.imag()) > kImagResidue * std::max(1.0, std::abs(z.real())))
        throw std::logic_error(std::string(what) + ": trace has imaginary residue " +
                               std::to_string(z.imag()));
    return z.real();
}

ComplexMatrix full_target(const ComplexMatrix& target, int dim, int d_p) {
    if (target.rows() == dim) return target;
    if (target.rows() != d_p) throw std::invalid_argument("target has wrong dimension");
    ComplexMatrix full = ComplexMatrix::Identity(dim, dim);
    full.topLeftCorner(d_p, d_p) = target;
    return full;
}

double fidelity_unchecked(const ComplexMatrix& x, const ComplexMatrix& y, const ComplexMatrix& p,
                          int d_p) {
    const ComplexMatrix xp = multiply(x, p);
    const ComplexMatrix yp = multiply(y, p);
    const ComplexMatrix pxpx = multiply(p, multiply_adjoint(xp, x));  // P X P X^H
    const ComplexMatrix pypy = multiply(p, multiply_adjoint(yp, y));  // P Y P Y^H
    // Tr[X P X^H P Y P Y^H P] = Tr[(P X P X^H)(P Y P Y^H)] by cyclicity
    const double first = real_part_checked(trace_product(pxpx, pypy), "fidelity");
    const Complex overlap = trace_product(multiply(p, xp), y.adjoint());
    return (first + std::norm(overlap)) / (d_p * (d_p + 1.0));
}

double leakage_unchecked(const ComplexMatrix& u, const ComplexMatrix& p, int d_p) {
    const ComplexMatrix up = multiply(u, p);
    const double kept = real_part_checked(trace_product(p, multiply_adjoint(up, u)), "leakage");
    return 1.0 - kept / d_p;
}

}  // namespace

double subspace_fidelity(const ComplexMatrix& x, const ComplexMatrix& y, const ComplexMatrix& p,
                         int d_p) {
    require_projector(p, d_p);
    if (x.rows() != p.rows() || y.rows() != p.rows())
        throw std::invalid_argument("fidelity: dimension mismatch");
    return fidelity_unchecked(x, y, p, d_p);
}

double target_cost(const PropagationRecord& record, const ComplexMatrix& target,
                   const ComplexMatrix& p, int d_p) {
    require_projector(p, d_p);
    const ComplexMatrix full = full_target(target, static_cast<int>(p.rows()), d_p);
    return 1.0 - fidelity_unchecked(full, record.final_unitary(), p, d_p);
}

PerturbedFidelity perturbed_fidelity(const ComplexMatrix& u_lambda, const ComplexMatrix& u0_final,
                                     const ComplexMatrix& p, int d_p) {
    require_projector(p, d_p);
    PerturbedFidelity out;
    const ComplexMatrix ulp = multiply(u_lambda, p);
    const double a = real_part_checked(trace_product(p, multiply_adjoint(ulp, u_lambda)),
                                       "perturbed fidelity");
    const Complex b = trace_product(multiply(p, ulp), u0_final.adjoint());
    out.value = (a + std::norm(b)) / (d_p * (d_p + 1.0));
    out.reference_leakage = leakage_unchecked(u0_final, p, d_p);
    out.leaky_reference = out.reference_leakage > kLeakyReferenceThreshold;
    return out;
}

PerturbedFidelity perturbed_fidelity(const PropagationRecord& record_lambda,
                                     const ComplexMatrix& u0_final, const ComplexMatrix& p,
                                     int d_p) {
    return perturbed_fidelity(record_lambda.final_unitary(), u0_final, p, d_p);
}

std::vector<double> simpson_weights(const PropagationRecord& record) {
    const int k = record.substeps;
    if (k < 2 || k % 2 != 0)
        throw ConfigurationError("Simpson quadrature needs an even number of substeps per segment, got " +
                                 std::to_string(k));
    std::vector<double> w(record.unitaries.size(), 0.0);
    const double h = record.segment_duration() / k;
    for (int j = 0; j < record.n_segments; ++j) {
        const int base = j * k;
        for (int i = 0; i <= k; ++i) {
            const double c = (i == 0 || i == k) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            w[base + i] += c * h / 3.0;
        }
    }
    return w;
}

AveragedPerturbation averaged_perturbation(const PropagationRecord& record,
                                           const ComplexMatrix& v) {
    const std::vector<double> w = simpson_weights(record);
    ComplexMatrix acc = ComplexMatrix::Zero(v.rows(), v.cols());
    for (size_t i = 0; i < w.size(); ++i) acc += w[i] * conjugate_by(record.unitaries[i], v);
    acc /= record.total_time();
    // symmetrise away rounding; the quadrature of Hermitian terms is Hermitian
    return {0.5 * (acc + acc.adjoint())};
}

double susceptibility(const AveragedPerturbation& vbar, const ComplexMatrix& p, int d_p,
                      double total_time) {
    const ComplexMatrix& v = vbar.matrix;
    const ComplexMatrix pv = multiply(p, v);
    const double tr_v2 = real_part_checked(trace_product(pv, v), "susceptibility");
    const double tr_v = real_part_checked(pv.trace(), "susceptibility");
    const double tr_vpv = real_part_checked(trace_product(pv, pv), "susceptibility");
    const double bracket = tr_v2 - (tr_v * tr_v + tr_vpv) / (d_p + 1.0);
    return -(2.0 * total_time * total_time / d_p) * bracket;
}

double robustness_cost(double susc, double omega, double total_time) {
    if (!(total_time > 0.0) || !(omega > 0.0))
        throw std::invalid_argument("robustness_cost: T and omega must be positive");
    return -susc / (2.0 * omega * omega * total_time * total_time);
}

double leakage(const ComplexMatrix& u, const ComplexMatrix& p, int d_p) {
    require_projector(p, d_p);
    return leakage_unchecked(u, p, d_p);
}

double leakage_cost(const PropagationRecord& record, const ComplexMatrix& p, int d_p) {
    require_projector(p, d_p);
    const std::vector<double> w = simpson_weights(record);
    double acc = 0.0;
    for (size_t i = 0; i < w.size(); ++i) acc += w[i] * leakage_unchecked(record.unitaries[i], p, d_p);
    return acc / record.total_time();
}

std::pair<Trace, Trace> dynamical_traces(const PropagationRecord& record,
                                         const ComplexMatrix& target, const ComplexMatrix& p,
                                         int d_p) {
    require_projector(p, d_p);
    const ComplexMatrix full = full_target(target, static_cast<int>(p.rows()), d_p);
    Trace f0, l0;
    f0.reserve(record.times.size());
    l0.reserve(record.times.size());
    for (size_t i = 0; i < record.times.size(); ++i) {
        const ComplexMatrix& u = record.unitaries[i];
        f0.push_back({record.times[i], fidelity_unchecked(full, u, p, d_p)});
        l0.push_back({record.times[i], leakage_unchecked(u, p, d_p)});
    }
    return {std::move(f0), std::move(l0)};
}

CostReport evaluate_pulse(const TransmonModel& model, const ControlPulse& pulse,
                          PerturbationKind kind, int substeps, bool with_traces) {
    const PropagationRecord rec = propagate(model, pulse, substeps);
    const ComplexMatrix& p = model.projector();
    const int d = model.subspace_dim();
    const ComplexMatrix target = pauli_x_gate();
    CostReport r;
    r.j_u = target_cost(rec, target, p, d);
    const double t = rec.total_time();
    r.j_r = robustness_cost(
        susceptibility(averaged_perturbation(rec, model.perturbation(kind)), p, d, t),
        model.omega(), t);
    r.j_l = leakage_cost(rec, p, d);
    if (with_traces) std::tie(r.f0_trace, r.l0_trace) = dynamical_traces(rec, target, p, d);
    return r;
}

double perturbed_infidelity(const TransmonModel& model, const ControlPulse& pulse,
                            const ComplexMatrix& v, double lambda) {
    const ComplexMatrix u0 = propagate(model, pulse, 1).final_unitary();
    const ComplexMatrix ul = propagate_perturbed(model, pulse, v, lambda, 1).final_unitary();
    return 1.0 - perturbed_fidelity(ul, u0, model.projector(), model.subspace_dim()).value;
}

double target_infidelity(const TransmonModel& model, const ControlPulse& pulse,
                         const ComplexMatrix& v, double lambda) {
    const ComplexMatrix ul = propagate_perturbed(model, pulse, v, lambda, 1).final_unitary();
    return 1.0 - subspace_fidelity(model.embed(pauli_x_gate()), ul, model.projector(),
                                   model.subspace_dim());
}

}  // namespace qpulse
