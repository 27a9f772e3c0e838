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

#include "qpulse/drag.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qpulse {

void DragParams::validate() const {
    if (!(total_time > 0.0)) throw std::invalid_argument("DRAG total_time must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("DRAG sigma must be positive");
    if (!std::isfinite(area)) throw std::invalid_argument("DRAG area must be finite");
    if (!(alpha_over_omega != 0.0) || !std::isfinite(alpha_over_omega))
        throw std::invalid_argument("DRAG needs a non-zero anharmonicity");
}

DragFields drag_fields(const DragParams& params, double omega) {
    params.validate();
    const double t_end = params.total_time * kTwoPi / omega;
    const double sigma = params.sigma * kTwoPi / omega;
    const double alpha = params.alpha_over_omega * omega;
    const double edge = std::exp(-t_end * t_end / (8.0 * sigma * sigma));
    const double norm = std::sqrt(2.0 * std::numbers::pi * sigma * sigma) *
                            std::erf(t_end / std::sqrt(8.0 * sigma * sigma)) -
                        t_end * edge;
    if (!(norm > 1e-12 * t_end) || !std::isfinite(norm))
        throw std::invalid_argument("DRAG normalisation underflows for sigma/T = " +
                                    std::to_string(params.sigma / params.total_time));
    const double amp = params.area / (norm * omega);
    const double centre = 0.5 * t_end;

    DragFields f;
    f.total_time = t_end;
    f.d_r = [=](double t) {
        const double u = t - centre;
        return amp * (std::exp(-u * u / (2.0 * sigma * sigma)) - edge);
    };
    const double r2 = std::numbers::sqrt2;
    f.d_i = [=](double t) {
        const double u = t - centre;
        const double slope = -amp * u / (sigma * sigma) * std::exp(-u * u / (2.0 * sigma * sigma));
        return slope / (r2 * alpha);
    };
    const auto d_r = f.d_r;
    f.delta = [=](double t) {
        const double v = d_r(t);
        return omega * omega * v * v * (1.0 - r2) / (2.0 * alpha);
    };
    return f;
}

double drag_area(const DragFields& fields, double omega) {
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&](double t) { return omega * fields.d_r(t); };
    return gauss_kronrod<double, 61>::integrate(integrand, 0.0, fields.total_time, 15, 1e-13);
}

namespace {

SegmentHamiltonian sampled_hamiltonian(const TransmonModel& model, const DragFields& f,
                                       int n_steps, const ComplexMatrix* v, double lambda) {
    const double dt = f.total_time / n_steps;
    return [&model, f, dt, v, lambda](int j) {
        const double t = (j + 0.5) * dt;
        ComplexMatrix h = model.hamiltonian_at(f.d_r(t), f.d_i(t), f.delta(t));
        if (v && lambda != 0.0) h += lambda * (*v);
        return h;
    };
}

}  // namespace

ComplexMatrix drag_final_unitary(const TransmonModel& model, const DragParams& params,
                                 const ComplexMatrix* v, double lambda, int n_steps) {
    const DragFields f = drag_fields(params, model.omega());
    return propagate_final(sampled_hamiltonian(model, f, n_steps, v, lambda), n_steps,
                           f.total_time);
}

DragSimulation simulate_drag(const TransmonModel& model, const DragParams& params,
                             PerturbationKind kind, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("simulate_drag: n_steps must be >= 1");
    DragParams p = params;
    p.alpha_over_omega = model.params().alpha_over_omega;
    const DragFields f = drag_fields(p, model.omega());

    DragSimulation sim;
    sim.n_steps = n_steps;
    sim.n_levels = model.dim();
    sim.record = propagate_sampled(model, f.d_r, f.d_i, f.delta, f.total_time, n_steps, 2);
    const ComplexMatrix fine =
        propagate_final(sampled_hamiltonian(model, f, 2 * n_steps, nullptr, 0.0), 2 * n_steps,
                        f.total_time);
    sim.step_halving_defect = max_abs(fine - sim.record.final_unitary());
    if (sim.step_halving_defect > kStepHalvingTolerance) {
        const double factor = std::sqrt(sim.step_halving_defect / kStepHalvingTolerance);
        const int suggested = static_cast<int>(std::ceil(1.25 * factor * n_steps));
        throw std::runtime_error("DRAG sampling not converged: step halving moves U(T) by " +
                                 std::to_string(sim.step_halving_defect) + "; try n_steps >= " +
                                 std::to_string(suggested));
    }

    const ComplexMatrix& proj = model.projector();
    const int d = model.subspace_dim();
    const ComplexMatrix target = pauli_x_gate();
    const double t = f.total_time;
    sim.report.j_u = target_cost(sim.record, target, proj, d);
    sim.report.j_r = robustness_cost(
        susceptibility(averaged_perturbation(sim.record, model.perturbation(kind)), proj, d, t),
        model.omega(), t);
    sim.report.j_l = leakage_cost(sim.record, proj, d);
    std::tie(sim.report.f0_trace, sim.report.l0_trace) =
        dynamical_traces(sim.record, target, proj, d);
    return sim;
}

}  // namespace qpulse
