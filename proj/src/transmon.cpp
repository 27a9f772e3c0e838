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

#include "qpulse/transmon.h"

#include <cmath>
#include <stdexcept>

namespace qpulse {

std::string_view to_string(PerturbationKind kind) {
    switch (kind) {
        case PerturbationKind::Number: return "n";
        case PerturbationKind::Quadrature: return "q";
        case PerturbationKind::NumberSquared: return "n2";
    }
    return "?";
}

PerturbationKind perturbation_from_string(std::string_view s) {
    if (s == "n" || s == "number") return PerturbationKind::Number;
    if (s == "q" || s == "quadrature") return PerturbationKind::Quadrature;
    if (s == "n2" || s == "number_squared") return PerturbationKind::NumberSquared;
    throw std::invalid_argument("unknown perturbation '" + std::string(s) + "' (expected n, q, n2)");
}

TransmonModel::TransmonModel(TransmonParams params) : params_(params) {
    const int n = params_.n_levels;
    if (n < 3) throw std::invalid_argument("transmon needs at least 3 levels (one leakage level)");
    if (!(params_.omega > 0.0) || !std::isfinite(params_.omega))
        throw std::invalid_argument("omega must be positive");
    if (!std::isfinite(params_.delta_over_omega) || !std::isfinite(params_.alpha_over_omega))
        throw std::invalid_argument("non-finite detuning or anharmonicity");

    ComplexMatrix lower = ComplexMatrix::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) lower(j, j + 1) = std::sqrt(static_cast<double>(j + 1));
    const ComplexMatrix raise = lower.adjoint();
    const double r2 = std::sqrt(2.0);
    number_ = raise * lower;
    quadrature_ = (lower + raise) / r2;
    momentum_ = Complex(0.0, 1.0) * (raise - lower) / r2;
    projector_ = ComplexMatrix::Zero(n, n);
    projector_(0, 0) = projector_(1, 1) = 1.0;

    drive_r_ = (params_.omega / r2) * quadrature_;
    drive_i_ = -(params_.omega / r2) * momentum_;
    fixed_drift_ = (0.5 * alpha()) * (number_ * number_ - number_);
}

ComplexMatrix TransmonModel::drift(std::optional<double> delta_override) const {
    return fixed_drift_ + delta_override.value_or(delta()) * number_;
}

ComplexMatrix TransmonModel::hamiltonian_at(double d_r, double d_i,
                                            std::optional<double> delta_override) const {
    if (!std::isfinite(d_r) || !std::isfinite(d_i))
        throw std::invalid_argument("non-finite drive amplitude");
    return drift(delta_override) + d_r * drive_r_ + d_i * drive_i_;
}

ComplexMatrix TransmonModel::perturbation(PerturbationKind kind) const {
    switch (kind) {
        case PerturbationKind::Number: return number_;
        case PerturbationKind::Quadrature: return quadrature_;
        case PerturbationKind::NumberSquared: return number_ * number_;
    }
    throw std::invalid_argument("unknown perturbation kind");
}

double TransmonModel::rescale_factor(PerturbationKind kind) const {
    const ComplexMatrix v = perturbation(kind);
    return (projector_ * v * v).trace().real();
}

ComplexMatrix TransmonModel::embed(const ComplexMatrix& subspace_unitary) const {
    const int d = subspace_dim();
    if (subspace_unitary.rows() != d || subspace_unitary.cols() != d)
        throw std::invalid_argument("target must act on the 2-level subspace");
    ComplexMatrix full = ComplexMatrix::Identity(dim(), dim());
    full.topLeftCorner(d, d) = subspace_unitary;
    return full;
}

ComplexMatrix pauli_x_gate() {
    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    return x;
}

void ControlPulse::validate() const {
    if (d_r.empty() || d_r.size() != d_i.size())
        throw std::invalid_argument("pulse needs matching, non-empty d_r and d_i");
    if (!(total_time > 0.0) || !std::isfinite(total_time))
        throw std::invalid_argument("pulse total_time must be positive");
    if (!(bound > 0.0)) throw std::invalid_argument("pulse bound must be positive");
    for (size_t j = 0; j < d_r.size(); ++j) {
        if (!(std::abs(d_r[j]) <= bound) || !(std::abs(d_i[j]) <= bound))
            throw std::invalid_argument("pulse amplitude outside bound at segment " +
                                        std::to_string(j));
    }
}

ControlPulse ControlPulse::zeros(int n_segments, double total_time, double bound) {
    ControlPulse p;
    p.total_time = total_time;
    p.bound = bound;
    p.d_r.assign(n_segments, 0.0);
    p.d_i.assign(n_segments, 0.0);
    return p;
}

ControlPulse ControlPulse::from_parameters(std::span<const double> x, double total_time,
                                           double bound) {
    if (x.size() % 2 != 0 || x.empty())
        throw std::invalid_argument("parameter vector must have even, non-zero length");
    const size_t m = x.size() / 2;
    ControlPulse p;
    p.total_time = total_time;
    p.bound = bound;
    p.d_r.assign(x.begin(), x.begin() + m);
    p.d_i.assign(x.begin() + m, x.end());
    return p;
}

std::vector<double> ControlPulse::parameters() const {
    std::vector<double> x(d_r);
    x.insert(x.end(), d_i.begin(), d_i.end());
    return x;
}

}  // namespace qpulse
