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

#include "qpulse/oracles.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "qpulse/costfn.h"
#include "qpulse/propagate.h"

namespace qpulse {

SecondDerivative fd_second_derivative(const std::function<double(double)>& f,
                                      const std::vector<double>& steps) {
    if (steps.size() < 2) throw std::invalid_argument("fd_second_derivative: need two steps");
    for (size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0)) throw std::invalid_argument("fd_second_derivative: steps must be positive");
        if (i > 0 && !(steps[i] < steps[i - 1]))
            throw std::invalid_argument("fd_second_derivative: steps must be descending");
    }
    SecondDerivative out;
    const double f0 = f(0.0);
    for (double h : steps) out.per_step.push_back((f(h) - 2.0 * f0 + f(-h)) / (h * h));

    const size_t n = steps.size();
    const double h1 = steps[n - 2], h2 = steps[n - 1];
    const double d1 = out.per_step[n - 2], d2 = out.per_step[n - 1];
    out.value = (h1 * h1 * d2 - h2 * h2 * d1) / (h1 * h1 - h2 * h2);

    // Truncation error shrinks with h; once rounding dominates the sequence
    // stops converging.
    for (size_t i = 2; i < n; ++i) {
        const double prev = std::abs(out.per_step[i - 1] - out.per_step[i - 2]);
        const double next = std::abs(out.per_step[i] - out.per_step[i - 1]);
        if (next > prev) out.noisy = true;
    }
    const double rounding = 4.0 * 1e-16 * std::max(1.0, std::abs(f0)) / (h2 * h2);
    if (rounding > 1e-2 * std::max(std::abs(out.value), 1e-300) && rounding > std::abs(d2 - d1))
        out.noisy = true;
    return out;
}

std::vector<double> default_fd_steps(double total_time, const ComplexMatrix& v) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(v, Eigen::EigenvaluesOnly);
    const double radius = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
    const double h = 0.02 / (total_time * radius);
    return {h, 0.5 * h};
}

SecondDerivative fd_susceptibility(const TransmonModel& model, const ControlPulse& pulse,
                                   const ComplexMatrix& v, const std::vector<double>& steps,
                                   const ComplexMatrix* projector, int d_p) {
    pulse.validate();
    const ComplexMatrix& p = projector ? *projector : model.projector();
    const int d = projector ? d_p : model.subspace_dim();
    const double t = model.duration(pulse.total_time);
    auto final_u = [&](double lambda) {
        return propagate_final(
            [&](int j) {
                ComplexMatrix h = model.hamiltonian_at(pulse.d_r[j], pulse.d_i[j]);
                if (lambda != 0.0) h += lambda * v;
                return h;
            },
            pulse.n_segments(), t);
    };
    const ComplexMatrix u0 = final_u(0.0);
    return fd_second_derivative(
        [&](double lambda) { return perturbed_fidelity(final_u(lambda), u0, p, d).value; }, steps);
}

SecondDerivative fd_susceptibility(const TransmonModel& model, const ControlPulse& pulse,
                                   PerturbationKind kind, const std::vector<double>& steps) {
    return fd_susceptibility(model, pulse, model.perturbation(kind), steps);
}

ThreeLevelPopulation three_level_pi_pulse(double alpha_over_omega, double total_time) {
    if (alpha_over_omega == 0.0 || !std::isfinite(alpha_over_omega))
        throw std::invalid_argument("three_level_pi_pulse: alpha must be non-zero");
    if (!(total_time > 0.0)) throw std::invalid_argument("three_level_pi_pulse: T must be positive");
    const double omega = std::numbers::pi / total_time;
    const double alpha = alpha_over_omega * omega;

    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 1) = h(1, 0) = 0.5 * omega;
    h(1, 2) = h(2, 1) = 0.5 * omega * std::numbers::sqrt2;
    h(2, 2) = alpha;
    const ComplexMatrix u = diagonalize(h).propagator(total_time);

    ThreeLevelPopulation out;
    out.full = std::norm(u(1, 0));
    const double r = 4.0 * alpha * alpha + omega * omega;
    const double s = std::sin(total_time * omega * std::sqrt(r) / (4.0 * alpha));
    out.effective = 4.0 * alpha * alpha * s * s / r;
    out.asymptotic =
        1.0 - std::numbers::pi * std::numbers::pi / (4.0 * alpha * alpha * total_time * total_time);
    return out;
}

MonteCarloAverage mc_state_average(const ComplexMatrix& u, const ComplexMatrix& u_ref,
                                   const ComplexMatrix& p, int n_samples, std::uint64_t seed) {
    if (n_samples < 2) throw std::invalid_argument("mc_state_average: need at least two samples");
    const int n = static_cast<int>(p.rows());
    std::vector<int> kept;
    for (int i = 0; i < n; ++i)
        if (std::abs(p(i, i) - 1.0) < 1e-12) kept.push_back(i);
    if (kept.empty()) throw std::invalid_argument("mc_state_average: empty projector");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const Eigen::MatrixXcd pu = p * u;
    const Eigen::MatrixXcd pr = p * u_ref;
    double fs = 0, fs2 = 0, ls = 0, ls2 = 0;
    Eigen::VectorXcd psi(n);
    for (int k = 0; k < n_samples; ++k) {
        psi.setZero();
        for (int i : kept) psi(i) = Complex(gauss(rng), gauss(rng));
        psi /= psi.norm();
        const Eigen::VectorXcd a = pu * psi;
        const Eigen::VectorXcd b = pr * psi;
        const double fid = std::norm(a.dot(b));
        const double leak = 1.0 - a.squaredNorm();
        fs += fid;
        fs2 += fid * fid;
        ls += leak;
        ls2 += leak * leak;
    }
    const double m = n_samples;
    MonteCarloAverage out;
    out.n_samples = n_samples;
    out.fidelity = fs / m;
    out.leakage = ls / m;
    out.fidelity_stderr = std::sqrt(std::max(0.0, fs2 / m - out.fidelity * out.fidelity) / (m - 1));
    out.leakage_stderr = std::sqrt(std::max(0.0, ls2 / m - out.leakage * out.leakage) / (m - 1));
    return out;
}

ComplexMatrix random_unitary(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    ComplexMatrix z(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) z(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

OracleReport compare(std::string name, double primary, double oracle, double tol_abs,
                     double tol_rel) {
    OracleReport r;
    r.name = std::move(name);
    r.primary_value = primary;
    r.oracle_value = oracle;
    r.abs_err = std::abs(primary - oracle);
    r.rel_err = oracle != 0.0 ? r.abs_err / std::abs(oracle) : (r.abs_err == 0.0 ? 0.0 : INFINITY);
    r.tol_abs = tol_abs;
    r.tol_rel = tol_rel;
    r.passed = std::isfinite(r.abs_err) && (r.abs_err <= tol_abs || r.rel_err <= tol_rel);
    return r;
}

void write_jsonl(std::ostream& out, const OracleReport& r) {
    nlohmann::json j = {{"name", r.name},         {"primary_value", r.primary_value},
                        {"oracle_value", r.oracle_value}, {"abs_err", r.abs_err},
                        {"rel_err", r.rel_err},   {"tol_abs", r.tol_abs},
                        {"tol_rel", r.tol_rel},   {"passed", r.passed}};
    if (!r.note.empty()) j["note"] = r.note;
    out << j.dump() << '\n';
}

}  // namespace qpulse
