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

#include "qpulse/linops.h"

#include <cmath>

#include "qpulse/kernels.h"

namespace qpulse {
namespace {

void require_square(const ComplexMatrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
}

void require_conformable(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square(a, "product");
    require_square(b, "product");
    if (a.rows() != b.rows())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.rows()) + " vs " +
                                    std::to_string(b.rows()));
}

kernels::cspan view(const ComplexMatrix& m) { return {m.data(), static_cast<size_t>(m.size())}; }
kernels::mspan view(ComplexMatrix& m) { return {m.data(), static_cast<size_t>(m.size())}; }

}  // namespace

double max_abs(const ComplexMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

double hermiticity_defect(const ComplexMatrix& a) { return max_abs(a - a.adjoint()); }

double unitarity_defect(const ComplexMatrix& u) {
    return max_abs(adjoint_multiply(u, u) - ComplexMatrix::Identity(u.rows(), u.cols()));
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

Unitary::Unitary(ComplexMatrix m) : m_(std::move(m)) {
    require_square(m_, "Unitary");
    const double defect = unitarity_defect(m_);
    if (!(defect <= kUnitaryTolerance))
        throw std::invalid_argument("matrix is not unitary: max|U^H U - I| = " +
                                    std::to_string(defect));
}

Unitary Unitary::identity(int dim) { return Unitary(ComplexMatrix::Identity(dim, dim), Trusted{}); }

Unitary Unitary::operator*(const Unitary& rhs) const {
    return Unitary(multiply(m_, rhs.m_), Trusted{});
}

Unitary Unitary::adjoint() const { return Unitary(m_.adjoint(), Trusted{}); }

ComplexMatrix Spectrum::propagator(double dt) const {
    const int n = static_cast<int>(energies.size());
    ComplexMatrix scaled = vectors;
    for (int k = 0; k < n; ++k) scaled.col(k) *= std::polar(1.0, -energies(k) * dt);
    return multiply_adjoint(scaled, vectors);
}

Spectrum diagonalize(const ComplexMatrix& hermitian) {
    require_square(hermitian, "diagonalize");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
    if (solver.info() != Eigen::Success)
        throw LinalgError("Hermitian eigendecomposition did not converge",
                          hermitian.norm());
    return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

Unitary expm_hermitian(const ComplexMatrix& h, double dt) {
    if (!std::isfinite(dt)) throw std::invalid_argument("expm_hermitian: non-finite time step");
    if (!is_hermitian(h)) throw std::invalid_argument("expm_hermitian: generator is not Hermitian");
    return Unitary(diagonalize(h).propagator(dt));
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_conformable(a, b);
    ComplexMatrix c(a.rows(), a.cols());
    kernels::active().matmul(static_cast<int>(a.rows()), view(a), view(b), view(c));
    return c;
}

ComplexMatrix adjoint_multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_conformable(a, b);
    ComplexMatrix c(a.rows(), a.cols());
    kernels::active().adjoint_matmul(static_cast<int>(a.rows()), view(a), view(b), view(c));
    return c;
}

ComplexMatrix multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_conformable(a, b);
    ComplexMatrix c(a.rows(), a.cols());
    kernels::active().matmul_adjoint(static_cast<int>(a.rows()), view(a), view(b), view(c));
    return c;
}

ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& a) {
    return adjoint_multiply(u, multiply(a, u));
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_conformable(a, b);
    return kernels::active().trace_product(static_cast<int>(a.rows()), view(a), view(b));
}

Complex trace_product(std::initializer_list<const ComplexMatrix*> factors) {
    if (factors.size() == 0) throw std::invalid_argument("trace_product: no factors");
    auto it = factors.begin();
    if (factors.size() == 1) {
        require_square(**it, "trace_product");
        return (*it)->trace();
    }
    ComplexMatrix acc = **it;
    const auto last = factors.end() - 1;
    for (++it; it != last; ++it) acc = multiply(acc, **it);
    return trace_product(acc, **last);
}

}  // namespace qpulse
