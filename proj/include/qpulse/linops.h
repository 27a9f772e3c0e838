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

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpulse {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Raised when a Hermitian eigendecomposition fails to converge.
class LinalgError : public std::runtime_error {
  public:
    LinalgError(const std::string& what, double matrix_norm)
        : std::runtime_error(what + " (matrix norm " + std::to_string(matrix_norm) + ")"),
          matrix_norm_(matrix_norm) {}
    double matrix_norm() const { return matrix_norm_; }

  private:
    double matrix_norm_;
};

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;

double max_abs(const ComplexMatrix& a);
double hermiticity_defect(const ComplexMatrix& a);
double unitarity_defect(const ComplexMatrix& u);
bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTolerance);

/// Square matrix with U^H U = I to within kUnitaryTolerance, checked when built.
class Unitary {
  public:
    explicit Unitary(ComplexMatrix m);
    static Unitary identity(int dim);

    const ComplexMatrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    Unitary operator*(const Unitary& rhs) const;
    Unitary adjoint() const;

  private:
    struct Trusted {};
    Unitary(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

/// Eigenpairs of a Hermitian matrix, H = V diag(E) V^H.
struct Spectrum {
    RealVector energies;
    ComplexMatrix vectors;

    /// exp(-i H dt) assembled from the eigenpairs.
    ComplexMatrix propagator(double dt) const;
};

Spectrum diagonalize(const ComplexMatrix& hermitian);

/// exp(-i H dt) for Hermitian H.
Unitary expm_hermitian(const ComplexMatrix& h, double dt);

// Products routed through the runtime-selected kernels.
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint_multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b);
/// U^H A U
ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& a);

/// Tr(A B), without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);
/// Tr(A1 A2 ... Ak); forms the product of all but the last factor.
Complex trace_product(std::initializer_list<const ComplexMatrix*> factors);

}  // namespace qpulse
