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

#include <gtest/gtest.h>

#include <cmath>

#include "qpulse/linops.h"
#include "test_util.h"

namespace qpulse {
namespace {

TEST(Expm, DiagonalGivesPhases) {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = 0.5;
    h(1, 1) = -1.25;
    h(2, 2) = 3.0;
    const ComplexMatrix u = expm_hermitian(h, 0.7).matrix();
    for (int i = 0; i < 3; ++i)
        EXPECT_LT(std::abs(u(i, i) - std::exp(Complex(0, -0.7 * h(i, i).real()))), 1e-14);
    EXPECT_LT(std::abs(u(0, 1)), 1e-15);
}

TEST(Expm, PauliXRotation) {
    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    const double t = 0.37;
    const ComplexMatrix expected =
        std::cos(t) * ComplexMatrix::Identity(2, 2) - Complex(0, std::sin(t)) * x;
    EXPECT_LT(max_abs(expm_hermitian(x, t).matrix() - expected), 1e-14);
}

TEST(Expm, ZeroTimeIsIdentity) {
    const ComplexMatrix h = testing::random_hermitian(5, 3);
    EXPECT_LT(max_abs(expm_hermitian(h, 0.0).matrix() - ComplexMatrix::Identity(5, 5)), 1e-14);
}

TEST(Expm, GroupPropertyAndUnitarity) {
    const ComplexMatrix h = testing::random_hermitian(6, 4);
    const ComplexMatrix a = expm_hermitian(h, 0.3).matrix();
    const ComplexMatrix b = expm_hermitian(h, 0.45).matrix();
    EXPECT_LT(max_abs(multiply(a, b) - expm_hermitian(h, 0.75).matrix()), 1e-12);
    EXPECT_LT(unitarity_defect(a), 1e-13);
    const ComplexMatrix back = expm_hermitian(h, -0.3).matrix();
    EXPECT_LT(max_abs(multiply(a, back) - ComplexMatrix::Identity(6, 6)), 1e-12);
}

TEST(Expm, MatchesTaylorSeriesForSmallGenerator) {
    const ComplexMatrix h = 0.05 * testing::random_hermitian(4, 9);
    const ComplexMatrix a = Complex(0, -1) * h;
    ComplexMatrix term = ComplexMatrix::Identity(4, 4), sum = term;
    for (int k = 1; k < 25; ++k) {
        term = term * a / double(k);
        sum += term;
    }
    EXPECT_LT(max_abs(expm_hermitian(h, 1.0).matrix() - sum), 1e-14);
}

TEST(Diagonalize, ReconstructsMatrix) {
    const ComplexMatrix h = testing::random_hermitian(7, 5);
    const Spectrum s = diagonalize(h);
    const ComplexMatrix back = s.vectors * s.energies.cast<Complex>().asDiagonal() * s.vectors.adjoint();
    EXPECT_LT(max_abs(back - h), 1e-12);
    for (int i = 1; i < 7; ++i) EXPECT_LE(s.energies(i - 1), s.energies(i));
}

TEST(Unitary, RejectsNonUnitary) {
    ComplexMatrix m = ComplexMatrix::Identity(3, 3);
    m(0, 0) = 1.01;
    EXPECT_THROW(Unitary{m}, std::invalid_argument);
    EXPECT_NO_THROW(Unitary{ComplexMatrix::Identity(3, 3)});
}

TEST(Unitary, ProductAndAdjoint) {
    const Unitary a = expm_hermitian(testing::random_hermitian(4, 1), 1.0);
    const Unitary b = expm_hermitian(testing::random_hermitian(4, 2), 1.0);
    EXPECT_LT(max_abs((a * b).matrix() - a.matrix() * b.matrix()), 1e-13);
    EXPECT_LT(max_abs((a * a.adjoint()).matrix() - ComplexMatrix::Identity(4, 4)), 1e-13);
}

TEST(Products, RoutedProductsMatchEigen) {
    const ComplexMatrix a = testing::random_complex(5, 7), b = testing::random_complex(5, 8);
    EXPECT_LT(max_abs(multiply(a, b) - a * b), 1e-12);
    EXPECT_LT(max_abs(adjoint_multiply(a, b) - a.adjoint() * b), 1e-12);
    EXPECT_LT(max_abs(multiply_adjoint(a, b) - a * b.adjoint()), 1e-12);
    EXPECT_LT(max_abs(conjugate_by(a, b) - a.adjoint() * b * a), 1e-11);
    EXPECT_LT(std::abs(trace_product(a, b) - (a * b).trace()), 1e-12);
    const ComplexMatrix c = testing::random_complex(5, 9);
    EXPECT_LT(std::abs(trace_product({&a, &b, &c}) - (a * b * c).trace()), 1e-11);
}

TEST(Checks, HermiticityAndUnitarityDefects) {
    const ComplexMatrix h = testing::random_hermitian(4, 3);
    EXPECT_TRUE(is_hermitian(h));
    ComplexMatrix g = h;
    g(0, 1) += 1e-6;
    EXPECT_FALSE(is_hermitian(g));
    EXPECT_GT(hermiticity_defect(g), 5e-7);
    EXPECT_LT(unitarity_defect(ComplexMatrix::Identity(3, 3)), 1e-16);
}

}  // namespace
}  // namespace qpulse
