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

#include "qpulse/transmon.h"

namespace qpulse {
namespace {

TEST(Transmon, OperatorsOnLowLevels) {
    const TransmonModel m(TransmonParams{});
    EXPECT_EQ(m.dim(), 6);
    EXPECT_EQ(m.subspace_dim(), 2);
    for (int n = 0; n < 6; ++n) EXPECT_DOUBLE_EQ(m.number()(n, n).real(), n);
    // q = (a + a^H)/sqrt2 has <n|q|n+1> = sqrt((n+1)/2)
    EXPECT_NEAR(m.quadrature()(0, 1).real(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(m.quadrature()(1, 2).real(), 1.0, 1e-15);
    EXPECT_TRUE(is_hermitian(m.momentum()));
    EXPECT_NEAR(m.projector().trace().real(), 2.0, 0.0);
}

TEST(Transmon, DriftEnergies) {
    TransmonParams p;
    p.delta_over_omega = -0.5;
    p.alpha_over_omega = -2.0;
    const TransmonModel m(p);
    const ComplexMatrix h = m.hamiltonian_at(0.0, 0.0);
    for (int n = 0; n < 6; ++n)
        EXPECT_NEAR(h(n, n).real(), -0.5 * n + (-2.0 / 2.0) * (n * n - n), 1e-12);
    EXPECT_NEAR(h(2, 2).real(), 2 * -0.5 + -2.0, 1e-14);
}

TEST(Transmon, DriveOnQubitBlockIsHalfPauli) {
    TransmonParams p;
    p.delta_over_omega = 0.0;
    const TransmonModel m(p);
    const ComplexMatrix h = m.hamiltonian_at(0.8, 0.3);
    // (1/2)(d_r sigma_x - d_i sigma_y) on {0, 1}
    EXPECT_NEAR(h(0, 1).real(), 0.4, 1e-15);
    EXPECT_NEAR(h(0, 1).imag(), 0.15, 1e-15);
    EXPECT_NEAR(h(1, 0).imag(), -0.15, 1e-15);
    EXPECT_TRUE(is_hermitian(h));
}

TEST(Transmon, DeltaOverrideReplacesDetuning) {
    const TransmonModel m(TransmonParams{});
    const ComplexMatrix a = m.hamiltonian_at(0.0, 0.0, 0.25);
    EXPECT_NEAR(a(1, 1).real(), 0.25, 1e-15);
    EXPECT_NEAR(a(3, 3).real(), 0.75 - 6.0, 1e-14);
}

TEST(Transmon, PerturbationsAndRescaling) {
    const TransmonModel m(TransmonParams{});
    EXPECT_NEAR(m.rescale_factor(PerturbationKind::Number), 1.0, 1e-14);
    EXPECT_NEAR(m.rescale_factor(PerturbationKind::Quadrature), 2.0, 1e-14);
    EXPECT_NEAR(m.rescale_factor(PerturbationKind::NumberSquared), 1.0, 1e-14);
    EXPECT_NEAR(m.perturbation(PerturbationKind::NumberSquared)(3, 3).real(), 9.0, 1e-13);
    EXPECT_EQ(perturbation_from_string("n2"), PerturbationKind::NumberSquared);
    EXPECT_EQ(to_string(PerturbationKind::Quadrature), "q");
    EXPECT_THROW(perturbation_from_string("x"), std::invalid_argument);
}

TEST(Transmon, DurationUsesGatePeriod) {
    TransmonParams p;
    p.omega = 2.0;
    const TransmonModel m(p);
    EXPECT_NEAR(m.duration(1.0), kTwoPi / 2.0, 1e-15);
}

TEST(Transmon, RejectsTooFewLevels) {
    TransmonParams p;
    p.n_levels = 2;
    EXPECT_THROW(TransmonModel{p}, std::invalid_argument);
}

TEST(Transmon, EmbedTarget) {
    const TransmonModel m(TransmonParams{});
    const ComplexMatrix x = m.embed(pauli_x_gate());
    EXPECT_EQ(x(0, 1), Complex(1.0));
    EXPECT_EQ(x(4, 4), Complex(1.0));
    EXPECT_EQ(x(0, 0), Complex(0.0));
}

TEST(ControlPulse, ParameterRoundTripAndValidation) {
    std::vector<double> x{0.1, -0.2, 0.3, 0.4, -0.5, 0.6};
    const ControlPulse p = ControlPulse::from_parameters(x, 1.3);
    EXPECT_EQ(p.n_segments(), 3);
    EXPECT_EQ(p.d_i[0], 0.4);
    EXPECT_EQ(p.parameters(), x);
    x[0] = 1.5;
    EXPECT_THROW(ControlPulse::from_parameters(x, 1.3).validate(), std::invalid_argument);
    EXPECT_THROW(ControlPulse::zeros(3, -1.0).validate(), std::invalid_argument);
    EXPECT_THROW(ControlPulse::from_parameters(std::vector<double>{0.1}, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace qpulse
