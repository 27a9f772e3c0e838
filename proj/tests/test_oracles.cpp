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
#include <sstream>

#include <json.hpp>

#include "qpulse/costfn.h"
#include "qpulse/optimizer.h"
#include "qpulse/oracles.h"

namespace qpulse {
namespace {

TEST(FdSecondDerivative, QuadraticIsExact) {
    const double c = 0.37;
    auto f = [&](double x) { return 1.0 - c * x * x; };
    const SecondDerivative d = fd_second_derivative(f, {1e-2, 5e-3});
    EXPECT_NEAR(d.value, -2.0 * c, 1e-10);
    ASSERT_EQ(d.per_step.size(), 2u);
}

TEST(FdSecondDerivative, RichardsonRemovesQuarticTerm) {
    auto f = [](double x) { return std::cos(x); };
    const SecondDerivative d = fd_second_derivative(f, {0.1, 0.05});
    EXPECT_NEAR(d.value, -1.0, 1e-7);
    EXPECT_GT(std::abs(d.per_step[0] + 1.0), 1e-4);
}

TEST(FdSecondDerivative, RejectsBadSteps) {
    auto f = [](double x) { return x; };
    EXPECT_THROW(fd_second_derivative(f, {1e-2}), std::invalid_argument);
    EXPECT_THROW(fd_second_derivative(f, {1e-3, 1e-2}), std::invalid_argument);
    EXPECT_THROW(fd_second_derivative(f, {1e-2, -1e-3}), std::invalid_argument);
}

TEST(FdSusceptibility, IdentityPerturbationIsFlat) {
    const TransmonModel model(TransmonParams{4, -0.5, -2.0, 1.0});
    const ControlPulse pulse = ControlPulse::from_parameters(random_guess(6, 1.0, 2), 1.0);
    const ComplexMatrix v = ComplexMatrix::Identity(4, 4);
    const SecondDerivative d = fd_susceptibility(model, pulse, v, {1e-2, 5e-3});
    EXPECT_NEAR(d.value, 0.0, 1e-8);
}

TEST(FdSusceptibility, StepsScaleWithSpectrum) {
    const TransmonModel model(TransmonParams{6, -0.5, -2.0, 1.0});
    const auto n = default_fd_steps(2.0, model.number());
    const auto n2 = default_fd_steps(2.0, model.perturbation(PerturbationKind::NumberSquared));
    ASSERT_EQ(n.size(), 2u);
    EXPECT_NEAR(n[1], 0.5 * n[0], 1e-15);
    EXPECT_NEAR(n[0] / n2[0], 5.0, 1e-9);  // spectral radii 5 and 25
}

TEST(ThreeLevel, ClosedFormsAgreeFarFromResonance) {
    const ThreeLevelPopulation p = three_level_pi_pulse(-1000.0);
    EXPECT_NEAR(p.full, p.effective, 1e-5);
    EXPECT_NEAR(p.full, p.asymptotic, 1e-5);
    EXPECT_NEAR(p.asymptotic, 1.0 - 1.0 / (4.0e6), 1e-15);
}

TEST(ThreeLevel, AsymptoticFormula) {
    EXPECT_NEAR(three_level_pi_pulse(-10.0).asymptotic, 0.9975, 1e-12);
    // independent of how the gate time is chosen
    EXPECT_NEAR(three_level_pi_pulse(-10.0, 3.0).full, three_level_pi_pulse(-10.0, 1.0).full,
                1e-10);
}

TEST(ThreeLevel, GapShrinksWithAnharmonicity) {
    const double g5 = std::abs(three_level_pi_pulse(-5.0).full - three_level_pi_pulse(-5.0).asymptotic);
    const double g20 =
        std::abs(three_level_pi_pulse(-20.0).full - three_level_pi_pulse(-20.0).asymptotic);
    EXPECT_GT(g5 / g20, 10.0);
    EXPECT_THROW(three_level_pi_pulse(0.0), std::invalid_argument);
}

TEST(MonteCarlo, BlockDiagonalPairHasUnitFidelity) {
    const TransmonModel model(TransmonParams{4, -0.5, -2.0, 1.0});
    ComplexMatrix u = ComplexMatrix::Identity(4, 4);
    u.topLeftCorner(2, 2) = random_unitary(2, 4);
    u.bottomRightCorner(2, 2) = random_unitary(2, 5);
    const MonteCarloAverage mc = mc_state_average(u, u, model.projector(), 2000, 1);
    EXPECT_NEAR(mc.fidelity, 1.0, 1e-12);
    EXPECT_NEAR(mc.leakage, 0.0, 1e-12);
}

TEST(MonteCarlo, SwapIntoLeakageLevel) {
    const TransmonModel model(TransmonParams{3, -0.5, -2.0, 1.0});
    ComplexMatrix swap = ComplexMatrix::Zero(3, 3);
    swap(0, 0) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    const MonteCarloAverage mc = mc_state_average(swap, id, model.projector(), 100000, 9);
    EXPECT_NEAR(mc.leakage, 0.5, 3.0 * mc.leakage_stderr + 1e-12);
    EXPECT_NEAR(mc.fidelity, 1.0 / 3.0, 3.0 * mc.fidelity_stderr + 1e-12);
    EXPECT_NEAR(subspace_fidelity(id, swap, model.projector(), 2), 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(leakage(swap, model.projector(), 2), 0.5, 1e-14);
}

TEST(MonteCarlo, Reproducible) {
    const ComplexMatrix u = random_unitary(4, 1), r = random_unitary(4, 2);
    const ComplexMatrix p = TransmonModel(TransmonParams{4, -0.5, -2.0, 1.0}).projector();
    const auto a = mc_state_average(u, r, p, 100, 7);
    const auto b = mc_state_average(u, r, p, 100, 7);
    EXPECT_EQ(a.fidelity, b.fidelity);
    EXPECT_EQ(a.n_samples, 100);
}

TEST(RandomUnitary, IsUnitaryAndSeeded) {
    const ComplexMatrix u = random_unitary(5, 3);
    EXPECT_LT(max_abs(u.adjoint() * u - ComplexMatrix::Identity(5, 5)), 1e-13);
    EXPECT_EQ(max_abs(u - random_unitary(5, 3)), 0.0);
    EXPECT_GT(max_abs(u - random_unitary(5, 4)), 1e-3);
}

TEST(OracleReport, CompareAndJson) {
    const OracleReport ok = compare("x", 1.0, 1.0 + 1e-9, 0.0, 1e-6);
    EXPECT_TRUE(ok.passed);
    EXPECT_NEAR(ok.abs_err, 1e-9, 1e-15);
    const OracleReport abs_only = compare("y", 0.0, 1e-12, 1e-10, 0.0);
    EXPECT_TRUE(abs_only.passed);
    const OracleReport bad = compare("z", 1.0, 2.0, 1e-3, 1e-3);
    EXPECT_FALSE(bad.passed);

    std::ostringstream os;
    write_jsonl(os, bad);
    const nlohmann::json j = nlohmann::json::parse(os.str());
    EXPECT_EQ(j.at("name"), "z");
    EXPECT_EQ(j.at("passed"), false);
    EXPECT_EQ(os.str().back(), '\n');
}

}  // namespace
}  // namespace qpulse
