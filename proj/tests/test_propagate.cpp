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

#include "qpulse/optimizer.h"
#include "qpulse/propagate.h"

namespace qpulse {
namespace {

ControlPulse random_pulse(std::uint64_t seed, double t = 1.1, int m = 15) {
    return ControlPulse::from_parameters(random_guess(m, 1.0, seed), t);
}

TEST(Propagate, RecordLayout) {
    const TransmonModel model(TransmonParams{});
    const PropagationRecord r = propagate(model, random_pulse(1), 8);
    EXPECT_EQ(r.n_segments, 15);
    EXPECT_EQ(r.substeps, 8);
    ASSERT_EQ(r.times.size(), 15u * 8u + 1u);
    EXPECT_EQ(r.times.front(), 0.0);
    EXPECT_NEAR(r.total_time(), model.duration(1.1), 1e-13);
    EXPECT_EQ(r.boundaries().size(), 16u);
    EXPECT_EQ(max_abs(r.unitaries.front() - ComplexMatrix::Identity(6, 6)), 0.0);
}

TEST(Propagate, UnitarityAndComposition) {
    const TransmonModel model(TransmonParams{});
    const ControlPulse p = random_pulse(2);
    const PropagationRecord r = propagate(model, p, 4);
    const SegmentHamiltonian h = [&](int j) { return model.hamiltonian_at(p.d_r[j], p.d_i[j]); };
    const RecordDefects d = inspect(r, &h);
    EXPECT_TRUE(d.time_grid_ok);
    EXPECT_LT(d.unitarity, 1e-12);
    EXPECT_LT(d.determinant, 1e-12);
    EXPECT_LT(d.composition, 1e-12);
}

TEST(Propagate, SubstepsDoNotChangeFinalUnitary) {
    const TransmonModel model(TransmonParams{});
    const ControlPulse p = random_pulse(3);
    const ComplexMatrix a = propagate(model, p, 1).final_unitary();
    const ComplexMatrix b = propagate(model, p, 16).final_unitary();
    EXPECT_LT(max_abs(a - b), 1e-12);
    const SegmentHamiltonian h = [&](int j) { return model.hamiltonian_at(p.d_r[j], p.d_i[j]); };
    EXPECT_LT(max_abs(propagate_final(h, p.n_segments(), model.duration(p.total_time)) - a), 1e-12);
}

TEST(Propagate, ConstantPulseMatchesSingleExponential) {
    const TransmonModel model(TransmonParams{});
    ControlPulse p = ControlPulse::zeros(5, 0.9);
    for (int j = 0; j < 5; ++j) p.d_r[j] = 0.4, p.d_i[j] = -0.2;
    const ComplexMatrix u = propagate(model, p, 2).final_unitary();
    const ComplexMatrix e = expm_hermitian(model.hamiltonian_at(0.4, -0.2), model.duration(0.9)).matrix();
    EXPECT_LT(max_abs(u - e), 1e-12);
}

TEST(Propagate, ZeroPulseIsDiagonal) {
    const TransmonModel model(TransmonParams{});
    const ComplexMatrix u = propagate(model, ControlPulse::zeros(4, 1.0), 2).final_unitary();
    EXPECT_LT(max_abs(u - ComplexMatrix(u.diagonal().asDiagonal())), 1e-14);
}

TEST(Propagate, PerturbedWithZeroLambdaIsUnperturbed) {
    const TransmonModel model(TransmonParams{});
    const ControlPulse p = random_pulse(4);
    const ComplexMatrix a = propagate(model, p, 2).final_unitary();
    const ComplexMatrix b = propagate_perturbed(model, p, PerturbationKind::Quadrature, 0.0, 2).final_unitary();
    EXPECT_LT(max_abs(a - b), 1e-14);
    const ComplexMatrix c = propagate_perturbed(model, p, PerturbationKind::Quadrature, 0.05, 2).final_unitary();
    EXPECT_GT(max_abs(a - c), 1e-4);
}

TEST(Propagate, SampledConstantFieldsMatchPiecewise) {
    const TransmonModel model(TransmonParams{});
    const double t = model.duration(0.7);
    const PropagationRecord r = propagate_sampled(
        model, [](double) { return 0.3; }, [](double) { return 0.1; }, {}, t, 7, 2);
    ControlPulse p = ControlPulse::zeros(7, 0.7);
    for (int j = 0; j < 7; ++j) p.d_r[j] = 0.3, p.d_i[j] = 0.1;
    EXPECT_LT(max_abs(r.final_unitary() - propagate(model, p, 1).final_unitary()), 1e-12);
}

TEST(Propagate, RejectsBadGrid) {
    const TransmonModel model(TransmonParams{});
    const SegmentHamiltonian h = [&](int) { return model.hamiltonian_at(0, 0); };
    EXPECT_THROW(propagate_segments(h, 0, 1.0, 2), std::invalid_argument);
    EXPECT_THROW(propagate_segments(h, 2, -1.0, 2), std::invalid_argument);
    EXPECT_THROW(propagate_segments(h, 2, 1.0, 0), std::invalid_argument);
}

}  // namespace
}  // namespace qpulse
