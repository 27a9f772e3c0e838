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

#include "qpulse/drag.h"

namespace qpulse {
namespace {

TEST(DragFields, AreaIsPiAcrossWidths) {
    for (double ratio : {0.1, 0.2, 0.284, 0.35, 0.5}) {
        DragParams p;
        p.sigma = ratio * p.total_time;
        const DragFields f = drag_fields(p);
        EXPECT_NEAR(drag_area(f), std::numbers::pi, 1e-6) << ratio;
    }
}

TEST(DragFields, ShapeProperties) {
    const DragParams p;
    const DragFields f = drag_fields(p);
    const double t = f.total_time;
    EXPECT_NEAR(f.d_r(0.0), 0.0, 1e-14);
    EXPECT_NEAR(f.d_r(t), 0.0, 1e-14);
    EXPECT_NEAR(f.d_i(0.5 * t), 0.0, 1e-14);
    EXPECT_NEAR(f.d_r(0.3 * t), f.d_r(0.7 * t), 1e-12);
    EXPECT_NEAR(f.d_i(0.3 * t), -f.d_i(0.7 * t), 1e-12);
    for (int k = 0; k <= 50; ++k) {
        const double s = t * k / 50.0;
        EXPECT_GE(f.d_r(s), 0.0);
        // alpha < 0 and 1 - sqrt2 < 0 make the detuning non-negative
        EXPECT_GE(f.delta(s), 0.0);
    }
}

TEST(DragFields, QuadratureIsScaledDerivative) {
    const DragParams p;
    const DragFields f = drag_fields(p);
    const double alpha = p.alpha_over_omega;
    for (double s : {0.1, 0.3, 0.6}) {
        const double t = s * f.total_time, h = 1e-5;
        const double deriv = (f.d_r(t + h) - f.d_r(t - h)) / (2 * h);
        EXPECT_NEAR(f.d_i(t), deriv / (std::numbers::sqrt2 * alpha), 1e-8);
    }
}

TEST(DragFields, InvalidParameters) {
    DragParams p;
    p.sigma = 0.0;
    EXPECT_THROW(drag_fields(p), std::invalid_argument);
    p = {};
    p.alpha_over_omega = 0.0;
    EXPECT_THROW(drag_fields(p), std::invalid_argument);
    p = {};
    p.sigma = 1e-4;  // the Gaussian is entirely inside the window: fine
    EXPECT_NO_THROW(drag_fields(p));
    p.sigma = 1e7;   // so wide that subtracting the edge cancels everything
    EXPECT_THROW(drag_fields(p), std::invalid_argument);
}

TEST(DragSimulation, ReachesTargetAtElevenLevels) {
    const TransmonModel model(TransmonParams{11, -0.5, -2.0, 1.0});
    const DragSimulation sim = simulate_drag(model, DragParams{});
    EXPECT_EQ(sim.n_levels, 11);
    EXPECT_LE(sim.step_halving_defect, kStepHalvingTolerance);
    EXPECT_LE(sim.report.j_u, 1e-2);
    EXPECT_GT(sim.report.j_r, 0.0);
    EXPECT_FALSE(sim.report.f0_trace.empty());
}

TEST(DragSimulation, CoarseSamplingIsRejected) {
    const TransmonModel model(TransmonParams{4, -0.5, -2.0, 1.0});
    try {
        simulate_drag(model, DragParams{}, PerturbationKind::Number, 50);
        FAIL() << "expected the step-halving check to fire";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("n_steps"), std::string::npos);
    }
}

TEST(DragSimulation, LargerAnharmonicityLeaksLess) {
    const TransmonModel weak(TransmonParams{6, -0.5, -2.0, 1.0});
    const TransmonModel strong(TransmonParams{6, -0.5, -10.0, 1.0});
    const double l_weak = simulate_drag(weak, DragParams{}).report.j_l;
    const double l_strong = simulate_drag(strong, DragParams{}).report.j_l;
    EXPECT_LT(l_strong, l_weak);
}

TEST(DragSimulation, FinalUnitaryMatchesRecord) {
    const TransmonModel model(TransmonParams{5, -0.5, -2.0, 1.0});
    const DragSimulation sim = simulate_drag(model, DragParams{});
    const ComplexMatrix u = drag_final_unitary(model, DragParams{}, nullptr, 0.0);
    EXPECT_LT(max_abs(u - sim.record.final_unitary()), 1e-12);
    const ComplexMatrix v = model.number();
    const ComplexMatrix shifted = drag_final_unitary(model, DragParams{}, &v, 1e-3);
    EXPECT_GT(max_abs(shifted - u), 1e-6);
}

}  // namespace
}  // namespace qpulse
