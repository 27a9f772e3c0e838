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

namespace qpulse {
namespace {

const TransmonModel& small_model() {
    static const TransmonModel m(TransmonParams{4, -0.5, -2.0, 1.0});
    return m;
}

OptimizationConfig small_config(Scheme s) {
    OptimizationConfig c;
    c.scheme = s;
    c.n_segments = 8;
    c.seed = 3;
    return c;
}

TEST(Schemes, ParseAndPrint) {
    for (Scheme s : {Scheme::T, Scheme::TR, Scheme::TL, Scheme::TRL})
        EXPECT_EQ(scheme_from_string(to_string(s)), s);
    EXPECT_EQ(scheme_from_string("T-R"), Scheme::TR);
    EXPECT_EQ(scheme_from_string("TR-L"), Scheme::TRL);
    EXPECT_THROW(scheme_from_string("RL"), std::invalid_argument);
}

TEST(Schemes, StageCosts) {
    const CostTerms c{1.0, 2.0, 4.0};
    EXPECT_EQ(stage_a_cost(Scheme::T, c), 1.0);
    EXPECT_EQ(stage_a_cost(Scheme::TR, c), 1.0);
    EXPECT_EQ(stage_b_cost(Scheme::TR, c), 2.0);
    EXPECT_EQ(stage_b_cost(Scheme::TL, c), 4.0);
    EXPECT_EQ(stage_a_cost(Scheme::TRL, c), 3.0);
    EXPECT_EQ(stage_b_cost(Scheme::TRL, c), 4.0);
    EXPECT_FALSE(has_stage_b(Scheme::T));
    EXPECT_TRUE(has_stage_b(Scheme::TRL));
}

TEST(Config, Validation) {
    OptimizationConfig c;
    EXPECT_NO_THROW(c.validate());
    c.epsilon_a = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.bound = -1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.n_segments = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(RandomGuess, WithinBoundsAndSeeded) {
    const auto a = random_guess(15, 0.7, 11);
    const auto b = random_guess(15, 0.7, 11);
    const auto c = random_guess(15, 0.7, 12);
    ASSERT_EQ(a.size(), 30u);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    for (double v : a) EXPECT_LE(std::abs(v), 0.7);
}

TEST(Optimize, TargetOnlyReachesHighFidelity) {
    const OptimizationConfig c = small_config(Scheme::T);
    const OptimizationOutcome o =
        optimize(small_model(), c, 1.3, random_guess(c.n_segments, c.bound, c.seed));
    EXPECT_FALSE(o.failed) << o.message;
    EXPECT_LT(o.cost.j_u, 1e-6);
    for (double v : o.pulse.parameters()) EXPECT_LE(std::abs(v), c.bound);
}

TEST(Optimize, Deterministic) {
    const OptimizationConfig c = small_config(Scheme::TR);
    const auto guess = random_guess(c.n_segments, c.bound, c.seed);
    const OptimizationOutcome a = optimize(small_model(), c, 1.3, guess);
    const OptimizationOutcome b = optimize(small_model(), c, 1.3, guess);
    EXPECT_EQ(a.pulse.parameters(), b.pulse.parameters());
    EXPECT_EQ(a.cost.j_r, b.cost.j_r);
    EXPECT_EQ(a.stage_b_iters, b.stage_b_iters);
}

TEST(Optimize, ConstrainedStageHonoursEpsilon) {
    for (Scheme s : {Scheme::TR, Scheme::TL}) {
        const OptimizationConfig c = small_config(s);
        const OptimizationOutcome o =
            optimize(small_model(), c, 1.3, random_guess(c.n_segments, c.bound, c.seed));
        ASSERT_FALSE(o.failed) << o.message;
        EXPECT_TRUE(o.feasible) << to_string(s);
        EXPECT_LE(o.cost.j_u, c.epsilon_a) << to_string(s);
    }
}

TEST(Optimize, FixedPointOfStageA) {
    OptimizationConfig c = small_config(Scheme::T);
    const StageResult first =
        stage_a(small_model(), c, 1.3, random_guess(c.n_segments, c.bound, c.seed));
    const StageResult again = stage_a(small_model(), c, 1.3, first.x);
    EXPECT_LE(again.iterations, 2);
    EXPECT_NEAR(again.cost, first.cost, 1e-10);
}

TEST(Optimize, LooseEpsilonStillFeasible) {
    // eps = 1 makes every pulse feasible, so stage B is a pure leakage
    // minimisation over the box.
    OptimizationConfig c = small_config(Scheme::TL);
    c.epsilon_a = 1.0;
    const OptimizationOutcome o =
        optimize(small_model(), c, 1.3, random_guess(c.n_segments, c.bound, c.seed));
    ASSERT_FALSE(o.failed) << o.message;
    EXPECT_TRUE(o.feasible);
    EXPECT_LT(o.cost.j_l, 1e-3);
}

TEST(Optimize, WrongGuessLengthIsReported) {
    const OptimizationConfig c = small_config(Scheme::T);
    const OptimizationOutcome o = optimize(small_model(), c, 1.3, std::vector<double>(3, 0.0));
    EXPECT_TRUE(o.failed);
    EXPECT_FALSE(o.message.empty());
}

TEST(Better, Ordering) {
    OptimizationOutcome a, b;
    a.scheme = b.scheme = Scheme::TR;
    a.stage_b_final = 1.0;
    b.stage_b_final = 2.0;
    EXPECT_TRUE(better(a, b));
    a.feasible = false;
    EXPECT_TRUE(better(b, a));
    b.failed = true;
    EXPECT_TRUE(better(a, b));
}

TEST(TimeSweep, RejectsUnsortedTimes) {
    const OptimizationConfig c = small_config(Scheme::T);
    const std::vector<double> times{1.0, 1.2};
    EXPECT_THROW(time_sweep(small_model(), c, times, 1), std::invalid_argument);
}

TEST(TimeSweep, WarmStartsDescend) {
    const OptimizationConfig c = small_config(Scheme::T);
    const std::vector<double> times{1.3, 1.0};
    const auto out = time_sweep(small_model(), c, times, 2, 1);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_DOUBLE_EQ(out[0].t_over_tomega, 1.3);
    EXPECT_DOUBLE_EQ(out[1].t_over_tomega, 1.0);
    EXPECT_EQ(out[1].seed, out[0].seed);
}

TEST(Multistart, WorkerCountDoesNotChangeRows) {
    const OptimizationConfig c = small_config(Scheme::T);
    const std::vector<Scheme> schemes{Scheme::T, Scheme::TL};
    const auto serial = multistart_scatter(small_model(), schemes, 2, 1.3, c, 1);
    const auto threaded = multistart_scatter(small_model(), schemes, 2, 1.3, c, 2);
    ASSERT_EQ(serial.size(), 4u);
    ASSERT_EQ(threaded.size(), 4u);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].scheme, threaded[i].scheme);
        EXPECT_EQ(serial[i].seed, threaded[i].seed);
        EXPECT_EQ(serial[i].parameters, threaded[i].parameters);
    }
    EXPECT_EQ(serial[0].scheme, Scheme::T);
    EXPECT_EQ(serial[1].scheme, Scheme::TL);
}

TEST(ParallelFor, PropagatesExceptions) {
    EXPECT_THROW(parallel_for(4, 2, [](int i) {
                     if (i == 2) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}

}  // namespace
}  // namespace qpulse
