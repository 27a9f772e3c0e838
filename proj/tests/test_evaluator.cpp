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

#include "qpulse/costfn.h"
#include "qpulse/evaluator.h"
#include "qpulse/optimizer.h"

namespace qpulse {
namespace {

const TransmonModel& model6() {
    static const TransmonModel m(TransmonParams{});
    return m;
}

TEST(Evaluator, MatchesCostModule) {
    const double t = 1.3;
    const std::vector<double> x = random_guess(15, 1.0, 4);
    const PulseCostEvaluator ev(model6(), t, 15, PerturbationKind::Quadrature);
    const CostTerms c = ev.evaluate(x);
    const CostReport r = evaluate_pulse(model6(), ControlPulse::from_parameters(x, t),
                                        PerturbationKind::Quadrature, 8, false);
    EXPECT_NEAR(c.j_u, r.j_u, 1e-12);
    EXPECT_NEAR(c.j_r, r.j_r, 1e-10 * std::max(1.0, std::abs(r.j_r)));
    EXPECT_NEAR(c.j_l, r.j_l, 1e-12);
}

TEST(Evaluator, GradientMatchesNaiveFiniteDifferences) {
    const double t = 0.9;
    const int m = 6;
    const std::vector<double> x = random_guess(m, 0.8, 5);
    const PulseCostEvaluator ev(model6(), t, m, PerturbationKind::Number);
    std::vector<CostTerms> g;
    const CostTerms c = ev.evaluate_with_gradient(x, g);
    const CostTerms direct = ev.evaluate(x);
    EXPECT_NEAR(c.j_u, direct.j_u, 1e-13);
    ASSERT_EQ(g.size(), x.size());
    const double h = 1e-6;
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        auto cost = [&](const std::vector<double>& y) {
            return evaluate_pulse(model6(), ControlPulse::from_parameters(y, t),
                                  PerturbationKind::Number, 8, false);
        };
        const CostReport a = cost(xp), b = cost(xm);
        EXPECT_NEAR(g[i].j_u, (a.j_u - b.j_u) / (2 * h), 1e-6) << i;
        EXPECT_NEAR(g[i].j_r, (a.j_r - b.j_r) / (2 * h), 1e-6 * std::max(1.0, std::abs(g[i].j_r))) << i;
        EXPECT_NEAR(g[i].j_l, (a.j_l - b.j_l) / (2 * h), 1e-6) << i;
    }
}

TEST(Evaluator, GradientIsStepRobust) {
    const std::vector<double> x = random_guess(15, 1.0, 6);
    PulseCostEvaluator::Options o1, o2;
    o2.fd_step = 2e-6;
    const PulseCostEvaluator a(model6(), 1.0, 15, PerturbationKind::Number, o1);
    const PulseCostEvaluator b(model6(), 1.0, 15, PerturbationKind::Number, o2);
    std::vector<CostTerms> ga, gb;
    a.evaluate_with_gradient(x, ga, kTargetTerm);
    b.evaluate_with_gradient(x, gb, kTargetTerm);
    double dot_a = 0, dot_b = 0;
    std::vector<double> dir = random_guess(15, 1.0, 99);
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot_a += dir[i] * ga[i].j_u;
        dot_b += dir[i] * gb[i].j_u;
    }
    EXPECT_NEAR(dot_a, dot_b, 1e-5 * std::abs(dot_a));
}

TEST(Evaluator, OnlyRequestedTermsAreComputed) {
    const std::vector<double> x = random_guess(15, 1.0, 7);
    const PulseCostEvaluator ev(model6(), 1.0, 15, PerturbationKind::Number);
    const CostTerms c = ev.evaluate(x, kTargetTerm);
    EXPECT_GT(c.j_u, 0.0);
    EXPECT_EQ(c.j_r, 0.0);
    EXPECT_EQ(c.j_l, 0.0);
}

TEST(Evaluator, RejectsWrongLength) {
    const PulseCostEvaluator ev(model6(), 1.0, 15, PerturbationKind::Number);
    EXPECT_THROW(ev.evaluate(std::vector<double>(10, 0.0)), std::invalid_argument);
}

}  // namespace
}  // namespace qpulse
