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

#include <atomic>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "qpulse/experiments.h"
#include "qpulse/svg.h"

namespace qpulse {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& tag) {
    static std::atomic<int> counter{0};
    const fs::path p = fs::temp_directory_path() /
                       ("qpulse_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ExperimentSpec small_spec(const fs::path& out) {
    ExperimentSpec s;
    s.model.n_levels = 4;
    s.optimizer.n_segments = 6;
    s.verification_n_levels = 4;
    s.n_seeds = 1;
    s.n_starts = 1;
    s.workers = 1;
    s.seed = 7;
    s.output_dir = out;
    return s;
}

TEST(Spec, JsonRoundTrip) {
    ExperimentSpec s;
    s.name = "demo";
    s.seed = 42;
    s.times = {1.0, 0.5};
    s.scatter_schemes = {Scheme::TL};
    s.perturbations = {PerturbationKind::Quadrature, PerturbationKind::NumberSquared};
    s.lambdas.points = 5;
    s.drag.sigma = 0.3;
    s.drag_steps = 123;
    s.pulses["TR:n"] = "a/b.json";
    const ExperimentSpec r = spec_from_json(to_json(s));
    EXPECT_EQ(to_json(r), to_json(s));
    EXPECT_EQ(r.seed, 42u);
    EXPECT_EQ(r.drag_steps, 123);
    EXPECT_EQ(r.pulses.at("TR:n"), fs::path("a/b.json"));
}

TEST(Spec, PartialJsonKeepsDefaults) {
    const ExperimentSpec r = spec_from_json(Json::parse(R"({"grids": {"alphas": [-3]}})"));
    EXPECT_EQ(r.alphas, std::vector<double>{-3.0});
    EXPECT_EQ(r.times, ExperimentSpec{}.times);
    EXPECT_FALSE(r.seed.has_value());
}

TEST(Spec, InvalidInputsAreConfigurationErrors) {
    EXPECT_THROW(spec_from_json(Json::parse(R"({"schemes": ["XY"]})")), ConfigurationError);
    EXPECT_THROW(spec_from_json(Json::parse(R"({"n_seeds": "many"})")), ConfigurationError);
    ExperimentSpec s;
    s.times = {0.5, 1.0};
    EXPECT_THROW(s.validate(), ConfigurationError);
    s = {};
    s.alphas = {0.0};
    EXPECT_THROW(s.validate(), ConfigurationError);
    s = {};
    s.model.n_levels = 2;
    EXPECT_THROW(s.validate(), ConfigurationError);
    s = {};
    EXPECT_THROW(s.require_seed("tradeoff"), ConfigurationError);
}

TEST(LambdaGrid, Values) {
    const auto v = LambdaGrid{}.values();
    ASSERT_EQ(v.size(), 41u);
    EXPECT_DOUBLE_EQ(v.front(), -0.15);
    EXPECT_DOUBLE_EQ(v.back(), 0.15);
    EXPECT_NEAR(v[20], 0.0, 1e-15);
    EXPECT_EQ((LambdaGrid{0.1, 0.1, 1}.values()), std::vector<double>{0.1});
}

TEST(Csv, WriteAndRead) {
    const fs::path dir = scratch("csv");
    {
        CsvWriter w(dir / "t.csv", {"a", "b", "name"});
        w.row({format_number(0.1), format_number(-2.5e-300), "x"});
        w.row({format_number(1.0 / 3.0), "nan", "y"});
        EXPECT_THROW(w.row({"1"}), std::logic_error);
    }
    const CsvTable t = read_csv(dir / "t.csv");
    ASSERT_EQ(t.rows.size(), 2u);
    const auto a = t.numbers("a");
    EXPECT_EQ(a[0], 0.1);
    EXPECT_EQ(a[1], 1.0 / 3.0);
    EXPECT_EQ(t.numbers("b")[0], -2.5e-300);
    EXPECT_TRUE(std::isnan(t.numbers("b")[1]));
    EXPECT_EQ(t.rows[1][t.column("name")], "y");
    EXPECT_THROW(t.column("missing"), std::exception);
    fs::remove_all(dir);
}

TEST(Svg, RendersSeriesAndSkipsBadPoints) {
    ChartStyle style{"title <&>", "x", "y", true, false, false};
    const std::string svg =
        render_chart(style, {{"s1", {1, 2, 3}, {1e-3, -1.0, std::nan("")}}, {"s2", {1, 2}, {1, 2}}});
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("s2"), std::string::npos);
    EXPECT_EQ(svg.find("title <&>"), std::string::npos);  // escaped
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Outcome, SaveAndLoad) {
    const fs::path dir = scratch("outcome");
    const TransmonModel model(TransmonParams{4, -0.5, -2.0, 1.0});
    OptimizationConfig c;
    c.n_segments = 4;
    c.scheme = Scheme::TL;
    c.seed = 9;
    OptimizationOutcome o;
    o.scheme = Scheme::TL;
    o.t_over_tomega = 1.3;
    o.pulse = ControlPulse::from_parameters(random_guess(4, 1.0, 1), 1.3);
    o.cost = evaluate_pulse(model, o.pulse, PerturbationKind::Number);
    o.seed = 9;
    save_outcome(dir / "o.json", model.params(), c, o);
    const SavedOutcome s = load_outcome(dir / "o.json");
    EXPECT_EQ(s.model.n_levels, 4);
    EXPECT_EQ(s.config.scheme, Scheme::TL);
    EXPECT_EQ(s.outcome.pulse.parameters(), o.pulse.parameters());
    EXPECT_EQ(s.outcome.cost.j_u, o.cost.j_u);
    EXPECT_THROW(load_outcome(dir / "absent.json"), ConfigurationError);
    fs::remove_all(dir);
}

TEST(Experiments, MissingPulseNamesTheCommand) {
    const fs::path dir = scratch("missing");
    ExperimentSpec s = small_spec(dir);
    try {
        run_perturbation_scan(s);
        FAIL() << "expected ConfigurationError";
    } catch (const ConfigurationError& e) {
        EXPECT_NE(std::string(e.what()).find("qpulse optimize"), std::string::npos);
    }
    fs::remove_all(dir);
}

TEST(Experiments, ScatterRowsAndReproducibility) {
    const fs::path dir = scratch("scatter");
    const ExperimentSpec s = small_spec(dir);
    const RunResult a = run_tradeoff_scatter(s);
    const RunResult b = run_tradeoff_scatter(s);
    EXPECT_EQ(a.rows, 4);
    EXPECT_NE(a.directory, b.directory);
    const CsvTable ta = read_csv(a.directory / "data.csv");
    const CsvTable tb = read_csv(b.directory / "data.csv");
    ASSERT_EQ(ta.rows.size(), 4u);
    EXPECT_EQ(ta.rows, tb.rows);
    EXPECT_TRUE(fs::exists(a.directory / "summary.csv"));
    EXPECT_TRUE(fs::exists(a.directory / "spec.json"));
    EXPECT_FALSE(fs::is_empty(a.directory / "charts"));
    fs::remove_all(dir);
}

TEST(Experiments, StochasticRunsNeedSeed) {
    const fs::path dir = scratch("seed");
    ExperimentSpec s = small_spec(dir);
    s.seed.reset();
    EXPECT_THROW(run_tradeoff_scatter(s), ConfigurationError);
    fs::remove_all(dir);
}

TEST(Validation, AllChecksPass) {
    ValidationOptions o;
    o.mc_samples = 20000;
    const auto reports = validation_checks(o);
    ASSERT_FALSE(reports.empty());
    for (const auto& r : reports) EXPECT_TRUE(r.passed) << r.name << " " << r.note;
}

TEST(Validation, FlippedSignIsCaught) {
    ValidationOptions o;
    o.mc_samples = 20000;
    o.susceptibility = [](const AveragedPerturbation& v, const ComplexMatrix& p, int d, double t) {
        return -susceptibility(v, p, d, t);
    };
    int failed = 0;
    for (const auto& r : validation_checks(o)) failed += r.passed ? 0 : 1;
    EXPECT_GT(failed, 0);
}

}  // namespace
}  // namespace qpulse
