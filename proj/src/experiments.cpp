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

#include "qpulse/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qpulse/propagate.h"
#include "qpulse/svg.h"

namespace qpulse {

namespace fs = std::filesystem;

std::vector<double> LambdaGrid::values() const {
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i)
        v[i] = points == 1 ? min : min + (max - min) * i / (points - 1);
    return v;
}

void ExperimentSpec::validate() const {
    auto fail = [](const std::string& m) { throw ConfigurationError(m); };
    if (name.empty()) fail("spec name must not be empty");
    if (model.n_levels < 3) fail("model.n_levels must be >= 3");
    if (verification_n_levels < 3) fail("verification_n_levels must be >= 3");
    optimizer.validate();
    if (schemes.empty()) fail("schemes must not be empty");
    if (perturbations.empty()) fail("perturbations must not be empty");
    if (times.empty()) fail("grids.times must not be empty");
    for (double t : times)
        if (!(t > 0.0)) fail("grids.times must be positive");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] < times[i - 1])) fail("grids.times must be strictly descending");
    if (alphas.empty()) fail("grids.alphas must not be empty");
    for (double a : alphas)
        if (a == 0.0 || !std::isfinite(a)) fail("grids.alphas must be non-zero");
    if (lambdas.points < 1 || !(lambdas.max >= lambdas.min)) fail("grids.lambdas is empty");
    if (scatter_times.empty() || scatter_alphas.empty() || scatter_schemes.empty())
        fail("scatter grids must not be empty");
    if (n_seeds < 1) fail("n_seeds must be >= 1");
    if (n_starts < 1) fail("n_starts must be >= 1");
    if (!(t_over_tomega > 0.0) || !(target_only_time > 0.0)) fail("gate times must be positive");
    if (drag_steps < 1) fail("drag.n_steps must be >= 1");
    drag.validate();
    if (output_dir.empty()) fail("output_dir must not be empty");
}

std::uint64_t ExperimentSpec::require_seed(const std::string& command) const {
    if (!seed) throw ConfigurationError(command + " is stochastic: --seed (or \"seed\" in the config) is required");
    return *seed;
}

namespace {

template <typename T>
void read_if(const Json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

std::vector<Scheme> schemes_from(const Json& j) {
    std::vector<Scheme> out;
    for (const auto& s : j) out.push_back(scheme_from_string(s.get<std::string>()));
    return out;
}

Json schemes_json(const std::vector<Scheme>& v) {
    Json a = Json::array();
    for (Scheme s : v) a.push_back(std::string(to_string(s)));
    return a;
}

}  // namespace

ExperimentSpec spec_from_json(const Json& j, ExperimentSpec s) {
    try {
        read_if(j, "name", s.name);
        if (j.contains("model")) s.model = params_from_json(j.at("model"), s.model);
        if (j.contains("optimizer")) s.optimizer = config_from_json(j.at("optimizer"), s.optimizer);
        if (j.contains("schemes")) s.schemes = schemes_from(j.at("schemes"));
        if (j.contains("scatter_schemes")) s.scatter_schemes = schemes_from(j.at("scatter_schemes"));
        if (j.contains("perturbations")) {
            s.perturbations.clear();
            for (const auto& v : j.at("perturbations"))
                s.perturbations.push_back(perturbation_from_string(v.get<std::string>()));
        }
        if (j.contains("grids")) {
            const Json& g = j.at("grids");
            read_if(g, "times", s.times);
            read_if(g, "alphas", s.alphas);
            read_if(g, "scatter_times", s.scatter_times);
            read_if(g, "scatter_alphas", s.scatter_alphas);
            if (g.contains("lambdas")) {
                const Json& l = g.at("lambdas");
                read_if(l, "min", s.lambdas.min);
                read_if(l, "max", s.lambdas.max);
                read_if(l, "points", s.lambdas.points);
            }
        }
        if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
        read_if(j, "n_seeds", s.n_seeds);
        read_if(j, "n_starts", s.n_starts);
        read_if(j, "t_over_tomega", s.t_over_tomega);
        read_if(j, "target_only_time", s.target_only_time);
        read_if(j, "verification_n_levels", s.verification_n_levels);
        read_if(j, "workers", s.workers);
        if (j.contains("output_dir")) s.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("drag")) {
            const Json& d = j.at("drag");
            s.drag = drag_params_from_json(d, s.drag);
            read_if(d, "n_steps", s.drag_steps);
            read_if(d, "times", s.drag_times);
            read_if(d, "sigmas", s.drag_sigmas);
        }
        if (j.contains("pulses"))
            for (const auto& [k, v] : j.at("pulses").items()) s.pulses[k] = v.get<std::string>();
        read_if(j, "optimize_missing", s.optimize_missing);
    } catch (const Json::exception& e) {
        throw ConfigurationError(std::string("invalid experiment config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigurationError(std::string("invalid experiment config: ") + e.what());
    }
    return s;
}

Json to_json(const ExperimentSpec& s) {
    Json perts = Json::array();
    for (auto k : s.perturbations) perts.push_back(std::string(to_string(k)));
    Json drag = to_json(s.drag);
    drag["n_steps"] = s.drag_steps;
    drag["times"] = s.drag_times;
    drag["sigmas"] = s.drag_sigmas;
    Json pulses = Json::object();
    for (const auto& [k, v] : s.pulses) pulses[k] = v.string();
    Json j = {{"name", s.name},
              {"model", to_json(s.model)},
              {"optimizer", to_json(s.optimizer)},
              {"schemes", schemes_json(s.schemes)},
              {"scatter_schemes", schemes_json(s.scatter_schemes)},
              {"perturbations", perts},
              {"grids",
               {{"times", s.times},
                {"alphas", s.alphas},
                {"scatter_times", s.scatter_times},
                {"scatter_alphas", s.scatter_alphas},
                {"lambdas",
                 {{"min", s.lambdas.min}, {"max", s.lambdas.max}, {"points", s.lambdas.points}}}}},
              {"n_seeds", s.n_seeds},
              {"n_starts", s.n_starts},
              {"t_over_tomega", s.t_over_tomega},
              {"target_only_time", s.target_only_time},
              {"verification_n_levels", s.verification_n_levels},
              {"workers", s.workers},
              {"output_dir", s.output_dir.string()},
              {"drag", drag},
              {"pulses", pulses},
              {"optimize_missing", s.optimize_missing}};
    if (s.seed) j["seed"] = *s.seed;
    return j;
}

fs::path make_run_directory(const ExperimentSpec& spec, const std::string& experiment) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
    const fs::path base = spec.output_dir / experiment;
    fs::path dir = base / stamp;
    for (int k = 1; fs::exists(dir); ++k) dir = base / (std::string(stamp) + "-" + std::to_string(k));
    std::error_code ec;
    fs::create_directories(dir / "charts", ec);
    if (ec) throw ConfigurationError("output_dir not writable: " + dir.string() + " (" + ec.message() + ")");
    write_json(dir / "spec.json", to_json(spec));
    return dir;
}

namespace {

const std::vector<std::string> kMetaHeader{"n_levels", "alpha_over_omega", "delta_over_omega",
                                           "n_segments"};

std::vector<std::string> meta(const TransmonParams& p, int n_segments) {
    return {std::to_string(p.n_levels), format_number(p.alpha_over_omega),
            format_number(p.delta_over_omega), std::to_string(n_segments)};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::string vname(PerturbationKind k) { return std::string(to_string(k)); }

double to_tomega(const TransmonModel& m, double t_abs) { return t_abs / m.duration(1.0); }

std::string file_key(std::string key) {
    std::replace(key.begin(), key.end(), ':', '_');
    std::replace(key.begin(), key.end(), '/', '_');
    return key;
}

OptimizationConfig config_for(const ExperimentSpec& spec, Scheme scheme, PerturbationKind kind,
                              std::uint64_t seed) {
    OptimizationConfig c = spec.optimizer;
    c.scheme = scheme;
    c.perturbation = kind;
    c.seed = seed;
    return c;
}

void tally(const OptimizationOutcome& o, RunResult& r, const std::string& what) {
    if (o.failed) {
        ++r.failures;
        r.messages.push_back(what + ": failed: " + o.message);
    } else if (!o.feasible) {
        ++r.infeasible;
        r.messages.push_back(what + ": infeasible (J_A above epsilon)");
    }
}

/// Pulse for `key`: a saved outcome named in the spec, or a fresh best-of-seeds
/// optimization when the spec allows it.
ControlPulse obtain_pulse(const ExperimentSpec& spec, const std::vector<std::string>& keys,
                          Scheme scheme, PerturbationKind kind, double t_over_tomega,
                          const fs::path& dir, RunResult& result) {
    for (const auto& key : keys) {
        auto it = spec.pulses.find(key);
        if (it == spec.pulses.end()) continue;
        const SavedOutcome saved = load_outcome(it->second);
        if (saved.model.alpha_over_omega != spec.model.alpha_over_omega ||
            saved.model.delta_over_omega != spec.model.delta_over_omega)
            result.messages.push_back("pulse '" + key + "' was optimized for a different model");
        return saved.outcome.pulse;
    }
    if (!spec.optimize_missing) {
        std::ostringstream m;
        m << "missing pulse '" << keys.front() << "': run `qpulse optimize --scheme "
          << to_string(scheme) << " --perturbation " << to_string(kind) << " --time "
          << t_over_tomega << " --seed <s>` and list its outcome.json under pulses.\""
          << keys.front() << "\" (or set optimize_missing)";
        throw ConfigurationError(m.str());
    }
    const TransmonModel model(spec.model);
    const OptimizationConfig c = config_for(spec, scheme, kind, spec.require_seed("optimize"));
    const OptimizationOutcome o = best_of_seeds(model, c, t_over_tomega, spec.n_seeds, spec.workers);
    tally(o, result, keys.front());
    fs::create_directories(dir / "pulses");
    save_outcome(dir / "pulses" / (file_key(keys.front()) + ".json"), spec.model, c, o);
    return o.pulse;
}

TransmonParams with_levels(TransmonParams p, int n) {
    p.n_levels = n;
    return p;
}

/// Target infidelity of a fixed pulse, or of DRAG when `pulse` is null, on a
/// lambda_tilde grid.
std::vector<double> lambda_scan(const TransmonModel& model, const ControlPulse* pulse,
                                const ExperimentSpec& spec, PerturbationKind kind,
                                const std::vector<double>& lambda_tilde) {
    const ComplexMatrix v = model.perturbation(kind);
    const double scale = model.rescale_factor(kind);
    const ComplexMatrix target = model.embed(pauli_x_gate());
    std::vector<double> out(lambda_tilde.size());
    parallel_for(static_cast<int>(lambda_tilde.size()), spec.workers, [&](int i) {
        const double lambda = lambda_tilde[i] * scale;
        if (pulse) {
            out[i] = target_infidelity(model, *pulse, v, lambda);
        } else {
            const ComplexMatrix u = drag_final_unitary(model, spec.drag, &v, lambda, spec.drag_steps);
            out[i] = 1.0 - subspace_fidelity(target, u, model.projector(), model.subspace_dim());
        }
    });
    return out;
}

// ---- charts -------------------------------------------------------------

std::vector<Series> group_series(const CsvTable& t, const std::vector<std::string>& keys,
                                 const std::string& x, const std::string& y) {
    std::map<std::string, Series> by;
    std::vector<std::string> order;
    const int cx = t.column(x), cy = t.column(y);
    std::vector<int> ck;
    for (const auto& k : keys) ck.push_back(t.column(k));
    for (const auto& r : t.rows) {
        std::string label;
        for (std::size_t i = 0; i < ck.size(); ++i) label += (i ? " " : "") + keys[i] + "=" + r[ck[i]];
        auto [it, fresh] = by.try_emplace(label);
        if (fresh) {
            it->second.label = label;
            order.push_back(label);
        }
        it->second.x.push_back(std::stod(r[cx]));
        it->second.y.push_back(std::stod(r[cy]));
    }
    std::vector<Series> out;
    for (const auto& l : order) out.push_back(by[l]);
    return out;
}

CsvTable filter(const CsvTable& t, const std::string& column, const std::string& value) {
    CsvTable out{t.header, {}};
    const int c = t.column(column);
    for (const auto& r : t.rows)
        if (r[c] == value) out.rows.push_back(r);
    return out;
}

std::vector<std::string> distinct(const CsvTable& t, const std::string& column) {
    std::vector<std::string> out;
    const int c = t.column(column);
    for (const auto& r : t.rows)
        if (std::find(out.begin(), out.end(), r[c]) == out.end()) out.push_back(r[c]);
    return out;
}

}  // namespace

void render_charts(const fs::path& dir, const std::string& experiment) {
    const fs::path charts = dir / "charts";
    fs::create_directories(charts);
    if (experiment == "sweep-time" || experiment == "sweep-alpha") {
        const CsvTable t = read_csv(dir / "data.csv");
        std::vector<std::string> keys{"scheme", "V"};
        if (experiment == "sweep-alpha") keys.push_back("alpha_over_omega");
        write_chart(charts / "j_u.svg", {"Target cost", "T / T_Omega", "J_U", true},
                    group_series(t, keys, "T_over_Tomega", "j_u"));
        write_chart(charts / "j_r.svg", {"Robustness cost", "T / T_Omega", "J_R", true},
                    group_series(t, keys, "T_over_Tomega", "j_r"));
    } else if (experiment == "scan-perturbation") {
        const CsvTable t = read_csv(dir / "data.csv");
        for (const auto& v : distinct(t, "V"))
            write_chart(charts / ("infidelity_" + v + ".svg"),
                        {"Target infidelity, V = " + v, "lambda_tilde", "1 - F", true},
                        group_series(filter(t, "V", v), {"protocol"}, "lambda_tilde", "infidelity"));
    } else if (experiment == "traces") {
        const CsvTable t = read_csv(dir / "data.csv");
        write_chart(charts / "f0.svg", {"Target fidelity", "t / T_Omega", "f0"},
                    group_series(t, {"protocol"}, "t_over_Tomega", "f0"));
        write_chart(charts / "l0.svg", {"Leakage", "t / T_Omega", "l0"},
                    group_series(t, {"protocol"}, "t_over_Tomega", "l0"));
        const CsvTable s = read_csv(dir / "lambda_scan.csv");
        write_chart(charts / "lambda_scan.svg", {"Final-time infidelity", "lambda_tilde", "1 - F", true},
                    group_series(s, {"protocol"}, "lambda_tilde", "infidelity"));
    } else if (experiment == "tradeoff") {
        const CsvTable t = read_csv(dir / "data.csv");
        for (const auto& time : distinct(t, "T_over_Tomega")) {
            const CsvTable tt = filter(t, "T_over_Tomega", time);
            for (const auto& a : distinct(tt, "alpha_over_omega")) {
                ChartStyle style{"T/T_Omega = " + time + ", alpha/Omega = " + a, "J_R", "J_L", true, true, true};
                write_chart(charts / ("scatter_T" + time + "_a" + a + ".svg"), style,
                            group_series(filter(tt, "alpha_over_omega", a), {"scheme"}, "j_r", "j_l"));
            }
        }
    } else if (experiment == "drag") {
        const CsvTable f = read_csv(dir / "fields.csv");
        std::vector<Series> s;
        for (const char* c : {"d_r", "d_i", "delta"}) s.push_back({c, f.numbers("t"), f.numbers(c)});
        write_chart(charts / "fields.svg", {"DRAG fields", "t / T_Omega", "amplitude"}, s);
    } else if (experiment == "optimize") {
        const CsvTable t = read_csv(dir / "data.csv");
        write_chart(charts / "traces.svg", {"Dynamics", "t / T_Omega", "value"},
                    {{"f0", t.numbers("t_over_Tomega"), t.numbers("f0")},
                     {"l0", t.numbers("t_over_Tomega"), t.numbers("l0")}});
    }
}

RunResult run_optimize(const ExperimentSpec& spec) {
    spec.validate();
    const std::uint64_t seed = spec.require_seed("optimize");
    RunResult r;
    r.directory = make_run_directory(spec, "optimize");
    const TransmonModel model(spec.model);
    const OptimizationConfig c =
        config_for(spec, spec.optimizer.scheme, spec.optimizer.perturbation, seed);
    const OptimizationOutcome o = best_of_seeds(model, c, spec.t_over_tomega, spec.n_seeds, spec.workers);
    tally(o, r, std::string(to_string(c.scheme)));
    save_outcome(r.directory / "outcome.json", spec.model, c, o);

    CsvWriter csv(r.directory / "data.csv",
                  concat({"t_over_Tomega", "f0", "l0", "seed"}, kMetaHeader));
    for (std::size_t i = 0; i < o.cost.f0_trace.size(); ++i) {
        csv.row(concat({format_number(to_tomega(model, o.cost.f0_trace[i].t)),
                        format_number(o.cost.f0_trace[i].value),
                        format_number(o.cost.l0_trace[i].value), std::to_string(o.seed)},
                       meta(spec.model, c.n_segments)));
        ++r.rows;
    }
    render_charts(r.directory, "optimize");
    return r;
}

namespace {

RunResult sweep(const ExperimentSpec& spec, const std::vector<double>& alphas,
                const std::string& experiment) {
    spec.validate();
    const std::uint64_t seed = spec.require_seed(experiment);
    RunResult r;
    r.directory = make_run_directory(spec, experiment);
    fs::create_directories(r.directory / "pulses");
    CsvWriter csv(r.directory / "data.csv",
                  concat({"T_over_Tomega", "scheme", "V", "j_u", "j_r", "seed", "j_l", "converged",
                          "feasible", "failed", "epsilon_a"},
                         kMetaHeader));
    const auto& kinds = spec.perturbations;
    for (double alpha : alphas) {
        TransmonParams p = spec.model;
        p.alpha_over_omega = alpha;
        const TransmonModel model(p);
        // outcomes[scheme][V][time]
        std::vector<std::vector<std::vector<OptimizationOutcome>>> out(spec.schemes.size());
        for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
            const Scheme scheme = spec.schemes[s];
            const bool uses_v = stage_a_terms(scheme) & kRobustTerm || stage_b_terms(scheme) & kRobustTerm;
            out[s].resize(kinds.size());
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                if (!uses_v && k > 0) {
                    // Same optimization; only J_R changes with V.
                    out[s][k] = out[s][0];
                    for (auto& o : out[s][k])
                        o.cost = evaluate_pulse(model, o.pulse, kinds[k], spec.optimizer.substeps, false);
                    continue;
                }
                const OptimizationConfig c = config_for(spec, scheme, kinds[k], seed);
                out[s][k] = time_sweep(model, c, spec.times, spec.n_seeds, spec.workers);
            }
        }
        for (std::size_t i = 0; i < spec.times.size(); ++i)
            for (std::size_t s = 0; s < spec.schemes.size(); ++s)
                for (std::size_t k = 0; k < kinds.size(); ++k) {
                    const OptimizationOutcome& o = out[s][k][i];
                    const std::string what = std::string(to_string(o.scheme)) + "/" + vname(kinds[k]) +
                                             " T=" + format_number(spec.times[i]) +
                                             " alpha=" + format_number(alpha);
                    tally(o, r, what);
                    csv.row(concat({format_number(spec.times[i]), std::string(to_string(o.scheme)),
                                    vname(kinds[k]), format_number(o.cost.j_u),
                                    format_number(o.cost.j_r), std::to_string(o.seed),
                                    format_number(o.cost.j_l), flag(o.converged), flag(o.feasible),
                                    flag(o.failed), format_number(spec.optimizer.epsilon_a)},
                                   meta(p, spec.optimizer.n_segments)));
                    ++r.rows;
                    save_outcome(r.directory / "pulses" /
                                     (std::string(to_string(o.scheme)) + "_" + vname(kinds[k]) + "_a" +
                                      format_number(alpha) + "_T" + format_number(spec.times[i]) + ".json"),
                                 p, config_for(spec, o.scheme, kinds[k], o.seed), o);
                }
    }
    render_charts(r.directory, experiment);
    return r;
}

}  // namespace

RunResult run_time_sweep(const ExperimentSpec& spec) {
    for (Scheme s : spec.schemes)
        if (s != Scheme::T && s != Scheme::TR)
            throw ConfigurationError("sweep-time supports schemes T and TR");
    return sweep(spec, {spec.model.alpha_over_omega}, "sweep-time");
}

RunResult run_alpha_sweep(const ExperimentSpec& spec) {
    for (Scheme s : spec.schemes)
        if (s != Scheme::T && s != Scheme::TR)
            throw ConfigurationError("sweep-alpha supports schemes T and TR");
    return sweep(spec, spec.alphas, "sweep-alpha");
}

RunResult run_perturbation_scan(const ExperimentSpec& spec) {
    spec.validate();
    RunResult r;
    r.directory = make_run_directory(spec, "scan-perturbation");
    const TransmonModel model(with_levels(spec.model, spec.verification_n_levels));
    const std::vector<double> grid = spec.lambdas.values();
    CsvWriter csv(r.directory / "data.csv",
                  concat({"lambda_tilde", "protocol", "V", "infidelity", "t_over_Tomega"}, kMetaHeader));

    const ControlPulse t_pulse = obtain_pulse(spec, {"T"}, Scheme::T, PerturbationKind::Number,
                                              spec.target_only_time, r.directory, r);
    for (PerturbationKind kind : spec.perturbations) {
        const ControlPulse tr_pulse = obtain_pulse(spec, {"TR:" + vname(kind), "TR"}, Scheme::TR,
                                                   kind, spec.t_over_tomega, r.directory, r);
        struct Protocol {
            std::string name;
            const ControlPulse* pulse;
            double time;
            int segments;
        };
        const Protocol protocols[] = {
            {"T", &t_pulse, t_pulse.total_time, t_pulse.n_segments()},
            {"TR", &tr_pulse, tr_pulse.total_time, tr_pulse.n_segments()},
            {"DRAG", nullptr, spec.drag.total_time, spec.drag_steps},
        };
        for (const auto& pr : protocols) {
            const std::vector<double> inf = lambda_scan(model, pr.pulse, spec, kind, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                csv.row(concat({format_number(grid[i]), pr.name, vname(kind), format_number(inf[i]),
                                format_number(pr.time)},
                               meta(model.params(), pr.segments)));
                ++r.rows;
            }
        }
    }
    render_charts(r.directory, "scan-perturbation");
    return r;
}

RunResult run_dynamics_traces(const ExperimentSpec& spec) {
    spec.validate();
    RunResult r;
    r.directory = make_run_directory(spec, "traces");
    const TransmonModel model(with_levels(spec.model, spec.verification_n_levels));
    const PerturbationKind kind = spec.perturbations.front();
    const ComplexMatrix target = pauli_x_gate();

    std::vector<std::pair<std::string, ControlPulse>> pulses;
    for (Scheme s : {Scheme::T, Scheme::TR, Scheme::TL}) {
        const std::string name(to_string(s));
        pulses.emplace_back(name, obtain_pulse(spec, {name}, s, kind, spec.t_over_tomega, r.directory, r));
    }

    CsvWriter csv(r.directory / "data.csv",
                  concat({"t_over_Tomega", "protocol", "f0", "l0"}, kMetaHeader));
    auto emit = [&](const std::string& name, const CostReport& rep, int segments) {
        for (std::size_t i = 0; i < rep.f0_trace.size(); ++i) {
            csv.row(concat({format_number(to_tomega(model, rep.f0_trace[i].t)), name,
                            format_number(rep.f0_trace[i].value), format_number(rep.l0_trace[i].value)},
                           meta(model.params(), segments)));
            ++r.rows;
        }
    };
    for (const auto& [name, pulse] : pulses) {
        const PropagationRecord rec = propagate(model, pulse, spec.optimizer.substeps);
        CostReport rep;
        std::tie(rep.f0_trace, rep.l0_trace) =
            dynamical_traces(rec, target, model.projector(), model.subspace_dim());
        emit(name, rep, pulse.n_segments());
    }
    DragParams dp = spec.drag;
    dp.total_time = spec.t_over_tomega;
    const DragSimulation drag = simulate_drag(model, dp, kind, spec.drag_steps);
    emit("DRAG", drag.report, spec.drag_steps);

    const std::vector<double> grid = spec.lambdas.values();
    CsvWriter scan(r.directory / "lambda_scan.csv",
                   concat({"lambda_tilde", "protocol", "V", "infidelity"}, kMetaHeader));
    for (const auto& [name, pulse] : pulses) {
        const std::vector<double> inf = lambda_scan(model, &pulse, spec, kind, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            scan.row(concat({format_number(grid[i]), name, vname(kind), format_number(inf[i])},
                            meta(model.params(), pulse.n_segments())));
    }
    ExperimentSpec drag_spec = spec;
    drag_spec.drag = dp;
    const std::vector<double> inf = lambda_scan(model, nullptr, drag_spec, kind, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        scan.row(concat({format_number(grid[i]), "DRAG", vname(kind), format_number(inf[i])},
                        meta(model.params(), spec.drag_steps)));
    render_charts(r.directory, "traces");
    return r;
}

RunResult run_tradeoff_scatter(const ExperimentSpec& spec) {
    spec.validate();
    const std::uint64_t seed = spec.require_seed("tradeoff");
    RunResult r;
    r.directory = make_run_directory(spec, "tradeoff");
    CsvWriter csv(r.directory / "data.csv",
                  concat({"scheme", "seed", "j_u", "j_r", "j_l", "converged", "failed",
                          "T_over_Tomega", "V", "epsilon_a"},
                         kMetaHeader));
    CsvWriter summary(r.directory / "summary.csv",
                      {"T_over_Tomega", "alpha_over_omega", "scheme", "n", "n_converged",
                       "median_j_u", "median_j_r", "median_j_l"});
    auto median = [](std::vector<double> v) {
        if (v.empty()) return std::nan("");
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    const PerturbationKind kind = spec.perturbations.front();
    for (double t : spec.scatter_times)
        for (double alpha : spec.scatter_alphas) {
            TransmonParams p = spec.model;
            p.alpha_over_omega = alpha;
            const TransmonModel model(p);
            const OptimizationConfig c = config_for(spec, spec.scatter_schemes.front(), kind, seed);
            const std::vector<ScatterRow> rows =
                multistart_scatter(model, spec.scatter_schemes, spec.n_starts, t, c, spec.workers);
            for (const auto& row : rows) {
                if (row.failed) ++r.failures;
                csv.row(concat({std::string(to_string(row.scheme)), std::to_string(row.seed),
                                format_number(row.j_u), format_number(row.j_r), format_number(row.j_l),
                                flag(row.converged), flag(row.failed), format_number(t), vname(kind),
                                format_number(spec.optimizer.epsilon_a)},
                               meta(p, spec.optimizer.n_segments)));
                ++r.rows;
            }
            for (Scheme s : spec.scatter_schemes) {
                std::vector<double> ju, jr, jl;
                int n = 0, conv = 0;
                for (const auto& row : rows) {
                    if (row.scheme != s) continue;
                    ++n;
                    if (!row.converged) continue;
                    ++conv;
                    ju.push_back(row.j_u);
                    jr.push_back(row.j_r);
                    jl.push_back(row.j_l);
                }
                summary.row({format_number(t), format_number(alpha), std::string(to_string(s)),
                             std::to_string(n), std::to_string(conv), format_number(median(ju)),
                             format_number(median(jr)), format_number(median(jl))});
            }
        }
    render_charts(r.directory, "tradeoff");
    return r;
}

RunResult run_drag(const ExperimentSpec& spec) {
    spec.validate();
    RunResult r;
    r.directory = make_run_directory(spec, "drag");
    const TransmonModel model(with_levels(spec.model, spec.verification_n_levels));
    const PerturbationKind kind = spec.perturbations.front();
    const std::vector<double> times =
        spec.drag_times.empty() ? std::vector<double>{spec.drag.total_time} : spec.drag_times;
    const std::vector<double> sigmas =
        spec.drag_sigmas.empty() ? std::vector<double>{spec.drag.sigma} : spec.drag_sigmas;

    CsvWriter csv(r.directory / "data.csv",
                  {"T_over_Tomega", "sigma_over_Tomega", "j_u", "j_r", "j_l", "max_l0", "area",
                   "step_halving_defect", "V", "n_levels", "alpha_over_omega", "n_steps"});
    for (double t : times)
        for (double sigma : sigmas) {
            DragParams dp = spec.drag;
            dp.total_time = t;
            dp.sigma = sigma;
            dp.alpha_over_omega = model.params().alpha_over_omega;
            try {
                const DragSimulation sim = simulate_drag(model, dp, kind, spec.drag_steps);
                double max_l0 = 0.0;
                for (const auto& pt : sim.report.l0_trace) max_l0 = std::max(max_l0, pt.value);
                const double area = drag_area(drag_fields(dp, model.omega()), model.omega());
                csv.row({format_number(t), format_number(sigma), format_number(sim.report.j_u),
                         format_number(sim.report.j_r), format_number(sim.report.j_l),
                         format_number(max_l0), format_number(area),
                         format_number(sim.step_halving_defect), vname(kind),
                         std::to_string(model.dim()), format_number(dp.alpha_over_omega),
                         std::to_string(spec.drag_steps)});
                ++r.rows;
            } catch (const std::exception& e) {
                ++r.failures;
                r.messages.push_back("DRAG T=" + format_number(t) + " sigma=" + format_number(sigma) +
                                     ": " + e.what());
            }
        }

    DragParams dp = spec.drag;
    dp.alpha_over_omega = model.params().alpha_over_omega;
    const DragFields f = drag_fields(dp, model.omega());
    CsvWriter fields(r.directory / "fields.csv", {"t", "d_r", "d_i", "delta"});
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double t = f.total_time * i / n;
        fields.row({format_number(to_tomega(model, t)), format_number(f.d_r(t)),
                    format_number(f.d_i(t)), format_number(f.delta(t))});
    }
    render_charts(r.directory, "drag");
    return r;
}

std::vector<OracleReport> validation_checks(const ValidationOptions& options) {
    const SusceptibilityFn susc = options.susceptibility
                                      ? options.susceptibility
                                      : SusceptibilityFn([](const AveragedPerturbation& v,
                                                            const ComplexMatrix& p, int d, double t) {
                                            return susceptibility(v, p, d, t);
                                        });
    std::vector<OracleReport> out;
    const TransmonModel model(TransmonParams{});
    const int n = model.dim();
    const ComplexMatrix full = ComplexMatrix::Identity(n, n);

    // Closed form against finite differences of F_lambda. With P = 1 the final
    // unitary is trivially block diagonal, as the closed form requires.
    int k = 0;
    for (double t : {0.8, 1.4}) {
        const ControlPulse pulse =
            ControlPulse::from_parameters(random_guess(15, 1.0, options.seed + k), t, 1.0);
        const PropagationRecord rec = propagate(model, pulse);
        const double t_abs = model.duration(t);
        for (auto kind : {PerturbationKind::Number, PerturbationKind::Quadrature,
                          PerturbationKind::NumberSquared}) {
            const ComplexMatrix v = model.perturbation(kind);
            const double closed = susc(averaged_perturbation(rec, v), full, n, t_abs);
            const SecondDerivative fd =
                fd_susceptibility(model, pulse, v, default_fd_steps(t_abs, v), &full, n);
            OracleReport rep = compare("susceptibility_fd/" + vname(kind) + "/T" + format_number(t),
                                       closed, fd.value, 1e-8, 1e-4);
            if (fd.noisy) rep.note = "finite-difference estimate flagged noisy";
            out.push_back(rep);
        }
        ++k;
    }

    {
        AveragedPerturbation id{ComplexMatrix::Identity(n, n) * 0.7};
        out.push_back(compare("susceptibility_identity", susc(id, model.projector(), 2, 5.0), 0.0,
                              1e-10, 0.0));
    }

    {
        const ComplexMatrix x = random_unitary(n, options.seed + 101);
        const ComplexMatrix y = random_unitary(n, options.seed + 102);
        const MonteCarloAverage mc =
            mc_state_average(y, x, model.projector(), options.mc_samples, options.seed + 103);
        out.push_back(compare("mc_fidelity_random_pair", subspace_fidelity(x, y, model.projector(), 2),
                              mc.fidelity, 3.0 * mc.fidelity_stderr, 0.0));
        out.push_back(compare("mc_leakage_random", leakage(y, model.projector(), 2), mc.leakage,
                              3.0 * mc.leakage_stderr, 0.0));
        ComplexMatrix swap = ComplexMatrix::Identity(n, n);
        swap(1, 1) = swap(2, 2) = 0.0;
        swap(1, 2) = swap(2, 1) = 1.0;
        const MonteCarloAverage ms =
            mc_state_average(swap, swap, model.projector(), options.mc_samples, options.seed + 104);
        out.push_back(compare("mc_leakage_swap12", leakage(swap, model.projector(), 2), ms.leakage,
                              3.0 * ms.leakage_stderr, 0.0));
    }

    {
        const ThreeLevelPopulation p = three_level_pi_pulse(-1000.0);
        out.push_back(compare("three_level_asymptotic/a-1000", p.full, p.asymptotic, 0.0, 1e-5));
        const ThreeLevelPopulation a5 = three_level_pi_pulse(-5.0);
        const ThreeLevelPopulation a20 = three_level_pi_pulse(-20.0);
        const double ratio = std::abs(a5.full - a5.asymptotic) / std::abs(a20.full - a20.asymptotic);
        OracleReport rep = compare("three_level_gap_decay/a-5_a-20", ratio, 10.0, 0.0, 0.0);
        rep.passed = ratio >= 10.0;
        rep.note = "passes when the gap ratio is at least 10";
        out.push_back(rep);
    }

    {
        const DragParams dp;
        const DragFields f = drag_fields(dp);
        out.push_back(compare("drag_area", drag_area(f), dp.area, 1e-6, 0.0));
        out.push_back(compare("drag_endpoints", std::abs(f.d_r(0.0)) + std::abs(f.d_r(f.total_time)),
                              0.0, 0.0, 0.0));
    }
    return out;
}

RunResult run_validation(const ExperimentSpec& spec, const ValidationOptions& options) {
    spec.validate();
    RunResult r;
    r.directory = make_run_directory(spec, "validate");
    std::ofstream log(r.directory / "validation.jsonl");
    for (const OracleReport& rep : validation_checks(options)) {
        write_jsonl(log, rep);
        ++r.rows;
        if (!rep.passed) {
            ++r.failures;
            r.messages.push_back(rep.name + ": primary " + format_number(rep.primary_value) +
                                 " oracle " + format_number(rep.oracle_value) + " abs_err " +
                                 format_number(rep.abs_err) + " (tol_abs " + format_number(rep.tol_abs) +
                                 ", tol_rel " + format_number(rep.tol_rel) + ")");
        }
    }
    return r;
}

}  // namespace qpulse
