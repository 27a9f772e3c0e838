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

#include "qpulse/serialize.h"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace qpulse {

namespace {

template <typename T>
void read_if(const Json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

Json trace_json(const Trace& t) {
    Json a = Json::array();
    for (const auto& p : t) a.push_back({p.t, p.value});
    return a;
}

Trace trace_from_json(const Json& j) {
    Trace t;
    for (const auto& p : j) t.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return t;
}

}  // namespace

Json to_json(const TransmonParams& p) {
    return {{"n_levels", p.n_levels},
            {"delta_over_omega", p.delta_over_omega},
            {"alpha_over_omega", p.alpha_over_omega},
            {"omega", p.omega}};
}

TransmonParams params_from_json(const Json& j, TransmonParams p) {
    read_if(j, "n_levels", p.n_levels);
    read_if(j, "delta_over_omega", p.delta_over_omega);
    read_if(j, "alpha_over_omega", p.alpha_over_omega);
    read_if(j, "omega", p.omega);
    return p;
}

Json to_json(const ControlPulse& p) {
    return {{"total_time_over_tomega", p.total_time},
            {"bound", p.bound},
            {"d_r", p.d_r},
            {"d_i", p.d_i}};
}

ControlPulse pulse_from_json(const Json& j) {
    ControlPulse p;
    p.total_time = j.at("total_time_over_tomega").get<double>();
    read_if(j, "bound", p.bound);
    p.d_r = j.at("d_r").get<std::vector<double>>();
    p.d_i = j.at("d_i").get<std::vector<double>>();
    p.validate();
    return p;
}

Json to_json(const OptimizationConfig& c) {
    return {{"scheme", std::string(to_string(c.scheme))},
            {"epsilon_a", c.epsilon_a},
            {"n_segments", c.n_segments},
            {"bound", c.bound},
            {"substeps", c.substeps},
            {"max_iters_stage_a", c.max_iters_stage_a},
            {"max_iters_stage_b", c.max_iters_stage_b},
            {"gradient_step", c.gradient_step},
            {"tolerance", c.tolerance},
            {"gradient_tolerance", c.gradient_tolerance},
            {"seed", c.seed},
            {"perturbation", std::string(to_string(c.perturbation))}};
}

OptimizationConfig config_from_json(const Json& j, OptimizationConfig c) {
    if (j.contains("scheme")) c.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    read_if(j, "epsilon_a", c.epsilon_a);
    read_if(j, "n_segments", c.n_segments);
    read_if(j, "bound", c.bound);
    read_if(j, "substeps", c.substeps);
    read_if(j, "max_iters_stage_a", c.max_iters_stage_a);
    read_if(j, "max_iters_stage_b", c.max_iters_stage_b);
    read_if(j, "gradient_step", c.gradient_step);
    read_if(j, "tolerance", c.tolerance);
    read_if(j, "gradient_tolerance", c.gradient_tolerance);
    read_if(j, "seed", c.seed);
    if (j.contains("perturbation"))
        c.perturbation = perturbation_from_string(j.at("perturbation").get<std::string>());
    return c;
}

Json to_json(const CostReport& r) {
    return {{"j_u", r.j_u},
            {"j_r", r.j_r},
            {"j_l", r.j_l},
            {"f0_trace", trace_json(r.f0_trace)},
            {"l0_trace", trace_json(r.l0_trace)}};
}

Json to_json(const OptimizationOutcome& o) {
    return {{"scheme", std::string(to_string(o.scheme))},
            {"t_over_tomega", o.t_over_tomega},
            {"pulse", to_json(o.pulse)},
            {"cost", to_json(o.cost)},
            {"stage_a_iters", o.stage_a_iters},
            {"stage_b_iters", o.stage_b_iters},
            {"stage_a_final", o.stage_a_final},
            {"stage_b_final", o.stage_b_final},
            {"stage_a_status", std::string(opt::to_string(o.stage_a_status))},
            {"stage_b_status", std::string(opt::to_string(o.stage_b_status))},
            {"feasible", o.feasible},
            {"converged", o.converged},
            {"failed", o.failed},
            {"seed", o.seed},
            {"message", o.message}};
}

Json to_json(const DragParams& p) {
    return {{"total_time_over_tomega", p.total_time},
            {"sigma_over_tomega", p.sigma},
            {"area", p.area},
            {"alpha_over_omega", p.alpha_over_omega}};
}

DragParams drag_params_from_json(const Json& j, DragParams p) {
    read_if(j, "total_time_over_tomega", p.total_time);
    read_if(j, "sigma_over_tomega", p.sigma);
    read_if(j, "area", p.area);
    read_if(j, "alpha_over_omega", p.alpha_over_omega);
    return p;
}

void save_outcome(const std::filesystem::path& path, const TransmonParams& model,
                  const OptimizationConfig& config, const OptimizationOutcome& outcome) {
    write_json(path, {{"model", to_json(model)},
                      {"optimizer", to_json(config)},
                      {"outcome", to_json(outcome)}});
}

SavedOutcome load_outcome(const std::filesystem::path& path) {
    const Json j = read_json(path);
    SavedOutcome s;
    try {
        s.model = params_from_json(j.at("model"));
        s.config = config_from_json(j.value("optimizer", Json::object()));
        const Json& o = j.at("outcome");
        s.outcome.scheme = scheme_from_string(o.at("scheme").get<std::string>());
        s.outcome.t_over_tomega = o.at("t_over_tomega").get<double>();
        s.outcome.pulse = pulse_from_json(o.at("pulse"));
        const Json& c = o.at("cost");
        s.outcome.cost.j_u = c.at("j_u").get<double>();
        s.outcome.cost.j_r = c.at("j_r").get<double>();
        s.outcome.cost.j_l = c.at("j_l").get<double>();
        if (c.contains("f0_trace")) s.outcome.cost.f0_trace = trace_from_json(c.at("f0_trace"));
        if (c.contains("l0_trace")) s.outcome.cost.l0_trace = trace_from_json(c.at("l0_trace"));
        read_if(o, "stage_a_iters", s.outcome.stage_a_iters);
        read_if(o, "stage_b_iters", s.outcome.stage_b_iters);
        read_if(o, "stage_a_final", s.outcome.stage_a_final);
        read_if(o, "stage_b_final", s.outcome.stage_b_final);
        read_if(o, "feasible", s.outcome.feasible);
        read_if(o, "converged", s.outcome.converged);
        read_if(o, "failed", s.outcome.failed);
        read_if(o, "seed", s.outcome.seed);
        read_if(o, "message", s.outcome.message);
    } catch (const Json::exception& e) {
        throw ConfigurationError(path.string() + ": not a pulse outcome file (" + e.what() + ")");
    }
    return s;
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigurationError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::string format_number(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::runtime_error("format_number failed");
    return std::string(buf, end);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_)
        throw std::logic_error("CSV row has " + std::to_string(fields.size()) + " fields, header " +
                               std::to_string(columns_));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].find_first_of(",\"\n") != std::string::npos)
            throw std::logic_error("CSV field needs quoting: " + fields[i]);
        out_ << (i ? "," : "") << fields[i];
    }
    out_ << '\n';
    out_.flush();
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw std::out_of_range("CSV has no column " + name);
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
    const int c = column(name);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(std::stod(r.at(c)));
    return v;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string f;
        while (std::getline(ss, f, ',')) out.push_back(f);
        if (!s.empty() && s.back() == ',') out.emplace_back();
        return out;
    };
    if (std::getline(in, line)) t.header = split(line);
    while (std::getline(in, line))
        if (!line.empty()) t.rows.push_back(split(line));
    return t;
}

}  // namespace qpulse
