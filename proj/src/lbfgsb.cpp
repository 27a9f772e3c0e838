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

#include "qpulse/lbfgsb.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace qpulse::opt {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

struct Pair {
    std::vector<double> s, y;
    double rho;
};

}  // namespace

void Bounds::clamp(std::span<double> x) const {
    for (size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

std::string to_string(Status s) {
    switch (s) {
        case Status::GradientTolerance: return "gradient_tolerance";
        case Status::CostTolerance: return "cost_tolerance";
        case Status::StepTolerance: return "step_tolerance";
        case Status::IterationLimit: return "iteration_limit";
        case Status::LineSearchFailed: return "line_search_failed";
        case Status::NonFinite: return "non_finite";
        case Status::Infeasible: return "infeasible";
    }
    return "unknown";
}

bool is_converged(Status s) {
    return s == Status::GradientTolerance || s == Status::CostTolerance ||
           s == Status::StepTolerance;
}

BoxResult minimize_box(const Objective& objective, std::vector<double> x0, const Bounds& bounds,
                       const BoxOptions& options) {
    const size_t n = x0.size();
    if (bounds.lower.size() != n || bounds.upper.size() != n)
        throw std::invalid_argument("minimize_box: bounds do not match x0");

    BoxResult r;
    r.x = std::move(x0);
    bounds.clamp(r.x);
    std::vector<double> g(n), gt(n), xt(n), d(n), pg(n), q(n);
    r.f = objective(r.x, g);
    r.evaluations = 1;
    if (!std::isfinite(r.f) || !all_finite(g)) {
        r.status = Status::NonFinite;
        return r;
    }
    r.history.push_back(r.f);

    std::deque<Pair> memory;
    auto binding = [&](size_t i) {
        return (r.x[i] <= bounds.lower[i] && g[i] > 0.0) ||
               (r.x[i] >= bounds.upper[i] && g[i] < 0.0);
    };

    for (r.iterations = 0; r.iterations < options.max_iterations;) {
        for (size_t i = 0; i < n; ++i) pg[i] = binding(i) ? 0.0 : g[i];
        if (inf_norm(pg) <= options.gtol) {
            r.status = Status::GradientTolerance;
            return r;
        }

        // two-loop recursion on the free variables
        q = pg;
        std::vector<double> alpha(memory.size());
        for (size_t k = memory.size(); k-- > 0;) {
            alpha[k] = memory[k].rho * dot(memory[k].s, q);
            for (size_t i = 0; i < n; ++i) q[i] -= alpha[k] * memory[k].y[i];
        }
        if (!memory.empty()) {
            const Pair& last = memory.back();
            const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
            for (double& v : q) v *= gamma;
        }
        for (size_t k = 0; k < memory.size(); ++k) {
            const double beta = memory[k].rho * dot(memory[k].y, q);
            for (size_t i = 0; i < n; ++i) q[i] += (alpha[k] - beta) * memory[k].s[i];
        }
        for (size_t i = 0; i < n; ++i) d[i] = binding(i) ? 0.0 : -q[i];
        if (dot(d, g) >= 0.0) {
            memory.clear();
            for (size_t i = 0; i < n; ++i) d[i] = -pg[i];
        }

        double step = memory.empty() ? std::min(1.0, 1.0 / inf_norm(d)) : 1.0;
        bool accepted = false;
        double ft = 0.0;
        for (int bt = 0; bt < options.max_backtracks; ++bt, step *= 0.5) {
            for (size_t i = 0; i < n; ++i) xt[i] = r.x[i] + step * d[i];
            bounds.clamp(xt);
            ft = objective(xt, gt);
            ++r.evaluations;
            if (!std::isfinite(ft) || !all_finite(gt)) continue;
            double decrease = 0.0;
            for (size_t i = 0; i < n; ++i) decrease += g[i] * (xt[i] - r.x[i]);
            if (ft <= r.f + 1e-4 * decrease) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (!memory.empty()) {
                memory.clear();  // retry once along steepest descent
                continue;
            }
            r.status = std::isfinite(ft) ? Status::LineSearchFailed : Status::NonFinite;
            return r;
        }
        ++r.iterations;

        Pair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
        for (size_t i = 0; i < n; ++i) {
            pair.s[i] = xt[i] - r.x[i];
            pair.y[i] = gt[i] - g[i];
        }
        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-12 * std::sqrt(dot(pair.s, pair.s) * dot(pair.y, pair.y)) && sy > 0.0) {
            pair.rho = 1.0 / sy;
            memory.push_back(std::move(pair));
            if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
        }

        const double previous = r.f;
        r.x = xt;
        r.f = ft;
        g = gt;
        r.history.push_back(ft);
        if ((previous - ft) / std::max({std::abs(previous), std::abs(ft), 1.0}) <= options.ftol) {
            r.status = Status::CostTolerance;
            return r;
        }
    }
    r.status = Status::IterationLimit;
    return r;
}

}  // namespace qpulse::opt
