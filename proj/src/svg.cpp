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

#include "qpulse/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qpulse {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 150, kTop = 40, kBottom = 55;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, bool log) {
    char buf[32];
    if (log) std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
    else std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Axis {
    double lo, hi;
    bool log;

    double map(double v) const { return (transform(v) - lo) / (hi - lo); }
    double transform(double v) const { return log ? std::log10(v) : v; }
    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis make_axis(const std::vector<Series>& series, bool use_x, bool log) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series) {
        const auto& v = use_x ? s.x : s.y;
        for (double d : v) {
            if (!std::isfinite(d) || (log && d <= 0.0)) continue;
            const double t = log ? std::log10(d) : d;
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (log) {
        lo = std::floor(lo);
        hi = std::ceil(hi);
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    return {lo, hi, log};
}

std::vector<double> ticks(const Axis& a) {
    std::vector<double> t;
    if (a.log) {
        const int step = std::max(1, static_cast<int>(std::ceil((a.hi - a.lo) / 8)));
        for (double v = a.lo; v <= a.hi + 1e-9; v += step) t.push_back(v);
        return t;
    }
    const double raw = (a.hi - a.lo) / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * step; v += step)
        t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

}  // namespace

std::string render_chart(const ChartStyle& style, const std::vector<Series>& series) {
    for (const auto& s : series)
        if (s.x.size() != s.y.size()) throw std::invalid_argument("series x/y length mismatch");
    const Axis ax = make_axis(series, true, style.log_x);
    const Axis ay = make_axis(series, false, style.log_y);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + ax.map(v) * pw; };
    auto py = [&](double v) { return kTop + (1.0 - ay.map(v)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(style.title) << "</text>\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ticks(ax)) {
        const double x = kLeft + (t - ax.lo) / (ax.hi - ax.lo) * pw;
        o << "<line x1=\"" << num(x) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(x)
          << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>";
        o << "<text x=\"" << num(x) << "\" y=\"" << kTop + ph + 18
          << "\" text-anchor=\"middle\">" << tick_label(t, ax.log) << "</text>\n";
    }
    for (double t : ticks(ay)) {
        const double y = kTop + (1.0 - (t - ay.lo) / (ay.hi - ay.lo)) * ph;
        o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft
          << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>";
        o << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft + pw
          << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\"/>";
        o << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
          << tick_label(t, ay.log) << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << escape(style.x_label) << "</text>\n";
    o << "<text transform=\"translate(18," << kTop + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(style.y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        if (style.scatter) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
                o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                  << "\" r=\"3\" fill=\"" << colour << "\" fill-opacity=\"0.7\"/>\n";
            }
        } else {
            std::string path;
            bool pen_down = false;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) {
                    pen_down = false;
                    continue;
                }
                path += (pen_down ? " L" : " M") + num(px(s.x[i])) + "," + num(py(s.y[i]));
                pen_down = true;
            }
            if (!path.empty())
                o << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << colour
                  << "\" stroke-width=\"1.5\"/>\n";
        }
        const double ly = kTop + 12 + 18 * static_cast<double>(k);
        o << "<rect x=\"" << kLeft + pw + 12 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
          << colour << "\"/><text x=\"" << kLeft + pw + 28 << "\" y=\"" << ly << "\">"
          << escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_chart(const std::filesystem::path& path, const ChartStyle& style,
                 const std::vector<Series>& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << render_chart(style, series);
}

}  // namespace qpulse
