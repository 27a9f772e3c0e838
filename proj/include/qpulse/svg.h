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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qpulse {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartStyle {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    bool scatter = false;  // markers only
    bool log_x = false;
};

/// Standalone SVG document. Non-finite points, and non-positive ones on a log
/// axis, are skipped.
std::string render_chart(const ChartStyle& style, const std::vector<Series>& series);

void write_chart(const std::filesystem::path& path, const ChartStyle& style,
                 const std::vector<Series>& series);

}  // namespace qpulse
