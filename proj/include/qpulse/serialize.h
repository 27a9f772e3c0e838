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
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpulse/costfn.h"
#include "qpulse/drag.h"
#include "qpulse/optimizer.h"
#include "qpulse/transmon.h"

namespace qpulse {

using Json = nlohmann::json;

Json to_json(const TransmonParams& p);
Json to_json(const ControlPulse& p);
Json to_json(const OptimizationConfig& c);
Json to_json(const CostReport& r);
Json to_json(const OptimizationOutcome& o);
Json to_json(const DragParams& p);

/// Readers accept partial objects; missing keys keep the defaults of `base`.
TransmonParams params_from_json(const Json& j, TransmonParams base = {});
ControlPulse pulse_from_json(const Json& j);
OptimizationConfig config_from_json(const Json& j, OptimizationConfig base = {});
DragParams drag_params_from_json(const Json& j, DragParams base = {});

/// An optimization result together with the model it was computed on.
struct SavedOutcome {
    TransmonParams model;
    OptimizationConfig config;
    OptimizationOutcome outcome;
};

void save_outcome(const std::filesystem::path& path, const TransmonParams& model,
                  const OptimizationConfig& config, const OptimizationOutcome& outcome);
SavedOutcome load_outcome(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

/// Round-trip exact decimal form of a double.
std::string format_number(double x);

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);
    std::size_t columns() const { return columns_; }

  private:
    std::ofstream out_;
    std::size_t columns_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // throws if absent
    std::vector<double> numbers(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace qpulse
