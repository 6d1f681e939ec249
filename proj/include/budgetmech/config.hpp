// Copyright 2026 The budgetmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "budgetmech/harness.hpp"
#include "budgetmech/model.hpp"
#include "budgetmech/oracle.hpp"
#include "json.hpp"

namespace budgetmech {

// Carries the path of the offending field, e.g. "instance.agents[1].budget.B".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Action { kRun, kAudit, kOracle, kCompare };

std::string to_string(Action action);
Action parse_action(const std::string& text);

struct OracleSpec {
  std::vector<IrMode> modes{IrMode::kEpir, IrMode::kIir};
  Objective objective = Objective::kRevenue;
  double budget_scale = 1.0;
  bool operator==(const OracleSpec&) const = default;
};

struct ExperimentConfig {
  std::string experiment_id;
  Action action = Action::kRun;
  std::uint64_t seed = 0;
  long long samples = 100000;
  int grid = 8;
  std::vector<Agent> agents;
  Feasibility feasibility;
  std::string mechanism;
  nlohmann::json mechanism_params = nlohmann::json::object();
  OracleSpec oracle;
  Metric metric = Metric::kRevenue;
  std::string output;

  Instance instance() const { return Instance(agents, feasibility); }
  bool operator==(const ExperimentConfig&) const = default;
};

const std::vector<std::string>& mechanism_names();

// Throws ConfigError (with the field path) on malformed input.
ExperimentConfig parse_config(const std::string& text);
nlohmann::json to_json(const ExperimentConfig& config);
std::string serialize_config(const ExperimentConfig& config);

nlohmann::json to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace budgetmech
