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
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "budgetmech/config.hpp"
#include "budgetmech/model.hpp"
#include "json.hpp"

namespace budgetmech {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitAuditFailure = 2;

struct ResultRow {
  std::string experiment_id;
  std::string mechanism;
  std::string metric;
  double value = 0.0;
  double ci_halfwidth = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  int exit_code = kExitOk;
  std::vector<ResultRow> rows;
  nlohmann::json detail;
};

// Builds the named mechanism on the instance. Throws std::invalid_argument
// when the mechanism does not apply (for example private budgets given to a
// public-budget mechanism) or its parameters are malformed.
std::shared_ptr<Mechanism> make_mechanism(const std::string& name, const nlohmann::json& params,
                                          const Instance& instance, int grid);

ExperimentResult run_experiment(const ExperimentConfig& config);

std::string format_csv(const std::vector<ResultRow>& rows);

// Writes <dir>/<experiment_id>.csv and <dir>/<experiment_id>.json.
void write_results(const ExperimentResult& result, const ExperimentConfig& config, const std::filesystem::path& dir);

}  // namespace budgetmech
