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

#include <string>
#include <vector>

#include "budgetmech/lp.hpp"
#include "budgetmech/model.hpp"

namespace budgetmech {

enum class IrMode { kEpir, kIir };
enum class Objective { kRevenue, kWelfare };

std::string to_string(IrMode mode);
std::string to_string(Objective objective);

inline constexpr std::size_t kMaxOracleProfiles = 10000;

struct OracleResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  double max_residual = 0.0;
  // Feasible sets in lexicographic order; sets[0] is the empty set.
  std::vector<AgentSet> sets;
  std::vector<TypeProfile> profiles;
  std::vector<double> profile_prob;
  // allocation[t][s]: probability of sets[s] at profile t (sums to 1).
  std::vector<std::vector<double>> allocation;
  // payments[t][i]: expected payment of agent i at profile t.
  std::vector<std::vector<double>> payments;
};

// Optimal BIC mechanism over a fully discrete instance, by LP over
// (profile, winner set) allocation variables and per-(profile, agent)
// expected payments. Budgets are multiplied by budget_scale.
//
// EPIR: each agent's payment at a profile is at most min(v, scaled budget)
// times the allocation probability there, i.e. only winners pay and never
// above value or budget. IIR: interim payment at most the scaled budget and
// interim utility nonnegative.
//
// Misreports are constrained only toward budgets no larger than the true
// one; with private budgets that makes the value an upper bound.
//
// Throws std::invalid_argument for non-discrete instances or more than
// kMaxOracleProfiles profiles.
OracleResult optimal_bic(const Instance& instance, IrMode mode, Objective objective, double budget_scale = 1.0);

}  // namespace budgetmech
