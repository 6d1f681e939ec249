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

#include <memory>
#include <string>
#include <vector>

#include "budgetmech/lp.hpp"
#include "budgetmech/model.hpp"

namespace budgetmech {

struct SingleAgentSolution {
  std::shared_ptr<MenuMechanism> mechanism;
  double revenue = 0.0;
  LpStatus status = LpStatus::kInfeasible;
  // The discretized law the LP was solved on, with the per-type allocation
  // probability and expected payment.
  Distribution grid = Distribution::atom(0.0);
  std::vector<double> q;
  std::vector<double> p;
};

// Revenue-optimal single-agent mechanism with a public budget, by LP over
// per-type (q, p) with IC constraints and p <= q * min(v, B).
// Continuous laws are discretized to grid_size atoms first. The menu holds
// the distinct (q, p/q) pairs with q > 0.
SingleAgentSolution optimal_single_agent(const Distribution& d, double budget, int grid_size);

// Myerson on values capped at the public budgets: maximize total ironed
// virtual value of min(v_i, B_i) under cap_at(F_i, B_i), agents with negative
// ironed virtual value excluded, ties to the lexicographically smallest set.
// Winners pay the smallest capped report at which they still win.
class CappedMyerson : public Mechanism {
 public:
  // Throws std::invalid_argument unless every budget is public.
  explicit CappedMyerson(Instance instance, bool cap = true, std::string name = "");

  std::string name() const override { return name_; }
  BudgetMode budget_mode() const override { return BudgetMode::kPublic; }
  const Instance& instance() const override { return instance_; }
  Outcome run(const TypeProfile& reported, Rng& rng) const override;
  ExpectedOutcome expected(const TypeProfile& reported) const override;
  bool is_analytic() const override { return true; }

  Outcome allocate(const TypeProfile& reported) const;
  double ironed(int i, double capped_report) const;

 private:
  bool wins(int i, double capped_report, const std::vector<double>& weights) const;

  Instance instance_;
  bool cap_;
  std::string name_;
  std::vector<double> caps_;
  std::vector<RevenueCurve> curves_;
  std::vector<AgentSet> sets_;
};

std::unique_ptr<CappedMyerson> capped_myerson(const Instance& instance);
// Same rule with budgets ignored.
std::unique_ptr<CappedMyerson> myerson(const Instance& instance);

// n agents with an atom at v, public budget v/n each, one item.
Instance epir_iir_gap_instance(int n, double v);

}  // namespace budgetmech
