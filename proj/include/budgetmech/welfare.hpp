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

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "budgetmech/model.hpp"
#include "budgetmech/revenue_public.hpp"

namespace budgetmech {

// w_i = v_i when v_i <= B_i, else E[V_i | V_i > B_i]. Throws
// std::invalid_argument for private budgets, or when v_i > B_i but no mass
// lies above B_i.
std::vector<double> modify_values(const Instance& instance, const TypeProfile& profile);

// VCG on modified values: the feasible set maximizing total w, ties to the
// lexicographically smallest set. Winner i pays min(threshold_i, B_i, v_i)
// where threshold_i is the VCG payment of i computed on w.
class ModifiedVcg : public Mechanism {
 public:
  explicit ModifiedVcg(Instance instance);

  std::string name() const override { return "modified_vcg"; }
  BudgetMode budget_mode() const override { return BudgetMode::kPublic; }
  const Instance& instance() const override { return instance_; }
  Outcome run(const TypeProfile& reported, Rng& rng) const override;
  ExpectedOutcome expected(const TypeProfile& reported) const override;
  bool is_analytic() const override { return true; }

  Outcome allocate(const TypeProfile& reported) const;

 private:
  Instance instance_;
  std::vector<AgentSet> sets_;
  std::vector<double> tails_;  // E[V_i | V_i > B_i], NaN when undefined
};

std::unique_ptr<ModifiedVcg> modified_vcg(const Instance& instance);

// All-pay form of a deterministic mechanism on a discrete public-budget
// instance: same allocation, and every agent pays the interim expected payment
// of the report whether or not the agent wins. Throws std::invalid_argument when an
// interim payment exceeds the budget or the instance is not discrete.
class AllPayConversion : public Mechanism {
 public:
  explicit AllPayConversion(std::shared_ptr<const Mechanism> base);

  std::string name() const override { return "iir_allpay"; }
  BudgetMode budget_mode() const override { return BudgetMode::kPublic; }
  const Instance& instance() const override { return base_->instance(); }
  Outcome run(const TypeProfile& reported, Rng& rng) const override;
  ExpectedOutcome expected(const TypeProfile& reported) const override;
  bool is_analytic() const override { return true; }
  bool is_ex_post_ir() const override { return false; }

  double interim_payment(int agent, double reported_value) const;

 private:
  std::size_t type_index(int agent, double reported_value) const;

  std::shared_ptr<const Mechanism> base_;
  std::vector<std::vector<double>> values_;   // per agent, type values
  std::vector<std::vector<double>> interim_;  // per agent, per type
};

std::unique_ptr<AllPayConversion> to_iir_allpay(const Instance& instance);

// The capped-value revenue mechanism used for welfare. Throws
// std::invalid_argument unless every value distribution is MHR.
std::unique_ptr<CappedMyerson> welfare_via_revenue(const Instance& instance);

// Two unit-demand agents, two items, zero budgets.
struct TopChoiceOutcome {
  std::array<int, 2> item{0, 1};  // item assigned to each agent
  std::array<double, 2> payments{0.0, 0.0};
  double welfare = 0.0;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Priors2 = std::array<std::array<Distribution, 2>, 2>;

// Each agent names a top item. Distinct tops are granted; otherwise the
// matching maximizing expected welfare under the priors is used (ties: agent 0
// gets item 0).
TopChoiceOutcome topchoice_2x2_reported(const std::array<int, 2>& tops, const Matrix2& values, const Priors2& priors);
// Truthful tops (ties: item 0).
TopChoiceOutcome topchoice_2x2(const Matrix2& values, const Priors2& priors);

}  // namespace budgetmech
