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

#include "budgetmech/model.hpp"

namespace budgetmech {

// Highest bids win (maximum total bid over feasible sets); winners pay their
// bids. Not truthful.
class FirstPrice : public Mechanism {
 public:
  explicit FirstPrice(Instance instance);

  std::string name() const override { return "first_price"; }
  BudgetMode budget_mode() const override { return BudgetMode::kPublic; }
  const Instance& instance() const override { return instance_; }
  Outcome run(const TypeProfile& reported, Rng& rng) const override;
  ExpectedOutcome expected(const TypeProfile& reported) const override;
  bool is_analytic() const override { return true; }

 private:
  Instance instance_;
  std::vector<AgentSet> sets_;
};

// Agent i buys at prices[i] when its value and budget cover it; buyers are
// admitted in index order while the winner set stays feasible.
class PostedPrice : public Mechanism {
 public:
  PostedPrice(Instance instance, std::vector<double> prices);

  std::string name() const override { return "posted_price"; }
  BudgetMode budget_mode() const override { return mode_; }
  const Instance& instance() const override { return instance_; }
  Outcome run(const TypeProfile& reported, Rng& rng) const override;
  ExpectedOutcome expected(const TypeProfile& reported) const override;
  bool is_analytic() const override { return true; }

 private:
  Outcome allocate(const TypeProfile& reported) const;

  Instance instance_;
  std::vector<double> prices_;
  BudgetMode mode_;
};

// Never allocates, never charges.
class EmptyMechanism : public Mechanism {
 public:
  explicit EmptyMechanism(Instance instance) : instance_(std::move(instance)) {}

  std::string name() const override { return "empty"; }
  BudgetMode budget_mode() const override { return BudgetMode::kPublic; }
  const Instance& instance() const override { return instance_; }
  Outcome run(const TypeProfile& reported, Rng& rng) const override;
  ExpectedOutcome expected(const TypeProfile& reported) const override;
  bool is_analytic() const override { return true; }

 private:
  Instance instance_;
};

ExpectedOutcome expected_of(const Outcome& deterministic);

}  // namespace budgetmech
