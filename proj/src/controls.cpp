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

#include "budgetmech/controls.hpp"

#include <stdexcept>

namespace budgetmech {

ExpectedOutcome expected_of(const Outcome& deterministic) {
  ExpectedOutcome out{std::vector<double>(deterministic.payments.size(), 0.0), deterministic.payments,
                      deterministic.payments};
  for (int i : members(deterministic.winners)) out.win_prob[static_cast<std::size_t>(i)] = 1.0;
  return out;
}

FirstPrice::FirstPrice(Instance instance) : instance_(std::move(instance)) {
  sets_ = instance_.feasibility().feasible_sets(instance_.size());
}

Outcome FirstPrice::run(const TypeProfile& reported, Rng&) const {
  Outcome out = empty_outcome(instance_.size());
  out.winners = max_weight_set(reported.values, sets_);
  for (int i : members(out.winners)) out.payments[static_cast<std::size_t>(i)] = reported.values[static_cast<std::size_t>(i)];
  return out;
}

ExpectedOutcome FirstPrice::expected(const TypeProfile& reported) const {
  Rng unused(0);
  return expected_of(run(reported, unused));
}

PostedPrice::PostedPrice(Instance instance, std::vector<double> prices)
    : instance_(std::move(instance)), prices_(std::move(prices)) {
  if (static_cast<int>(prices_.size()) != instance_.size()) {
    throw std::invalid_argument("posted_price: one price per agent required");
  }
  for (double p : prices_) {
    if (!(p >= 0.0)) throw std::invalid_argument("posted_price: prices must be nonnegative");
  }
  mode_ = instance_.all_public_budgets() ? BudgetMode::kPublic : BudgetMode::kPrivate;
}

Outcome PostedPrice::allocate(const TypeProfile& reported) const {
  const int n = instance_.size();
  Outcome out = empty_outcome(n);
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const auto& spec = instance_.agent(i).budget;
    const double budget = spec.is_public() ? spec.amount() : reported.budgets[ui];
    if (reported.values[ui] < prices_[ui] || budget + kProbTol < prices_[ui]) continue;
    if (!instance_.feasibility().contains(with(out.winners, i))) continue;
    out.winners = with(out.winners, i);
    out.payments[ui] = prices_[ui];
  }
  return out;
}

Outcome PostedPrice::run(const TypeProfile& reported, Rng&) const { return allocate(reported); }

ExpectedOutcome PostedPrice::expected(const TypeProfile& reported) const { return expected_of(allocate(reported)); }

Outcome EmptyMechanism::run(const TypeProfile&, Rng&) const { return empty_outcome(instance_.size()); }

ExpectedOutcome EmptyMechanism::expected(const TypeProfile&) const {
  return expected_of(empty_outcome(instance_.size()));
}

}  // namespace budgetmech
