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

#include "budgetmech/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace budgetmech {

namespace {

std::vector<double> tail_values(const Instance& instance) {
  std::vector<double> out;
  for (const auto& a : instance.agents()) {
    const double b = a.budget.amount();
    out.push_back(a.value.tail_gt(b) > 0.0 ? tail_expectation(a.value, b) : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

std::vector<double> modified(const std::vector<double>& tails, const Instance& instance, const TypeProfile& profile) {
  std::vector<double> w;
  for (int i = 0; i < instance.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double v = profile.values[ui];
    const double b = instance.agent(i).budget.amount();
    if (v <= b) {
      w.push_back(v);
    } else if (std::isnan(tails[ui])) {
      throw std::invalid_argument("modify_values: agent " + std::to_string(i) + " reports " + std::to_string(v) +
                                  " above the budget where the value law has no mass");
    } else {
      w.push_back(tails[ui]);
    }
  }
  return w;
}

double set_weight(AgentSet s, const std::vector<double>& w) {
  double total = 0.0;
  for (int i : members(s)) total += w[static_cast<std::size_t>(i)];
  return total;
}

}  // namespace

std::vector<double> modify_values(const Instance& instance, const TypeProfile& profile) {
  if (!instance.all_public_budgets()) throw std::invalid_argument("modify_values: budgets must be public");
  return modified(tail_values(instance), instance, profile);
}

ModifiedVcg::ModifiedVcg(Instance instance) : instance_(std::move(instance)) {
  if (!instance_.all_public_budgets()) throw std::invalid_argument("modified_vcg: budgets must be public");
  sets_ = instance_.feasibility().feasible_sets(instance_.size());
  tails_ = tail_values(instance_);
}

Outcome ModifiedVcg::allocate(const TypeProfile& reported) const {
  const int n = instance_.size();
  const std::vector<double> w = modified(tails_, instance_, reported);
  Outcome out = empty_outcome(n);
  out.winners = max_weight_set(w, sets_);
  const double chosen = set_weight(out.winners, w);
  for (int i : members(out.winners)) {
    const auto ui = static_cast<std::size_t>(i);
    std::vector<double> without = w;
    without[ui] = 0.0;
    double best_others = 0.0;
    for (AgentSet s : sets_) {
      if (!contains(s, i)) best_others = std::max(best_others, set_weight(s, without));
    }
    const double threshold = std::max(0.0, best_others - (chosen - w[ui]));
    out.payments[ui] = std::min({threshold, instance_.agent(i).budget.amount(), reported.values[ui]});
  }
  return out;
}

Outcome ModifiedVcg::run(const TypeProfile& reported, Rng&) const { return allocate(reported); }

ExpectedOutcome ModifiedVcg::expected(const TypeProfile& reported) const {
  const Outcome o = allocate(reported);
  ExpectedOutcome out{std::vector<double>(reported.values.size(), 0.0), o.payments, o.payments};
  for (int i : members(o.winners)) out.win_prob[static_cast<std::size_t>(i)] = 1.0;
  return out;
}

std::unique_ptr<ModifiedVcg> modified_vcg(const Instance& instance) { return std::make_unique<ModifiedVcg>(instance); }

AllPayConversion::AllPayConversion(std::shared_ptr<const Mechanism> base) : base_(std::move(base)) {
  const Instance& instance = base_->instance();
  if (!instance.all_public_budgets() || !instance.all_discrete()) {
    throw std::invalid_argument("all-pay conversion: needs a discrete instance with public budgets");
  }
  const ProfileSpace space(instance);
  if (space.size() > kMaxEnumeratedProfiles) {
    throw std::invalid_argument("all-pay conversion: too many profiles to enumerate");
  }
  const int n = instance.size();
  for (int i = 0; i < n; ++i) {
    values_.emplace_back();
    for (const auto& t : space.types(i)) values_.back().push_back(t.value);
    interim_.emplace_back(space.types(i).size(), 0.0);
  }
  for (std::size_t index = 0; index < space.size(); ++index) {
    const std::vector<int> k = space.decode(index);
    const ExpectedOutcome e = base_->expected(space.profile(k));
    const double p = space.prob(k);
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto ki = static_cast<std::size_t>(k[ui]);
      interim_[ui][ki] += p / space.types(i)[ki].prob * e.expected_payment[ui];
    }
  }
  for (int i = 0; i < n; ++i) {
    const double b = instance.agent(i).budget.amount();
    for (double pay : interim_[static_cast<std::size_t>(i)]) {
      if (pay > b + kProbTol) {
        throw std::invalid_argument("all-pay conversion: interim payment " + std::to_string(pay) +
                                    " exceeds the budget of agent " + std::to_string(i));
      }
    }
  }
}

std::size_t AllPayConversion::type_index(int agent, double reported_value) const {
  const auto& v = values_[static_cast<std::size_t>(agent)];
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (std::fabs(v[k] - reported_value) <= 1e-12 * std::max(1.0, std::fabs(v[k]))) return k;
  }
  throw std::invalid_argument("all-pay conversion: report is not a type of agent " + std::to_string(agent));
}

double AllPayConversion::interim_payment(int agent, double reported_value) const {
  return interim_[static_cast<std::size_t>(agent)][type_index(agent, reported_value)];
}

Outcome AllPayConversion::run(const TypeProfile& reported, Rng& rng) const {
  Outcome out = base_->run(reported, rng);
  for (std::size_t i = 0; i < out.payments.size(); ++i) {
    out.payments[i] = interim_payment(static_cast<int>(i), reported.values[i]);
  }
  return out;
}

ExpectedOutcome AllPayConversion::expected(const TypeProfile& reported) const {
  ExpectedOutcome out = base_->expected(reported);
  for (std::size_t i = 0; i < out.expected_payment.size(); ++i) {
    out.expected_payment[i] = interim_payment(static_cast<int>(i), reported.values[i]);
    out.max_payment[i] = out.expected_payment[i];
  }
  return out;
}

std::unique_ptr<AllPayConversion> to_iir_allpay(const Instance& instance) {
  return std::make_unique<AllPayConversion>(std::make_shared<ModifiedVcg>(instance));
}

std::unique_ptr<CappedMyerson> welfare_via_revenue(const Instance& instance) {
  for (int i = 0; i < instance.size(); ++i) {
    if (!is_mhr(instance.agent(i).value)) {
      throw std::invalid_argument("welfare_via_revenue: value distribution of agent " + std::to_string(i) +
                                  " is not MHR");
    }
  }
  return std::make_unique<CappedMyerson>(instance, true, "welfare_via_revenue");
}

TopChoiceOutcome topchoice_2x2_reported(const std::array<int, 2>& tops, const Matrix2& values, const Priors2& priors) {
  TopChoiceOutcome out;
  if (tops[0] != tops[1]) {
    out.item = tops;
  } else {
    const double identity = priors[0][0].mean() + priors[1][1].mean();
    const double swapped = priors[0][1].mean() + priors[1][0].mean();
    out.item = swapped > identity ? std::array<int, 2>{1, 0} : std::array<int, 2>{0, 1};
  }
  out.welfare = values[0][static_cast<std::size_t>(out.item[0])] + values[1][static_cast<std::size_t>(out.item[1])];
  return out;
}

TopChoiceOutcome topchoice_2x2(const Matrix2& values, const Priors2& priors) {
  const std::array<int, 2> tops{values[0][1] > values[0][0] ? 1 : 0, values[1][1] > values[1][0] ? 1 : 0};
  return topchoice_2x2_reported(tops, values, priors);
}

}  // namespace budgetmech
