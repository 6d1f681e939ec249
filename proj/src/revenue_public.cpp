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

#include "budgetmech/revenue_public.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace budgetmech {

SingleAgentSolution optimal_single_agent(const Distribution& d, double budget, int grid_size) {
  if (!(budget >= 0.0)) throw std::invalid_argument("optimal_single_agent: budget must be nonnegative");
  SingleAgentSolution out;
  out.grid = discretize(d, grid_size);
  const auto& v = out.grid.support();
  const auto& pmf = out.grid.pmf();
  const int k = static_cast<int>(v.size());

  LinearProgram lp;
  for (int a = 0; a < k; ++a) lp.add_variable(0.0, 0.0, 1.0);
  for (int a = 0; a < k; ++a) lp.add_variable(pmf[static_cast<std::size_t>(a)]);
  auto qv = [](int a) { return a; };
  auto pv = [k](int a) { return k + a; };
  for (int a = 0; a < k; ++a) {
    const double va = v[static_cast<std::size_t>(a)];
    lp.add_row({{pv(a), 1.0}, {qv(a), -std::min(va, budget)}}, Sense::kLessEqual, 0.0);
    // Utility is linear in the one-dimensional type, so IC toward both
    // neighbours implies IC toward every type.
    for (int b : {a - 1, a + 1}) {
      if (b < 0 || b >= k) continue;
      // q_a v_a - p_a >= q_b v_a - p_b
      lp.add_row({{qv(a), va}, {pv(a), -1.0}, {qv(b), -va}, {pv(b), 1.0}}, Sense::kGreaterEqual, 0.0);
    }
  }
  const LpSolution sol = solve_lp(lp);
  out.status = sol.status;
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error("optimal_single_agent: LP not solved (" + to_string(sol.status) + ")");
  }
  out.revenue = sol.value;
  Menu menu;
  for (int a = 0; a < k; ++a) {
    const double q = std::clamp(sol.x[static_cast<std::size_t>(qv(a))], 0.0, 1.0);
    const double p = std::max(0.0, sol.x[static_cast<std::size_t>(pv(a))]);
    out.q.push_back(q);
    out.p.push_back(p);
    if (q > 1e-9) menu.push_back({q, std::min(p / q, budget)});
  }
  Instance instance({Agent{d, BudgetSpec::public_budget(budget)}}, Feasibility::single_item());
  out.mechanism = std::make_shared<MenuMechanism>(std::move(instance), std::vector<Menu>{menu}, "optimal_single_agent");
  return out;
}

CappedMyerson::CappedMyerson(Instance instance, bool cap, std::string name)
    : instance_(std::move(instance)), cap_(cap), name_(std::move(name)) {
  if (name_.empty()) name_ = cap_ ? "capped_myerson" : "myerson";
  if (!instance_.all_public_budgets()) throw std::invalid_argument("capped_myerson: budgets must be public");
  for (const auto& a : instance_.agents()) {
    const double c = cap_ ? a.budget.amount() : kInfinity;
    caps_.push_back(c);
    curves_.emplace_back(c >= a.value.support_max() ? a.value : cap_at(a.value, c));
  }
  sets_ = instance_.feasibility().feasible_sets(instance_.size());
}

double CappedMyerson::ironed(int i, double capped_report) const {
  const RevenueCurve& curve = curves_[static_cast<std::size_t>(i)];
  const Distribution& d = curve.distribution();
  if (d.is_discrete()) {
    // Reports between atoms round down to the atom below.
    const auto& s = d.support();
    auto it = std::upper_bound(s.begin(), s.end(), capped_report + 1e-12 * std::max(1.0, std::fabs(capped_report)));
    if (it == s.begin()) return -kInfinity;
    return curve.ironed_virtual_value(*std::prev(it));
  }
  if (capped_report < d.support_min()) return -kInfinity;
  return curve.ironed_virtual_value(std::min(capped_report, d.support_max()));
}

bool CappedMyerson::wins(int i, double capped_report, const std::vector<double>& weights) const {
  std::vector<double> w = weights;
  const double phi = ironed(i, capped_report);
  w[static_cast<std::size_t>(i)] = phi >= 0.0 ? phi : -kInfinity;
  return contains(max_weight_set(w, sets_), i);
}

Outcome CappedMyerson::allocate(const TypeProfile& reported) const {
  const int n = instance_.size();
  std::vector<double> capped(static_cast<std::size_t>(n));
  std::vector<double> weights(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    capped[ui] = std::min(reported.values[ui], caps_[ui]);
    const double phi = ironed(i, capped[ui]);
    weights[ui] = phi >= 0.0 ? phi : -kInfinity;
  }
  Outcome out = empty_outcome(n);
  out.winners = max_weight_set(weights, sets_);
  for (int i : members(out.winners)) {
    const auto ui = static_cast<std::size_t>(i);
    const Distribution& d = curves_[ui].distribution();
    double pay = capped[ui];
    if (d.is_discrete()) {
      const auto& s = d.support();
      std::size_t lo = 0;
      std::size_t hi = static_cast<std::size_t>(
                           std::upper_bound(s.begin(), s.end(), capped[ui] + 1e-12 * std::max(1.0, capped[ui])) -
                           s.begin()) -
                       1;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (wins(i, s[mid], weights)) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      pay = std::min(s[lo], capped[ui]);
    } else {
      double lo = d.support_min();
      double hi = capped[ui];
      if (wins(i, lo, weights)) {
        hi = lo;
      } else {
        for (int step = 0; step < 64; ++step) {
          const double mid = 0.5 * (lo + hi);
          if (wins(i, mid, weights)) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
      }
      pay = std::min(hi, capped[ui]);
    }
    out.payments[ui] = pay;
  }
  return out;
}

Outcome CappedMyerson::run(const TypeProfile& reported, Rng&) const { return allocate(reported); }

ExpectedOutcome CappedMyerson::expected(const TypeProfile& reported) const {
  const Outcome o = allocate(reported);
  const std::size_t n = reported.values.size();
  ExpectedOutcome out{std::vector<double>(n, 0.0), o.payments, o.payments};
  for (int i : members(o.winners)) out.win_prob[static_cast<std::size_t>(i)] = 1.0;
  return out;
}

std::unique_ptr<CappedMyerson> capped_myerson(const Instance& instance) {
  return std::make_unique<CappedMyerson>(instance, true);
}

std::unique_ptr<CappedMyerson> myerson(const Instance& instance) {
  return std::make_unique<CappedMyerson>(instance, false);
}

Instance epir_iir_gap_instance(int n, double v) {
  if (n < 1 || !(v > 0.0)) throw std::invalid_argument("gap instance: need n >= 1 and v > 0");
  std::vector<Agent> agents(static_cast<std::size_t>(n),
                            Agent{Distribution::atom(v), BudgetSpec::public_budget(v / n)});
  return Instance(std::move(agents), Feasibility::single_item());
}

}  // namespace budgetmech
