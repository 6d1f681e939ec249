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

#include "budgetmech/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace budgetmech {

std::string to_string(IrMode mode) { return mode == IrMode::kEpir ? "EPIR" : "IIR"; }
std::string to_string(Objective objective) { return objective == Objective::kRevenue ? "revenue" : "welfare"; }

OracleResult optimal_bic(const Instance& instance, IrMode mode, Objective objective, double budget_scale) {
  if (!instance.all_discrete()) throw std::invalid_argument("optimal_bic: instance must be discrete");
  if (!(budget_scale >= 0.0)) throw std::invalid_argument("optimal_bic: budget_scale must be nonnegative");
  const ProfileSpace space(instance);
  if (space.size() > kMaxOracleProfiles) {
    throw std::invalid_argument("optimal_bic: " + std::to_string(space.size()) + " profiles exceed the cap of " +
                                std::to_string(kMaxOracleProfiles));
  }
  const int n = instance.size();
  const std::size_t np = space.size();
  auto scaled = [&](double b) { return budget_scale == 0.0 ? 0.0 : budget_scale * b; };

  OracleResult out;
  out.sets = instance.feasibility().feasible_sets(n);
  const std::size_t ns = out.sets.size();  // sets[0] is empty

  std::vector<std::vector<int>> decoded(np);
  for (std::size_t t = 0; t < np; ++t) {
    decoded[t] = space.decode(t);
    out.profiles.push_back(space.profile(decoded[t]));
    out.profile_prob.push_back(space.prob(decoded[t]));
  }

  LinearProgram lp;
  // x(t, s) for s >= 1, then y(t, i).
  auto xvar = [&](std::size_t t, std::size_t s) { return static_cast<int>(t * (ns - 1) + (s - 1)); };
  auto yvar = [&](std::size_t t, int i) {
    return static_cast<int>(np * (ns - 1) + t * static_cast<std::size_t>(n) + static_cast<std::size_t>(i));
  };
  for (std::size_t t = 0; t < np; ++t) {
    for (std::size_t s = 1; s < ns; ++s) {
      double w = 0.0;
      if (objective == Objective::kWelfare) {
        for (int i : members(out.sets[s])) w += out.profiles[t].values[static_cast<std::size_t>(i)];
      }
      lp.add_variable(out.profile_prob[t] * w);
    }
  }
  for (std::size_t t = 0; t < np; ++t) {
    for (int i = 0; i < n; ++i) lp.add_variable(objective == Objective::kRevenue ? out.profile_prob[t] : 0.0);
  }

  for (std::size_t t = 0; t < np; ++t) {
    std::vector<LpTerm> row;
    for (std::size_t s = 1; s < ns; ++s) row.push_back({xvar(t, s), 1.0});
    lp.add_row(std::move(row), Sense::kLessEqual, 1.0);
  }

  // Terms of coef * (X_i or P_i) at profile t.
  auto alloc_terms = [&](std::vector<LpTerm>& row, std::size_t t, int i, double coef) {
    for (std::size_t s = 1; s < ns; ++s) {
      if (contains(out.sets[s], i)) row.push_back({xvar(t, s), coef});
    }
  };

  if (mode == IrMode::kEpir) {
    for (std::size_t t = 0; t < np; ++t) {
      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double cap = std::min(out.profiles[t].values[ui], scaled(out.profiles[t].budgets[ui]));
        std::vector<LpTerm> row{{yvar(t, i), 1.0}};
        alloc_terms(row, t, i, -cap);
        lp.add_row(std::move(row), Sense::kLessEqual, 0.0);
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    const auto& types = space.types(i);
    const auto ui = static_cast<std::size_t>(i);
    // Profiles grouped by agent i's type, with the weight Pr(t_{-i}).
    std::vector<std::vector<std::pair<std::size_t, double>>> by_type(types.size());
    for (std::size_t t = 0; t < np; ++t) {
      const auto k = static_cast<std::size_t>(decoded[t][ui]);
      by_type[k].push_back({t, out.profile_prob[t] / types[k].prob});
    }
    auto interim = [&](std::vector<LpTerm>& row, std::size_t k, double alloc_coef, double pay_coef) {
      for (const auto& [t, w] : by_type[k]) {
        if (alloc_coef != 0.0) alloc_terms(row, t, i, alloc_coef * w);
        row.push_back({yvar(t, i), pay_coef * w});
      }
    };

    for (std::size_t k = 0; k < types.size(); ++k) {
      const double v = types[k].value;
      if (mode == IrMode::kIir) {
        std::vector<LpTerm> ir;
        interim(ir, k, v, -1.0);
        lp.add_row(std::move(ir), Sense::kGreaterEqual, 0.0);
        const double cap = scaled(types[k].budget);
        if (std::isfinite(cap)) {
          std::vector<LpTerm> budget;
          interim(budget, k, 0.0, 1.0);
          lp.add_row(std::move(budget), Sense::kLessEqual, cap);
        }
      }
      for (std::size_t k2 = 0; k2 < types.size(); ++k2) {
        if (k2 == k || types[k2].budget > types[k].budget + 1e-12) continue;
        std::vector<LpTerm> ic;
        interim(ic, k, v, -1.0);
        interim(ic, k2, -v, 1.0);
        lp.add_row(std::move(ic), Sense::kGreaterEqual, 0.0);
      }
    }
  }

  const LpSolution sol = solve_lp(lp);
  out.status = sol.status;
  out.max_residual = sol.max_residual;
  if (sol.status != LpStatus::kOptimal) return out;
  out.value = sol.value;
  for (std::size_t t = 0; t < np; ++t) {
    std::vector<double> alloc(ns, 0.0);
    double used = 0.0;
    for (std::size_t s = 1; s < ns; ++s) {
      alloc[s] = std::max(0.0, sol.x[static_cast<std::size_t>(xvar(t, s))]);
      used += alloc[s];
    }
    alloc[0] = std::max(0.0, 1.0 - used);
    out.allocation.push_back(std::move(alloc));
    std::vector<double> pay(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pay[static_cast<std::size_t>(i)] = sol.x[static_cast<std::size_t>(yvar(t, i))];
    out.payments.push_back(std::move(pay));
  }
  return out;
}

}  // namespace budgetmech
