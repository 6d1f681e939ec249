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

#include "budgetmech/model.hpp"

namespace budgetmech {

enum class OptionRole { kNull, kBudgetExhausting, kMonopolyFraction };

std::string to_string(OptionRole role);

struct PrivateMenuParams {
  int value_grid = 32;   // value quantiles in the audit grid (continuous laws)
  int budget_grid = 16;  // budget quantiles (continuous budget laws)
};

struct PrivateBudgetMenu {
  Menu options;  // normalized, null option first
  std::vector<OptionRole> roles;
  double monopoly_price = 0.0;
  double alpha = 1.0;   // monopoly-fraction price is alpha * monopoly_price
  double anchor = 0.0;  // value at which lotteries and the posted option tie
  bool mhr = true;
  // Expected revenue of one agent facing the menu, exact over values and over
  // the budget atoms (continuous budgets use budget_grid quantiles).
  double revenue = 0.0;
  std::string note;

  OptionRole role_of(const LotteryOption& option) const;
};

// Audit grid of (value, budget) points with probabilities.
std::vector<TypePoint> private_audit_grid(const Distribution& value, const Distribution& budget,
                                          const PrivateMenuParams& params = {});

struct StructureReport {
  bool holds = true;
  int points = 0;
  int violations = 0;
  TypePoint first_violation{0.0, 0.0, 0.0};
  LotteryOption violating_choice;
};

// Whether best_option at every grid point is the null option, an option that
// spends the whole budget, or the monopoly-fraction option.
StructureReport check_menu_structure(const PrivateBudgetMenu& menu, const std::vector<TypePoint>& grid);

// Expected revenue of a single agent facing the menu.
double menu_revenue(const Menu& menu, const Distribution& value, const Distribution& budget, int budget_grid);

// Menu offering the posted option (1, alpha * p*) and, for budget levels b
// below that price, lotteries (q, b) with q = (h - r) / (h - b), so that a
// type with value h is indifferent between them and the posted option. The
// search over alpha, lottery levels and h keeps the highest-revenue menu
// whose structure holds on the audit grid. Non-MHR values are accepted; the
// note records it. Throws std::invalid_argument for negative budgets.
PrivateBudgetMenu build_private_menu(const Distribution& value, const Distribution& budget,
                                     const PrivateMenuParams& params = {});

// One private menu per agent, resolved independently with rationing.
std::shared_ptr<MenuMechanism> private_menu_mechanism(const Instance& instance, const PrivateMenuParams& params = {});

Outcome run_private(const MenuMechanism& mechanism, const TypeProfile& profile, Rng& rng);

}  // namespace budgetmech
