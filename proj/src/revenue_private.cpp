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

#include "budgetmech/revenue_private.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace budgetmech {

namespace {

constexpr double kPriceTol = 1e-9;

Distribution budget_atoms(const Distribution& budget, int budget_grid) { return discretize(budget, budget_grid); }

double revenue_at_budget(const Menu& menu, const Distribution& value, double b) {
  if (value.is_discrete()) {
    double r = 0.0;
    for (std::size_t k = 0; k < value.support().size(); ++k) {
      const LotteryOption o = best_option(menu, value.support()[k], b);
      r += value.pmf()[k] * o.q * o.t;
    }
    return r;
  }
  // The choice changes only where two affordable options tie.
  Menu affordable;
  for (const auto& o : menu) {
    if (o.t <= b + kProbTol) affordable.push_back(o);
  }
  const double lo = value.support_min();
  const double hi = value.support_max();
  std::vector<double> cuts{lo};
  if (std::isfinite(hi)) cuts.push_back(hi);
  for (std::size_t a = 0; a < affordable.size(); ++a) {
    for (std::size_t c = a + 1; c < affordable.size(); ++c) {
      const auto& x = affordable[a];
      const auto& y = affordable[c];
      if (x.q == y.q) continue;
      const double v = (x.q * x.t - y.q * y.t) / (x.q - y.q);
      if (v > lo && v < hi) cuts.push_back(v);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double r = 0.0;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const double x = cuts[k];
    const double mass = value.atom_mass(x);
    if (mass > 0.0) {
      const LotteryOption o = best_option(menu, x, b);
      r += mass * o.q * o.t;
    }
    const double next = k + 1 < cuts.size() ? cuts[k + 1] : kInfinity;
    const double inner = (std::isfinite(next) ? value.cdf_left(next) : 1.0) - value.cdf(x);
    if (inner <= 0.0) continue;
    const double mid = std::isfinite(next) ? 0.5 * (x + next) : x + 1.0;
    const LotteryOption o = best_option(menu, mid, b);
    r += inner * o.q * o.t;
  }
  return r;
}

}  // namespace

std::string to_string(OptionRole role) {
  switch (role) {
    case OptionRole::kNull:
      return "null";
    case OptionRole::kBudgetExhausting:
      return "budget-exhausting";
    case OptionRole::kMonopolyFraction:
      return "monopoly-fraction";
  }
  return "unknown";
}

OptionRole PrivateBudgetMenu::role_of(const LotteryOption& option) const {
  for (std::size_t k = 0; k < options.size(); ++k) {
    if (std::fabs(options[k].q - option.q) < 1e-7 && std::fabs(options[k].t - option.t) < 1e-7) return roles[k];
  }
  throw std::invalid_argument("role_of: option not on the menu");
}

std::vector<TypePoint> private_audit_grid(const Distribution& value, const Distribution& budget,
                                          const PrivateMenuParams& params) {
  const Distribution v = discretize(value, params.value_grid);
  const Distribution b = budget_atoms(budget, params.budget_grid);
  std::vector<TypePoint> out;
  for (std::size_t a = 0; a < v.support().size(); ++a) {
    for (std::size_t c = 0; c < b.support().size(); ++c) {
      out.push_back({v.support()[a], b.support()[c], v.pmf()[a] * b.pmf()[c]});
    }
  }
  return out;
}

StructureReport check_menu_structure(const PrivateBudgetMenu& menu, const std::vector<TypePoint>& grid) {
  StructureReport report;
  for (const auto& point : grid) {
    ++report.points;
    const LotteryOption o = best_option(menu.options, point.value, point.budget);
    const OptionRole role = menu.role_of(o);
    const bool ok = role != OptionRole::kBudgetExhausting || std::fabs(o.t - point.budget) <= kPriceTol;
    if (ok) continue;
    if (report.holds) {
      report.first_violation = point;
      report.violating_choice = o;
    }
    report.holds = false;
    ++report.violations;
  }
  return report;
}

double menu_revenue(const Menu& menu, const Distribution& value, const Distribution& budget, int budget_grid) {
  const Distribution b = budget_atoms(budget, budget_grid);
  double r = 0.0;
  for (std::size_t c = 0; c < b.support().size(); ++c) r += b.pmf()[c] * revenue_at_budget(menu, value, b.support()[c]);
  return r;
}

PrivateBudgetMenu build_private_menu(const Distribution& value, const Distribution& budget,
                                     const PrivateMenuParams& params) {
  if (budget.support_min() < 0.0) throw std::invalid_argument("build_private_menu: negative budget support");
  const std::vector<TypePoint> grid = private_audit_grid(value, budget, params);
  const Distribution levels_dist = budget_atoms(budget, params.budget_grid);
  const std::vector<double>& levels = levels_dist.support();
  const double b_max = levels.back();
  const double p_star = monopoly_price(value);

  std::vector<double> alphas;
  for (int k = 8; k >= 1; --k) alphas.push_back(k / 8.0);
  if (p_star > 0.0) {
    for (double b : levels) {
      if (b > 0.0 && b < p_star) alphas.push_back(b / p_star);
    }
  }
  std::sort(alphas.begin(), alphas.end(), std::greater<>());
  alphas.erase(std::unique(alphas.begin(), alphas.end(), [](double x, double y) { return std::fabs(x - y) < 1e-12; }),
               alphas.end());

  std::vector<double> anchors_all;
  for (const auto& point : grid) anchors_all.push_back(point.value);
  anchors_all.push_back(p_star);
  std::sort(anchors_all.begin(), anchors_all.end());
  anchors_all.erase(std::unique(anchors_all.begin(), anchors_all.end()), anchors_all.end());

  PrivateBudgetMenu best;
  bool found = false;
  auto consider = [&](double alpha, double r, const std::vector<double>& lottery_levels, double h) {
    PrivateBudgetMenu m;
    Menu raw{{1.0, r}};
    for (double b : lottery_levels) raw.push_back({(h - r) / (h - b), b});
    m.options = normalize_menu(raw);
    for (const auto& o : m.options) {
      if (o.q == 0.0 && o.t == 0.0) {
        m.roles.push_back(OptionRole::kNull);
      } else if (o.q == 1.0 && std::fabs(o.t - r) < 1e-12) {
        m.roles.push_back(OptionRole::kMonopolyFraction);
      } else {
        m.roles.push_back(OptionRole::kBudgetExhausting);
      }
    }
    if (!check_menu_structure(m, grid).holds) return;
    m.revenue = menu_revenue(m.options, value, budget, params.budget_grid);
    if (found && m.revenue <= best.revenue + 1e-12) return;
    m.monopoly_price = p_star;
    m.alpha = alpha;
    m.anchor = h;
    best = std::move(m);
    found = true;
  };

  for (double alpha : alphas) {
    const double r = alpha * p_star;
    if (r > b_max + kPriceTol) continue;
    std::vector<double> below;
    for (double b : levels) {
      if (b > 0.0 && b < r - 1e-12) below.push_back(b);
    }
    consider(alpha, r, {}, r);
    std::vector<std::vector<double>> subsets;
    if (below.size() > 1) subsets.push_back(below);
    for (double b : below) subsets.push_back({b});
    for (const auto& subset : subsets) {
      for (double h : anchors_all) {
        if (h > r + 1e-12) consider(alpha, r, subset, h);
      }
    }
  }
  if (!found) {
    // Every level is below every candidate price: only the null option.
    best.options = normalize_menu({});
    best.roles = {OptionRole::kNull};
    best.monopoly_price = p_star;
    best.alpha = 0.0;
    best.revenue = 0.0;
  }
  best.mhr = is_mhr(value);
  if (!best.mhr) best.note = "value distribution is not MHR; structure reported, not asserted";
  return best;
}

std::shared_ptr<MenuMechanism> private_menu_mechanism(const Instance& instance, const PrivateMenuParams& params) {
  std::vector<Menu> menus;
  for (const auto& a : instance.agents()) {
    const Distribution budget = a.budget.is_public() ? Distribution::atom(a.budget.amount()) : a.budget.distribution();
    menus.push_back(build_private_menu(a.value, budget, params).options);
  }
  return std::make_shared<MenuMechanism>(instance, std::move(menus), "private_menu");
}

Outcome run_private(const MenuMechanism& mechanism, const TypeProfile& profile, Rng& rng) {
  return mechanism.run(profile, rng);
}

}  // namespace budgetmech
