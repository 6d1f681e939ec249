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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "budgetmech/harness.hpp"
#include "budgetmech/oracle.hpp"
#include "budgetmech/welfare.hpp"
#include "doctest.h"

using namespace budgetmech;

namespace {

Instance iid(int n, const Distribution& d, double b, Feasibility f = Feasibility::single_item()) {
  return Instance(std::vector<Agent>(static_cast<std::size_t>(n), Agent{d, BudgetSpec::public_budget(b)}),
                  std::move(f));
}

Priors2 uniform12() {
  const auto d = Distribution::discrete({1.0, 2.0}, {0.5, 0.5});
  return {{{d, d}, {d, d}}};
}

}  // namespace

TEST_SUITE("welfare") {

TEST_CASE("modified values replace values above the budget by the tail mean") {
  const Instance inst = iid(2, Distribution::uniform(0.0, 1.0), 0.3);
  const auto w = modify_values(inst, {{0.2, 0.8}, {0.3, 0.3}});
  CHECK(w[0] == doctest::Approx(0.2));
  CHECK(w[1] == doctest::Approx(0.65));
  // every report above the budget maps to the same weight
  CHECK(modify_values(inst, {{0.31, 0.99}, {0.3, 0.3}})[0] == doctest::Approx(0.65));
  const Agent priv{Distribution::atom(1.0), BudgetSpec::private_budget(Distribution::atom(1.0))};
  CHECK_THROWS(modify_values(Instance({priv}, Feasibility::single_item()), {{1.0}, {1.0}}));
}

TEST_CASE("modified vcg is second price without budgets") {
  const Instance inst = iid(3, Distribution::uniform(0.0, 1.0), kInfinity);
  const auto m = modified_vcg(inst);
  const auto o = m->allocate({{0.4, 0.9, 0.7}, {kInfinity, kInfinity, kInfinity}});
  CHECK(o.winners == 0b010);
  CHECK(o.payments[1] == doctest::Approx(0.7));
  CHECK(o.payments[0] == 0.0);
}

TEST_CASE("modified vcg with two units") {
  const Instance inst = iid(3, Distribution::uniform(0.0, 1.0), kInfinity, Feasibility::k_units(2));
  const auto o = modified_vcg(inst)->allocate({{0.4, 0.9, 0.7}, {kInfinity, kInfinity, kInfinity}});
  CHECK(o.winners == 0b110);
  CHECK(o.payments[1] == doctest::Approx(0.4));
  CHECK(o.payments[2] == doctest::Approx(0.4));
}

TEST_CASE("modified vcg respects budgets and values") {
  const Instance inst = iid(3, Distribution::exponential(1.0), 0.5, Feasibility::k_units(2));
  const auto m = modified_vcg(inst);
  Rng rng(4);
  for (int r = 0; r < 400; ++r) {
    const auto t = sample_profile(inst, rng);
    const auto o = m->run(t, rng);
    CHECK(is_epir(o, t));
    CHECK(is_budget_feasible(o, t));
    CHECK(inst.feasibility().contains(o.winners));
  }
}

TEST_CASE("all-pay conversion charges interim payments") {
  const Instance gap = epir_iir_gap_instance(4, 1.0);
  const auto m = to_iir_allpay(gap);
  CHECK(m->name() == "iir_allpay");
  CHECK_FALSE(m->is_ex_post_ir());
  CHECK(m->interim_payment(0, 1.0) == doctest::Approx(0.25));
  CHECK(m->interim_payment(1, 1.0) == doctest::Approx(0.0));
  CHECK(evaluate_exact(*m, gap, Metric::kRevenue) == doctest::Approx(0.25));
  CHECK_THROWS(m->interim_payment(0, 0.5));

  const Instance grid = discretize(iid(2, Distribution::uniform(0.0, 1.0), 0.3), 6);
  const auto base = std::make_shared<ModifiedVcg>(grid);
  const AllPayConversion conv(base);
  CHECK(evaluate_exact(conv, grid, Metric::kRevenue) ==
        doctest::Approx(evaluate_exact(*base, grid, Metric::kRevenue)));
  for (double v : grid.agent(0).value.support()) CHECK(conv.interim_payment(0, v) <= 0.3 + 1e-9);
  Rng rng(2);
  const TypeProfile t{{grid.agent(0).value.support()[5], grid.agent(1).value.support()[0]}, {0.3, 0.3}};
  const auto o = conv.run(t, rng);
  CHECK(o.payments[1] == doctest::Approx(conv.interim_payment(1, t.values[1])));
}

TEST_CASE("welfare via revenue") {
  const Instance inst = discretize(iid(2, Distribution::exponential(1.0), 1.0), 8);
  const auto m = welfare_via_revenue(inst);
  CHECK(m->name() == "welfare_via_revenue");
  const double w = evaluate_exact(*m, inst, Metric::kWelfare);
  const double o = optimal_bic(inst, IrMode::kEpir, Objective::kWelfare).value;
  CHECK(std::fabs(w / o - 0.891239) <= 1e-6);

  const Instance zero = iid(2, Distribution::exponential(1.0), 0.0);
  CHECK(evaluate_exact(*welfare_via_revenue(discretize(zero, 8)), discretize(zero, 8), Metric::kWelfare) == 0.0);

  const Instance bumpy = iid(1, Distribution::discrete({1.0, 2.0, 3.0}, {0.2, 0.1, 0.7}), 1.0);
  CHECK_THROWS_AS(welfare_via_revenue(bumpy), std::invalid_argument);
}

TEST_CASE("top-choice mechanism") {
  const Priors2 priors = uniform12();
  Matrix2 v{{{2.0, 1.0}, {1.0, 2.0}}};
  auto o = topchoice_2x2(v, priors);
  CHECK(o.item == std::array<int, 2>{0, 1});
  CHECK(o.welfare == 4.0);
  CHECK(o.payments == std::array<double, 2>{0.0, 0.0});
  v = {{{1.0, 2.0}, {1.0, 2.0}}};
  o = topchoice_2x2(v, priors);
  CHECK(o.item == std::array<int, 2>{0, 1});
  CHECK(o.welfare == 3.0);
  // ties in tops fall back to the ex-ante better matching
  const auto lo = Distribution::atom(1.0);
  const auto hi = Distribution::atom(3.0);
  const Priors2 skew{{{lo, hi}, {hi, lo}}};
  o = topchoice_2x2_reported({0, 0}, {{{1.0, 3.0}, {3.0, 1.0}}}, skew);
  CHECK(o.item == std::array<int, 2>{1, 0});
  CHECK(o.welfare == 6.0);
}

TEST_CASE("top-choice reports are ex-post truthful") {
  const Priors2 priors = uniform12();
  for (int mask = 0; mask < 16; ++mask) {
    Matrix2 v{};
    for (int k = 0; k < 4; ++k) v[static_cast<std::size_t>(k / 2)][static_cast<std::size_t>(k % 2)] = (mask >> k) & 1 ? 2.0 : 1.0;
    const auto truth = topchoice_2x2(v, priors);
    for (int i = 0; i < 2; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      std::array<int, 2> lie{v[0][1] > v[0][0] ? 1 : 0, v[1][1] > v[1][0] ? 1 : 0};
      lie[ui] = 1 - lie[ui];
      const auto dev = topchoice_2x2_reported(lie, v, priors);
      CHECK(v[ui][static_cast<std::size_t>(truth.item[ui])] >= v[ui][static_cast<std::size_t>(dev.item[ui])]);
    }
  }
}

}  // TEST_SUITE
