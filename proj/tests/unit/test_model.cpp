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

#include <stdexcept>
#include <vector>

#include "budgetmech/model.hpp"
#include "doctest.h"

using namespace budgetmech;

namespace {

Instance two_agents(Feasibility f = Feasibility::single_item()) {
  const Agent a{Distribution::discrete({1.0, 2.0}, {0.5, 0.5}), BudgetSpec::public_budget(1.5)};
  return Instance({a, a}, std::move(f));
}

TypeProfile profile(std::vector<double> v, std::vector<double> b) { return {std::move(v), std::move(b)}; }

}  // namespace

TEST_SUITE("model") {

TEST_CASE("budget specs") {
  CHECK_THROWS(BudgetSpec::public_budget(-1.0));
  CHECK_THROWS(BudgetSpec::private_budget(Distribution::uniform(-1.0, 1.0)));
  const auto pub = BudgetSpec::public_budget(kInfinity);
  CHECK(pub.is_public());
  CHECK(pub.amount() == kInfinity);
  CHECK_THROWS_AS(pub.distribution(), std::logic_error);
  const auto priv = BudgetSpec::private_budget(Distribution::atom(1.0));
  CHECK_THROWS_AS(priv.amount(), std::logic_error);
}

TEST_CASE("agent sets") {
  const std::vector<int> idx{0, 2, 5};
  const AgentSet s = make_set(idx);
  CHECK(set_size(s) == 3);
  CHECK(members(s) == idx);
  CHECK(contains(s, 2));
  CHECK_FALSE(contains(s, 1));
  const std::vector<int> bad{kMaxAgents};
  CHECK_THROWS(make_set(bad));
}

TEST_CASE("lexicographic order on sorted member lists") {
  CHECK(lex_less(0b0, 0b1));
  CHECK(lex_less(0b01, 0b11));  // {0} < {0,1}
  CHECK(lex_less(0b11, 0b10));  // {0,1} < {1}
  CHECK(lex_less(0b101, 0b110));  // {0,2} < {1,2}
  CHECK_FALSE(lex_less(0b10, 0b10));
  CHECK_FALSE(lex_less(0b10, 0b11));
}

TEST_CASE("feasibility families") {
  const auto one = Feasibility::single_item();
  CHECK(one.contains(0b100));
  CHECK_FALSE(one.contains(0b11));
  CHECK(one.feasible_sets(3) == std::vector<AgentSet>{0b000, 0b001, 0b010, 0b100});

  const auto two = Feasibility::k_units(2);
  CHECK(two.contains(0b101));
  CHECK_FALSE(two.contains(0b111));
  CHECK(two.feasible_sets(3).size() == 7);
  CHECK_THROWS(Feasibility::k_units(0));

  const auto fam = Feasibility::explicit_family({0b00, 0b01, 0b10, 0b11});
  CHECK(fam.feasible_sets(2) == std::vector<AgentSet>{0b00, 0b01, 0b11, 0b10});
  CHECK(fam.max_index() == 1);
  CHECK_THROWS_AS(Feasibility::explicit_family({0b01}), std::invalid_argument);
  CHECK_THROWS_AS(Feasibility::explicit_family({0b00, 0b11}), std::invalid_argument);
}

TEST_CASE("feasible sets are downward closed") {
  for (const auto& f : {Feasibility::single_item(), Feasibility::k_units(2),
                        Feasibility::explicit_family({0b000, 0b001, 0b010, 0b100, 0b011, 0b110})}) {
    const auto sets = f.feasible_sets(3);
    for (AgentSet s : sets) {
      for (int i : members(s)) CHECK(f.contains(s & ~(AgentSet{1} << i)));
    }
  }
}

TEST_CASE("instances validate agents and feasibility") {
  CHECK_THROWS(Instance({}, Feasibility::single_item()));
  const Agent a{Distribution::atom(1.0), BudgetSpec::public_budget(1.0)};
  CHECK_THROWS(Instance({a}, Feasibility::explicit_family({0b00, 0b10})));
  const Instance inst = two_agents();
  CHECK(inst.size() == 2);
  CHECK(inst.all_public_budgets());
  CHECK(inst.all_discrete());
  const Agent c{Distribution::uniform(0.0, 1.0), BudgetSpec::private_budget(Distribution::uniform(0.0, 1.0))};
  const Instance d = discretize(Instance({c}, Feasibility::single_item()), 4);
  CHECK(d.all_discrete());
  CHECK_FALSE(d.all_public_budgets());
}

TEST_CASE("profile space enumerates the product of type grids") {
  const Agent pub{Distribution::discrete({1.0, 2.0, 3.0}, {0.2, 0.3, 0.5}), BudgetSpec::public_budget(2.0)};
  const Agent priv{Distribution::discrete({1.0, 2.0}, {0.5, 0.5}),
                   BudgetSpec::private_budget(Distribution::discrete({0.5, 1.0}, {0.25, 0.75}))};
  const Instance inst({pub, priv}, Feasibility::single_item());
  const ProfileSpace space(inst);
  REQUIRE(space.size() == 12);
  CHECK(space.types(1).size() == 4);
  double total = 0.0;
  for (std::size_t k = 0; k < space.size(); ++k) {
    const auto idx = space.decode(k);
    CHECK(space.encode(idx) == k);
    total += space.prob(idx);
  }
  CHECK(total == doctest::Approx(1.0));
  const auto first = space.decode(1);
  CHECK(first == std::vector<int>{1, 0});
  const auto p = space.profile({2, 3});
  CHECK(p.values == std::vector<double>{3.0, 2.0});
  CHECK(p.budgets == std::vector<double>{2.0, 1.0});
  CHECK(space.prob({2, 3}) == doctest::Approx(0.5 * 0.5 * 0.75));
  CHECK_THROWS(type_points(Agent{Distribution::uniform(0.0, 1.0), BudgetSpec::public_budget(1.0)}));
}

TEST_CASE("ex-post checks and utility") {
  const auto truth = profile({2.0, 1.0}, {1.0, 1.0});
  CHECK(is_epir({0b01, {1.0, 0.0}}, truth));
  CHECK_FALSE(is_epir({0b01, {1.0, 0.5}}, truth));
  CHECK_FALSE(is_epir({0b10, {0.0, 1.5}}, truth));
  CHECK(is_budget_feasible({0b01, {1.0, 0.0}}, truth));
  CHECK_FALSE(is_budget_feasible({0b01, {1.5, 0.0}}, truth));

  const Outcome over{0b01, {1.5, 0.0}};
  CHECK(utility(0, over, truth).is_budget_violated());
  CHECK(utility(0, over, truth) < Utility(-1e9));
  CHECK(utility(0, {0b01, {0.5, 0.0}}, truth).value() == doctest::Approx(1.5));
  CHECK(utility(1, {0b01, {0.5, 0.0}}, truth).value() == 0.0);
  CHECK(Utility::budget_violated() == Utility::budget_violated());
  CHECK_THROWS(Utility::budget_violated().value());
}

TEST_CASE("menu normalization") {
  const Menu m = normalize_menu({{1.0, 2.0}, {0.5, 1.0}, {0.5, 1.0 + 1e-9}});
  REQUIRE(m.size() == 3);
  CHECK(m[0] == LotteryOption{0.0, 0.0});
  CHECK(m[1] == LotteryOption{0.5, 1.0});
  CHECK_THROWS(normalize_menu({{1.5, 1.0}}));
  CHECK_THROWS(normalize_menu({{0.5, -1.0}}));
}

TEST_CASE("best option respects the budget and breaks ties toward revenue") {
  const Menu m = normalize_menu({{1.0, 2.0}, {0.5, 1.0}});
  CHECK(best_option(m, 3.0, 5.0) == LotteryOption{1.0, 2.0});
  CHECK(best_option(m, 3.0, 1.5) == LotteryOption{0.5, 1.0});
  CHECK(best_option(m, 0.5, 5.0) == LotteryOption{0.0, 0.0});
  // v = 3: utility 1 from (1, 2), and (0.5, 1) gives 1 as well
  CHECK(best_option(m, 3.0, 2.0) == LotteryOption{1.0, 2.0});
  // indifferent with null at v = t
  CHECK(best_option(m, 2.0, 0.5) == LotteryOption{0.0, 0.0});
  CHECK(best_option(normalize_menu({{1.0, 2.0}}), 2.0, 3.0) == LotteryOption{1.0, 2.0});
}

TEST_CASE("best option maximizes utility over affordable options") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Menu raw;
    for (int k = 0; k < 4; ++k) raw.push_back({uniform01(rng), 2.0 * uniform01(rng)});
    const Menu m = normalize_menu(raw);
    const double v = 3.0 * uniform01(rng);
    const double b = 2.0 * uniform01(rng);
    const auto pick = best_option(m, v, b);
    CHECK(pick.t <= b + kProbTol);
    for (const auto& o : m) {
      if (o.t <= b) CHECK(pick.q * (v - pick.t) >= o.q * (v - o.t) - 1e-9);
    }
  }
}

TEST_CASE("menu mechanism") {
  const Instance inst = two_agents(Feasibility::k_units(2));
  const Menu m{{1.0, 1.0}};
  const MenuMechanism mech(inst, {m, m});
  CHECK(mech.budget_mode() == BudgetMode::kPublic);
  Rng rng(1);
  const auto o = mech.run(profile({2.0, 0.5}, {1.5, 1.5}), rng);
  CHECK(o.winners == 0b01);
  CHECK(o.payments == std::vector<double>{1.0, 0.0});
  const auto e = mech.expected(profile({2.0, 2.0}, {1.5, 1.5}));
  CHECK(e.win_prob[0] == doctest::Approx(1.0));
  CHECK_THROWS(MenuMechanism(inst, {m}));
}

TEST_CASE("menu mechanism rations over-subscribed lotteries") {
  const Instance inst = two_agents();
  const Menu m{{1.0, 1.0}};
  const MenuMechanism mech(inst, {m, m});
  const auto truth = profile({2.0, 2.0}, {1.5, 1.5});
  const auto e = mech.expected(truth);
  CHECK(e.win_prob[0] == doctest::Approx(0.5));
  CHECK(e.expected_payment[1] == doctest::Approx(0.5));
  CHECK(e.max_payment[0] == doctest::Approx(1.0));
  Rng rng(9);
  int wins0 = 0;
  for (int r = 0; r < 2000; ++r) {
    const auto o = mech.run(truth, rng);
    CHECK(Feasibility::single_item().contains(o.winners));
    CHECK(is_epir(o, truth));
    wins0 += contains(o.winners, 0) ? 1 : 0;
  }
  CHECK(wins0 / 2000.0 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("menu mechanism replays under a fixed seed") {
  const Instance inst = two_agents(Feasibility::k_units(2));
  const Menu m{{0.3, 0.5}, {0.7, 1.2}};
  const MenuMechanism mech(inst, {m, m});
  const auto truth = profile({2.0, 1.0}, {1.5, 1.5});
  Rng a(42);
  Rng b(42);
  for (int r = 0; r < 50; ++r) CHECK(run_menu(mech, truth, a) == run_menu(mech, truth, b));
}

TEST_CASE("private budgets restrict the menu by the reported budget") {
  const Agent a{Distribution::discrete({1.0, 2.0}, {0.5, 0.5}),
                BudgetSpec::private_budget(Distribution::discrete({0.5, 1.0}, {0.5, 0.5}))};
  const MenuMechanism mech(Instance({a}, Feasibility::single_item()), {Menu{{1.0, 1.0}, {0.5, 0.5}}});
  CHECK(mech.budget_mode() == BudgetMode::kPrivate);
  CHECK(mech.choice(0, profile({2.0}, {0.5})) == LotteryOption{0.5, 0.5});
  CHECK(mech.choice(0, profile({2.0}, {1.0})) == LotteryOption{1.0, 1.0});
}

TEST_CASE("max weight set") {
  const auto sets = Feasibility::single_item().feasible_sets(3);
  const std::vector<double> w{1.0, 3.0, 2.0};
  CHECK(max_weight_set(w, sets) == 0b010);
  const std::vector<double> tie{2.0, 2.0, 1.0};
  CHECK(max_weight_set(tie, sets) == 0b001);
  const std::vector<double> neg{-1.0, -2.0, 0.0};
  CHECK(max_weight_set(neg, sets) == 0b000);
  const auto two = Feasibility::k_units(2).feasible_sets(3);
  CHECK(max_weight_set(w, two) == 0b110);
}

}  // TEST_SUITE
