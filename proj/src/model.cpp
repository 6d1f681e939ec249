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

#include "budgetmech/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <cstdint>
#include <stdexcept>

namespace budgetmech {

std::string to_string(BudgetMode mode) { return mode == BudgetMode::kPublic ? "public" : "private"; }

BudgetSpec BudgetSpec::public_budget(double b) {
  if (!(b >= 0.0)) throw std::invalid_argument("public budget must be nonnegative");
  return BudgetSpec(BudgetMode::kPublic, b, std::nullopt);
}

BudgetSpec BudgetSpec::private_budget(Distribution dist) {
  if (dist.support_min() < 0.0) throw std::invalid_argument("budget distribution must have nonnegative support");
  return BudgetSpec(BudgetMode::kPrivate, 0.0, std::move(dist));
}

double BudgetSpec::amount() const {
  if (!is_public()) throw std::logic_error("BudgetSpec::amount: budget is private");
  return amount_;
}

const Distribution& BudgetSpec::distribution() const {
  if (is_public()) throw std::logic_error("BudgetSpec::distribution: budget is public");
  return *dist_;
}

bool BudgetSpec::operator==(const BudgetSpec& other) const {
  if (mode_ != other.mode_) return false;
  return is_public() ? amount_ == other.amount_ : *dist_ == *other.dist_;
}

int set_size(AgentSet s) { return std::popcount(s); }

std::vector<int> members(AgentSet s) {
  std::vector<int> out;
  for (int i = 0; s != 0; ++i, s >>= 1) {
    if (s & 1U) out.push_back(i);
  }
  return out;
}

AgentSet make_set(std::span<const int> indices) {
  AgentSet s = 0;
  for (int i : indices) {
    if (i < 0 || i >= kMaxAgents) throw std::out_of_range("agent index out of range");
    s = with(s, i);
  }
  return s;
}

bool lex_less(AgentSet a, AgentSet b) {
  const AgentSet diff = a ^ b;
  if (diff == 0) return false;
  const int i = std::countr_zero(diff);
  // Both share every element below i. The set holding i is smaller exactly
  // when the other one still has an element after the common prefix.
  if (contains(a, i)) return (b >> i) != 0;
  return (a >> i) == 0;
}

Feasibility Feasibility::single_item() { return k_units(1); }

Feasibility Feasibility::k_units(int k) {
  if (k < 1) throw std::invalid_argument("k-units feasibility: k must be positive");
  Feasibility f;
  f.kind_ = k == 1 ? Kind::kSingleItem : Kind::kKUnits;
  f.k_ = k;
  return f;
}

Feasibility Feasibility::explicit_family(std::vector<AgentSet> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  if (!std::binary_search(sets.begin(), sets.end(), AgentSet{0})) {
    throw std::invalid_argument("explicit feasibility: family must contain the empty set");
  }
  for (AgentSet s : sets) {
    for (int i : members(s)) {
      if (!std::binary_search(sets.begin(), sets.end(), s & ~(AgentSet{1} << i))) {
        throw std::invalid_argument("explicit feasibility: family is not downward closed");
      }
    }
  }
  Feasibility f;
  f.kind_ = Kind::kExplicit;
  f.k_ = 0;
  f.sets_ = std::move(sets);
  return f;
}

bool Feasibility::contains(AgentSet s) const {
  if (kind_ == Kind::kExplicit) return std::binary_search(sets_.begin(), sets_.end(), s);
  return set_size(s) <= k_;
}

std::vector<AgentSet> Feasibility::feasible_sets(int n) const {
  if (n < 0 || n > kMaxAgents) throw std::invalid_argument("feasible_sets: unsupported agent count");
  std::vector<AgentSet> out;
  if (kind_ == Kind::kExplicit) {
    const AgentSet universe = (AgentSet{1} << n) - 1;
    for (AgentSet s : sets_) {
      if ((s & ~universe) == 0) out.push_back(s);
    }
  } else {
    for (AgentSet s = 0; s < (AgentSet{1} << n); ++s) {
      if (set_size(s) <= k_) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

int Feasibility::max_index() const {
  int m = -1;
  for (AgentSet s : sets_) {
    if (s != 0) m = std::max(m, 31 - std::countl_zero(s));
  }
  return m;
}

std::string to_string(Feasibility::Kind kind) {
  switch (kind) {
    case Feasibility::Kind::kSingleItem:
      return "single-item";
    case Feasibility::Kind::kKUnits:
      return "k-units";
    case Feasibility::Kind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

Instance::Instance(std::vector<Agent> agents, Feasibility feasibility)
    : agents_(std::move(agents)), feasibility_(std::move(feasibility)) {
  if (agents_.empty()) throw std::invalid_argument("instance: need at least one agent");
  if (size() > kMaxAgents) throw std::invalid_argument("instance: too many agents");
  if (feasibility_.max_index() >= size()) {
    throw std::invalid_argument("instance: feasibility set references a missing agent");
  }
  for (const auto& a : agents_) {
    if (a.value.support_min() < 0.0) throw std::invalid_argument("instance: values must be nonnegative");
  }
}

bool Instance::all_public_budgets() const {
  return std::all_of(agents_.begin(), agents_.end(), [](const Agent& a) { return a.budget.is_public(); });
}

bool Instance::all_discrete() const {
  return std::all_of(agents_.begin(), agents_.end(), [](const Agent& a) {
    return a.value.is_discrete() && (a.budget.is_public() || a.budget.distribution().is_discrete());
  });
}

Instance discretize(const Instance& instance, int grid_size) {
  std::vector<Agent> agents;
  for (const auto& a : instance.agents()) {
    BudgetSpec budget = a.budget.is_public()
                            ? a.budget
                            : BudgetSpec::private_budget(discretize(a.budget.distribution(), grid_size));
    agents.push_back({discretize(a.value, grid_size), std::move(budget)});
  }
  return Instance(std::move(agents), instance.feasibility());
}

std::vector<TypePoint> type_points(const Agent& agent) {
  const auto& v = agent.value;
  if (!v.is_discrete() || (!agent.budget.is_public() && !agent.budget.distribution().is_discrete())) {
    throw std::invalid_argument("type_points: agent distributions must be discrete");
  }
  std::vector<TypePoint> out;
  for (std::size_t a = 0; a < v.support().size(); ++a) {
    if (agent.budget.is_public()) {
      out.push_back({v.support()[a], agent.budget.amount(), v.pmf()[a]});
      continue;
    }
    const auto& b = agent.budget.distribution();
    for (std::size_t c = 0; c < b.support().size(); ++c) {
      out.push_back({v.support()[a], b.support()[c], v.pmf()[a] * b.pmf()[c]});
    }
  }
  return out;
}

ProfileSpace::ProfileSpace(const Instance& instance) : size_(1) {
  for (const auto& a : instance.agents()) {
    types_.push_back(type_points(a));
    const std::size_t k = types_.back().size();
    size_ = size_ > SIZE_MAX / k ? SIZE_MAX : size_ * k;
  }
}

std::vector<int> ProfileSpace::decode(std::size_t index) const {
  std::vector<int> out(types_.size());
  for (std::size_t i = 0; i < types_.size(); ++i) {
    out[i] = static_cast<int>(index % types_[i].size());
    index /= types_[i].size();
  }
  return out;
}

std::size_t ProfileSpace::encode(const std::vector<int>& type_index) const {
  std::size_t index = 0;
  for (std::size_t i = types_.size(); i-- > 0;) index = index * types_[i].size() + static_cast<std::size_t>(type_index[i]);
  return index;
}

TypeProfile ProfileSpace::profile(const std::vector<int>& type_index) const {
  TypeProfile p;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const auto& t = types_[i][static_cast<std::size_t>(type_index[i])];
    p.values.push_back(t.value);
    p.budgets.push_back(t.budget);
  }
  return p;
}

double ProfileSpace::prob(const std::vector<int>& type_index) const {
  double p = 1.0;
  for (std::size_t i = 0; i < types_.size(); ++i) p *= types_[i][static_cast<std::size_t>(type_index[i])].prob;
  return p;
}

Outcome empty_outcome(int n) { return Outcome{0, std::vector<double>(static_cast<std::size_t>(n), 0.0)}; }

bool is_epir(const Outcome& outcome, const TypeProfile& truth) {
  for (std::size_t i = 0; i < outcome.payments.size(); ++i) {
    const double pay = outcome.payments[i];
    if (contains(outcome.winners, static_cast<int>(i))) {
      if (pay > truth.values[i] + kProbTol) return false;
    } else if (std::fabs(pay) > kProbTol) {
      return false;
    }
  }
  return true;
}

bool is_budget_feasible(const Outcome& outcome, const TypeProfile& truth) {
  for (std::size_t i = 0; i < outcome.payments.size(); ++i) {
    if (outcome.payments[i] > truth.budgets[i] + kProbTol) return false;
  }
  return true;
}

double Utility::value() const {
  if (violated_) throw std::logic_error("Utility::value: budget-violated sentinel has no value");
  return value_;
}

std::partial_ordering Utility::operator<=>(const Utility& other) const {
  if (violated_ || other.violated_) {
    if (violated_ && other.violated_) return std::partial_ordering::equivalent;
    return violated_ ? std::partial_ordering::less : std::partial_ordering::greater;
  }
  return value_ <=> other.value_;
}

bool Utility::operator==(const Utility& other) const { return (*this <=> other) == 0; }

Utility utility(int agent, const Outcome& outcome, const TypeProfile& truth) {
  const auto i = static_cast<std::size_t>(agent);
  const double pay = outcome.payments[i];
  if (pay > truth.budgets[i] + kProbTol) return Utility::budget_violated();
  const double value = contains(outcome.winners, agent) ? truth.values[i] : 0.0;
  return Utility(value - pay);
}

ExpectedOutcome Mechanism::expected(const TypeProfile& reported) const {
  const std::size_t n = reported.values.size();
  ExpectedOutcome out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  Rng rng(0x5eedULL);
  for (int r = 0; r < kExpectationReplications; ++r) {
    const Outcome o = run(reported, rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (contains(o.winners, static_cast<int>(i))) out.win_prob[i] += 1.0;
      out.expected_payment[i] += o.payments[i];
      out.max_payment[i] = std::max(out.max_payment[i], o.payments[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.win_prob[i] /= kExpectationReplications;
    out.expected_payment[i] /= kExpectationReplications;
  }
  return out;
}

Menu normalize_menu(Menu menu) {
  constexpr double kMergeTol = 1e-7;
  menu.push_back({0.0, 0.0});
  std::sort(menu.begin(), menu.end(), [](const LotteryOption& a, const LotteryOption& b) {
    return a.q != b.q ? a.q < b.q : a.t < b.t;
  });
  Menu out;
  for (const auto& o : menu) {
    if (o.q < 0.0 || o.q > 1.0 + kMergeTol || o.t < 0.0) {
      throw std::invalid_argument("menu option outside q in [0,1], t >= 0");
    }
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const LotteryOption& p) {
      return std::fabs(p.q - o.q) < kMergeTol && std::fabs(p.t - o.t) < kMergeTol;
    });
    if (!duplicate) out.push_back({std::min(o.q, 1.0), o.t});
  }
  return out;
}

LotteryOption best_option(const Menu& menu, double value, double budget) {
  constexpr double kTieTol = 1e-9;
  LotteryOption best{0.0, 0.0};
  double best_u = 0.0;
  bool found = false;
  for (const auto& o : menu) {
    if (o.t > budget + kProbTol) continue;
    const double u = o.q * (value - o.t);
    bool take = false;
    if (!found || u > best_u + kTieTol) {
      take = true;
    } else if (u >= best_u - kTieTol) {
      const double pay = o.q * o.t;
      const double best_pay = best.q * best.t;
      take = pay > best_pay + kTieTol || (pay >= best_pay - kTieTol && o.q > best.q);
    }
    if (take) {
      best_u = found ? std::max(best_u, u) : u;
      best = o;
      found = true;
    }
  }
  return best;
}

MenuMechanism::MenuMechanism(Instance instance, std::vector<Menu> menus, std::string name)
    : instance_(std::move(instance)), menus_(std::move(menus)), name_(std::move(name)) {
  if (static_cast<int>(menus_.size()) != instance_.size()) {
    throw std::invalid_argument("menu mechanism: one menu per agent required");
  }
  for (auto& m : menus_) m = normalize_menu(std::move(m));
  mode_ = instance_.all_public_budgets() ? BudgetMode::kPublic : BudgetMode::kPrivate;
}

double MenuMechanism::affordable_budget(int i, const TypeProfile& reported) const {
  const auto& b = instance_.agent(i).budget;
  return b.is_public() ? b.amount() : reported.budgets[static_cast<std::size_t>(i)];
}

LotteryOption MenuMechanism::choice(int i, const TypeProfile& reported) const {
  return best_option(menus_[static_cast<std::size_t>(i)], reported.values[static_cast<std::size_t>(i)],
                     affordable_budget(i, reported));
}

Outcome MenuMechanism::run(const TypeProfile& reported, Rng& rng) const {
  const int n = instance_.size();
  Outcome out = empty_outcome(n);
  std::vector<LotteryOption> picks;
  AgentSet lucky = 0;
  for (int i = 0; i < n; ++i) {
    picks.push_back(choice(i, reported));
    // one draw per agent regardless of the option, so streams stay aligned
    if (uniform01(rng) < picks.back().q) lucky = with(lucky, i);
  }
  const auto& feas = instance_.feasibility();
  AgentSet winners = lucky;
  if (!feas.contains(lucky)) {
    std::vector<int> order = members(lucky);
    for (std::size_t k = order.size(); k > 1; --k) {
      const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k));
      std::swap(order[k - 1], order[std::min(j, k - 1)]);
    }
    winners = 0;
    for (int i : order) {
      if (feas.contains(with(winners, i))) winners = with(winners, i);
    }
  }
  out.winners = winners;
  for (int i : members(winners)) out.payments[static_cast<std::size_t>(i)] = picks[static_cast<std::size_t>(i)].t;
  return out;
}

ExpectedOutcome MenuMechanism::expected(const TypeProfile& reported) const {
  const int n = instance_.size();
  const auto un = static_cast<std::size_t>(n);
  ExpectedOutcome out{std::vector<double>(un, 0.0), std::vector<double>(un, 0.0), std::vector<double>(un, 0.0)};
  std::vector<LotteryOption> picks;
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    picks.push_back(choice(i, reported));
    if (picks.back().q > 0.0) active.push_back(i);
  }
  const auto& feas = instance_.feasibility();
  const std::size_t m = active.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double prob = 1.0;
    AgentSet lucky = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double q = picks[static_cast<std::size_t>(active[k])].q;
      if ((mask >> k) & 1U) {
        prob *= q;
        lucky = with(lucky, active[k]);
      } else {
        prob *= 1.0 - q;
      }
    }
    if (prob <= 0.0 || lucky == 0) continue;
    std::vector<double> keep(un, 0.0);
    if (feas.contains(lucky)) {
      for (int i : members(lucky)) keep[static_cast<std::size_t>(i)] = 1.0;
    } else if (feas.kind() != Feasibility::Kind::kExplicit) {
      const double share = static_cast<double>(feas.units()) / set_size(lucky);
      for (int i : members(lucky)) keep[static_cast<std::size_t>(i)] = share;
    } else {
      std::vector<int> order = members(lucky);
      double perms = 0.0;
      do {
        AgentSet w = 0;
        for (int i : order) {
          if (feas.contains(with(w, i))) w = with(w, i);
        }
        for (int i : members(w)) keep[static_cast<std::size_t>(i)] += 1.0;
        perms += 1.0;
      } while (std::next_permutation(order.begin(), order.end()));
      for (double& k : keep) k /= perms;
    }
    for (int i : members(lucky)) {
      const auto ui = static_cast<std::size_t>(i);
      out.win_prob[ui] += prob * keep[ui];
    }
  }
  for (std::size_t i = 0; i < un; ++i) {
    out.expected_payment[i] = out.win_prob[i] * picks[i].t;
    out.max_payment[i] = out.win_prob[i] > 0.0 ? picks[i].t : 0.0;
  }
  return out;
}

Outcome run_menu(const MenuMechanism& mechanism, const TypeProfile& profile, Rng& rng) {
  return mechanism.run(profile, rng);
}

AgentSet max_weight_set(std::span<const double> weights, std::span<const AgentSet> sets) {
  constexpr double kTol = 1e-12;
  AgentSet best = 0;
  double best_w = -kInfinity;
  for (AgentSet s : sets) {
    double w = 0.0;
    for (int i : members(s)) w += weights[static_cast<std::size_t>(i)];
    if (w > best_w + kTol || (w >= best_w - kTol && lex_less(s, best))) {
      best = s;
      best_w = std::max(w, best_w);
    }
  }
  return best;
}

}  // namespace budgetmech
