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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "budgetmech/distribution.hpp"
#include "budgetmech/rng.hpp"

namespace budgetmech {

// ---------------------------------------------------------------------------
// Agents and budgets

enum class BudgetMode { kPublic, kPrivate };

std::string to_string(BudgetMode mode);

class BudgetSpec {
 public:
  static BudgetSpec public_budget(double b);
  static BudgetSpec private_budget(Distribution dist);

  BudgetMode mode() const { return mode_; }
  bool is_public() const { return mode_ == BudgetMode::kPublic; }
  // Throws std::logic_error for private budgets.
  double amount() const;
  // Throws std::logic_error for public budgets.
  const Distribution& distribution() const;

  bool operator==(const BudgetSpec& other) const;

 private:
  BudgetSpec(BudgetMode mode, double amount, std::optional<Distribution> dist)
      : mode_(mode), amount_(amount), dist_(std::move(dist)) {}

  BudgetMode mode_;
  double amount_;
  std::optional<Distribution> dist_;
};

struct Agent {
  Distribution value;
  BudgetSpec budget;
  bool operator==(const Agent&) const = default;
};

// ---------------------------------------------------------------------------
// Winner sets

// Bitmask over agent indices; bit i set means agent i wins.
using AgentSet = std::uint32_t;

inline constexpr int kMaxAgents = 20;

inline bool contains(AgentSet s, int i) { return ((s >> i) & 1U) != 0; }
inline AgentSet with(AgentSet s, int i) { return s | (AgentSet{1} << i); }
int set_size(AgentSet s);
std::vector<int> members(AgentSet s);
AgentSet make_set(std::span<const int> indices);

// Lexicographic order of the sorted index lists; a proper prefix is smaller,
// so the empty set precedes everything.
bool lex_less(AgentSet a, AgentSet b);

class Feasibility {
 public:
  enum class Kind { kSingleItem, kKUnits, kExplicit };

  static Feasibility single_item();
  static Feasibility k_units(int k);
  // Must contain the empty set and be downward closed; checked here.
  static Feasibility explicit_family(std::vector<AgentSet> sets);

  Kind kind() const { return kind_; }
  int units() const { return k_; }
  const std::vector<AgentSet>& sets() const { return sets_; }

  bool contains(AgentSet s) const;
  // Every feasible set over n agents, in lexicographic order.
  std::vector<AgentSet> feasible_sets(int n) const;
  // Largest agent index referenced by an explicit family, or -1.
  int max_index() const;

  bool operator==(const Feasibility&) const = default;

 private:
  Kind kind_ = Kind::kSingleItem;
  int k_ = 1;
  std::vector<AgentSet> sets_;
};

std::string to_string(Feasibility::Kind kind);

class Instance {
 public:
  Instance(std::vector<Agent> agents, Feasibility feasibility);

  int size() const { return static_cast<int>(agents_.size()); }
  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(int i) const { return agents_[static_cast<std::size_t>(i)]; }
  const Feasibility& feasibility() const { return feasibility_; }

  bool all_public_budgets() const;
  bool all_discrete() const;

  bool operator==(const Instance&) const = default;

 private:
  std::vector<Agent> agents_;
  Feasibility feasibility_;
};

// Discretizes every continuous value and budget distribution.
Instance discretize(const Instance& instance, int grid_size);

struct TypeProfile {
  std::vector<double> values;
  std::vector<double> budgets;
  bool operator==(const TypeProfile&) const = default;
};

// One joint (value, budget) type of an agent with its probability.
struct TypePoint {
  double value;
  double budget;
  double prob;
};

// Value atoms times budget atoms (or the public budget). Discrete agents only;
// throws std::invalid_argument otherwise.
std::vector<TypePoint> type_points(const Agent& agent);

// Largest profile space exact enumerations will walk.
inline constexpr std::size_t kMaxEnumeratedProfiles = 1000000;

// Joint type profiles of a discrete instance, indexed in mixed radix with
// agent 0 varying fastest.
class ProfileSpace {
 public:
  explicit ProfileSpace(const Instance& instance);

  int agents() const { return static_cast<int>(types_.size()); }
  // Saturates at SIZE_MAX.
  std::size_t size() const { return size_; }
  const std::vector<TypePoint>& types(int i) const { return types_[static_cast<std::size_t>(i)]; }

  std::vector<int> decode(std::size_t index) const;
  std::size_t encode(const std::vector<int>& type_index) const;
  TypeProfile profile(const std::vector<int>& type_index) const;
  double prob(const std::vector<int>& type_index) const;

 private:
  std::vector<std::vector<TypePoint>> types_;
  std::size_t size_;
};

// ---------------------------------------------------------------------------
// Profiles and outcomes

struct Outcome {
  AgentSet winners = 0;
  std::vector<double> payments;
  bool operator==(const Outcome&) const = default;
};

Outcome empty_outcome(int n);

// Every winner pays at most the true value; every non-winner pays 0.
bool is_epir(const Outcome& outcome, const TypeProfile& truth);
// Every payment is within the agent's realized budget.
bool is_budget_feasible(const Outcome& outcome, const TypeProfile& truth);

// Utility with the budget cliff. The budget-violated state is a sentinel that
// compares below every finite utility; it never takes part in arithmetic.
class Utility {
 public:
  static Utility budget_violated() { return Utility(); }
  explicit Utility(double value) : value_(value), violated_(false) {}

  bool is_budget_violated() const { return violated_; }
  // Throws std::logic_error on the sentinel.
  double value() const;

  std::partial_ordering operator<=>(const Utility& other) const;
  bool operator==(const Utility& other) const;

 private:
  Utility() = default;
  double value_ = 0.0;
  bool violated_ = true;
};

Utility utility(int agent, const Outcome& outcome, const TypeProfile& truth);

// ---------------------------------------------------------------------------
// Mechanisms

// Per-agent allocation probability and payment statistics of a mechanism on
// one reported profile, taken over the mechanism's own randomness.
struct ExpectedOutcome {
  std::vector<double> win_prob;
  std::vector<double> expected_payment;
  // Largest payment charged with positive probability; checked against the
  // budget cliff.
  std::vector<double> max_payment;
};

class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual std::string name() const = 0;
  virtual BudgetMode budget_mode() const = 0;
  virtual const Instance& instance() const = 0;

  // Deterministic given (reported, rng state).
  virtual Outcome run(const TypeProfile& reported, Rng& rng) const = 0;

  // Analytic where the mechanism supports it; the default estimates from
  // kExpectationReplications seeded replications of run().
  virtual ExpectedOutcome expected(const TypeProfile& reported) const;
  virtual bool is_analytic() const { return false; }

  // False for mechanisms that may charge losers (all-pay conversions).
  virtual bool is_ex_post_ir() const { return true; }

  static constexpr int kExpectationReplications = 10000;
};

// ---------------------------------------------------------------------------
// Lottery menus

struct LotteryOption {
  double q = 0.0;  // allocation probability
  double t = 0.0;  // price charged if allocated
  bool operator==(const LotteryOption&) const = default;
};

using Menu = std::vector<LotteryOption>;

// Adds the null option, drops options within 1e-7 of one already present and
// sorts by (q, t).
Menu normalize_menu(Menu menu);

// Utility-maximizing affordable option (t <= budget). Options within 1e-9 of
// the best utility are tied; ties go to the larger expected payment q*t, then
// the larger q.
LotteryOption best_option(const Menu& menu, double value, double budget);

// Per-agent menus resolved independently. When the lottery winners form an
// infeasible set they are admitted in uniformly random order while the set
// stays feasible; rejected agents pay nothing.
class MenuMechanism : public Mechanism {
 public:
  MenuMechanism(Instance instance, std::vector<Menu> menus, std::string name = "menu");

  std::string name() const override { return name_; }
  BudgetMode budget_mode() const override { return mode_; }
  const Instance& instance() const override { return instance_; }
  Outcome run(const TypeProfile& reported, Rng& rng) const override;
  ExpectedOutcome expected(const TypeProfile& reported) const override;
  bool is_analytic() const override { return true; }

  const std::vector<Menu>& menus() const { return menus_; }
  // Option agent i selects under the reported profile.
  LotteryOption choice(int i, const TypeProfile& reported) const;

 private:
  double affordable_budget(int i, const TypeProfile& reported) const;

  Instance instance_;
  std::vector<Menu> menus_;
  std::string name_;
  BudgetMode mode_;
};

Outcome run_menu(const MenuMechanism& mechanism, const TypeProfile& profile, Rng& rng);

// ---------------------------------------------------------------------------
// Winner determination

// Feasible set maximizing the total weight; ties within 1e-12 go to the
// lexicographically smallest set.
AgentSet max_weight_set(std::span<const double> weights, std::span<const AgentSet> sets);

}  // namespace budgetmech
