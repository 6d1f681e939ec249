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

#include "budgetmech/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace budgetmech {

namespace {

int worker_count(int requested, std::size_t jobs) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, n);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

// Runs body(j) for j in [0, jobs) on a few threads; body writes only its own slot.
void parallel_for(std::size_t jobs, int threads, const std::function<void(std::size_t)>& body) {
  const int workers = worker_count(threads, jobs);
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs; ++j) body(j);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t j = static_cast<std::size_t>(w); j < jobs; j += static_cast<std::size_t>(workers)) body(j);
    });
  }
  for (auto& t : pool) t.join();
}

class GridSpace {
 public:
  explicit GridSpace(const AuditGrid& grid) : grid_(grid), size_(1) {
    for (const auto& t : grid.types) {
      if (t.empty()) throw std::invalid_argument("audit grid: agent without types");
      stride_.push_back(size_);
      if (size_ > kMaxEnumeratedProfiles / t.size()) throw std::invalid_argument("audit grid: too many profiles");
      size_ *= t.size();
    }
  }

  std::size_t size() const { return size_; }
  std::size_t type_of(std::size_t index, std::size_t i) const { return index / stride_[i] % grid_.types[i].size(); }
  std::size_t with_type(std::size_t index, std::size_t i, std::size_t k) const {
    return index - type_of(index, i) * stride_[i] + k * stride_[i];
  }
  TypeProfile profile(std::size_t index) const {
    TypeProfile p;
    for (std::size_t i = 0; i < grid_.types.size(); ++i) {
      const auto& t = grid_.types[i][type_of(index, i)];
      p.values.push_back(t.value);
      p.budgets.push_back(t.budget);
    }
    return p;
  }
  double others_prob(std::size_t index, std::size_t i) const {
    double p = 1.0;
    for (std::size_t j = 0; j < grid_.types.size(); ++j) {
      if (j != i) p *= grid_.types[j][type_of(index, j)].prob;
    }
    return p;
  }

 private:
  const AuditGrid& grid_;
  std::vector<std::size_t> stride_;
  std::size_t size_;
};

std::vector<ExpectedOutcome> expected_table(const Mechanism& mech, const GridSpace& space) {
  std::vector<ExpectedOutcome> table(space.size());
  parallel_for(space.size(), 0, [&](std::size_t j) { table[j] = mech.expected(space.profile(j)); });
  return table;
}

constexpr double kViolated = -kInfinity;

double utility_of(const ExpectedOutcome& e, std::size_t i, const TypePoint& truth) {
  if (e.max_payment[i] > truth.budget + kProbTol) return kViolated;
  return truth.value * e.win_prob[i] - e.expected_payment[i];
}

void record(AuditReport& r, int agent, const TypePoint& truth, const TypePoint& mis, double gain) {
  if (r.agent < 0 || gain > r.gain) {
    r.agent = agent;
    r.truth = truth;
    r.misreport = mis;
    r.gain = gain;
  }
}

double gain_of(double truthful, double deviating) {
  if (truthful == kViolated) return kInfinity;
  if (deviating == kViolated) return -kInfinity;
  return deviating - truthful;
}

std::string describe_point(const TypePoint& t) {
  std::ostringstream os;
  os << "(v=" << t.value << ", b=" << t.budget << ")";
  return os.str();
}

void finish(AuditReport& r, double tol) {
  r.pass = r.agent < 0 || r.gain <= tol;
  std::ostringstream os;
  if (r.agent >= 0) {
    os << (r.pass ? "largest gain " : "violation: agent ") ;
    if (!r.pass) os << r.agent << " ";
    os << "true " << describe_point(r.truth) << " report " << describe_point(r.misreport) << " gain " << r.gain;
  }
  r.detail = os.str();
}

}  // namespace

std::string to_string(Metric metric) { return metric == Metric::kRevenue ? "revenue" : "welfare"; }

AuditGrid make_audit_grid(const Instance& instance, int grid_size) {
  const Instance d = discretize(instance, grid_size);
  AuditGrid grid;
  for (const auto& a : d.agents()) grid.types.push_back(type_points(a));
  std::ostringstream os;
  os << "types per agent:";
  for (const auto& t : grid.types) os << " " << t.size();
  grid.description = os.str();
  return grid;
}

AuditReport audit_dsic(const Mechanism& mech, const AuditGrid& grid, double tol) {
  const GridSpace space(grid);
  const auto table = expected_table(mech, space);
  AuditReport r;
  r.property = "DSIC";
  r.grid = grid.description;
  for (std::size_t i = 0; i < grid.types.size(); ++i) {
    const auto& types = grid.types[i];
    for (std::size_t base = 0; base < space.size(); ++base) {
      if (space.type_of(base, i) != 0) continue;
      for (std::size_t k = 0; k < types.size(); ++k) {
        const double truthful = utility_of(table[space.with_type(base, i, k)], i, types[k]);
        for (std::size_t k2 = 0; k2 < types.size(); ++k2) {
          if (k2 == k) continue;
          const double deviating = utility_of(table[space.with_type(base, i, k2)], i, types[k]);
          ++r.checked;
          record(r, static_cast<int>(i), types[k], types[k2], gain_of(truthful, deviating));
        }
      }
    }
  }
  finish(r, tol);
  return r;
}

namespace {

// Interim utility of type k of agent i reporting k2.
double interim_utility(const GridSpace& space, const std::vector<ExpectedOutcome>& table, std::size_t i,
                       const TypePoint& truth, std::size_t k2) {
  double u = 0.0;
  for (std::size_t index = 0; index < space.size(); ++index) {
    if (space.type_of(index, i) != k2) continue;
    const double p = space.others_prob(index, i);
    if (p <= 0.0) continue;
    const double x = utility_of(table[index], i, truth);
    if (x == kViolated) return kViolated;
    u += p * x;
  }
  return u;
}

}  // namespace

AuditReport audit_bic(const Mechanism& mech, const AuditGrid& grid, double tol) {
  const GridSpace space(grid);
  const auto table = expected_table(mech, space);
  AuditReport r;
  r.property = "BIC";
  r.grid = grid.description;
  for (std::size_t i = 0; i < grid.types.size(); ++i) {
    const auto& types = grid.types[i];
    for (std::size_t k = 0; k < types.size(); ++k) {
      const double truthful = interim_utility(space, table, i, types[k], k);
      for (std::size_t k2 = 0; k2 < types.size(); ++k2) {
        if (k2 == k) continue;
        ++r.checked;
        record(r, static_cast<int>(i), types[k], types[k2],
               gain_of(truthful, interim_utility(space, table, i, types[k], k2)));
      }
    }
  }
  finish(r, tol);
  return r;
}

AuditReport audit_interim_ir(const Mechanism& mech, const AuditGrid& grid, double tol) {
  const GridSpace space(grid);
  const auto table = expected_table(mech, space);
  AuditReport r;
  r.property = "interim-IR";
  r.grid = grid.description;
  for (std::size_t i = 0; i < grid.types.size(); ++i) {
    const auto& types = grid.types[i];
    for (std::size_t k = 0; k < types.size(); ++k) {
      const double u = interim_utility(space, table, i, types[k], k);
      ++r.checked;
      record(r, static_cast<int>(i), types[k], types[k], u == kViolated ? kInfinity : -u);
    }
  }
  finish(r, tol);
  return r;
}

TypeProfile sample_profile(const Instance& instance, Rng& rng) {
  TypeProfile p;
  for (const auto& a : instance.agents()) {
    p.values.push_back(a.value.sample(rng));
    p.budgets.push_back(a.budget.is_public() ? a.budget.amount() : a.budget.distribution().sample(rng));
  }
  return p;
}

double metric_of(Metric metric, const Outcome& outcome, const TypeProfile& truth) {
  double total = 0.0;
  if (metric == Metric::kRevenue) {
    for (double p : outcome.payments) total += p;
  } else {
    for (int i : members(outcome.winners)) total += truth.values[static_cast<std::size_t>(i)];
  }
  return total;
}

namespace {

AuditReport audit_runs(const Mechanism& mech, const Instance& instance, long long n_runs, std::uint64_t seed,
                       const std::string& property,
                       const std::function<bool(const Outcome&, const TypeProfile&)>& ok) {
  if (n_runs < 1) throw std::invalid_argument("audit: need at least one run");
  const auto chunks = static_cast<std::size_t>((n_runs + kEstimateChunk - 1) / kEstimateChunk);
  std::vector<long long> first_bad(chunks, -1);
  parallel_for(chunks, 0, [&](std::size_t c) {
    Rng rng(derive_seed(seed, c));
    const long long begin = static_cast<long long>(c) * kEstimateChunk;
    const long long end = std::min(n_runs, begin + kEstimateChunk);
    for (long long run = begin; run < end; ++run) {
      const TypeProfile truth = sample_profile(instance, rng);
      const Outcome o = mech.run(truth, rng);
      if (!ok(o, truth)) {
        first_bad[c] = run;
        return;
      }
    }
  });
  AuditReport r;
  r.property = property;
  r.checked = n_runs;
  r.grid = std::to_string(n_runs) + " sampled runs, seed " + std::to_string(seed);
  for (long long bad : first_bad) {
    if (bad < 0) continue;
    r.pass = false;
    r.detail = "first violation at run " + std::to_string(bad);
    break;
  }
  return r;
}

}  // namespace

AuditReport audit_epir(const Mechanism& mech, const Instance& instance, long long n_runs, std::uint64_t seed) {
  const Feasibility& feas = instance.feasibility();
  return audit_runs(mech, instance, n_runs, seed, "EPIR", [&](const Outcome& o, const TypeProfile& truth) {
    return feas.contains(o.winners) && is_epir(o, truth);
  });
}

AuditReport audit_budget(const Mechanism& mech, const Instance& instance, long long n_runs, std::uint64_t seed) {
  const Feasibility& feas = instance.feasibility();
  return audit_runs(mech, instance, n_runs, seed, "budget", [&](const Outcome& o, const TypeProfile& truth) {
    return feas.contains(o.winners) && is_budget_feasible(o, truth);
  });
}

PerfEstimate estimate(const Mechanism& mech, const Instance& instance, Metric metric, long long n_samples,
                      std::uint64_t seed, int threads) {
  if (n_samples < 100) throw std::invalid_argument("estimate: need at least 100 samples");
  struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
  };
  const auto chunks = static_cast<std::size_t>((n_samples + kEstimateChunk - 1) / kEstimateChunk);
  std::vector<Moments> parts(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng(derive_seed(seed, c));
    const long long begin = static_cast<long long>(c) * kEstimateChunk;
    const long long end = std::min(n_samples, begin + kEstimateChunk);
    Moments m;
    for (long long s = begin; s < end; ++s) {
      const TypeProfile truth = sample_profile(instance, rng);
      const double x = metric_of(metric, mech.run(truth, rng), truth);
      m.n += 1.0;
      const double delta = x - m.mean;
      m.mean += delta / m.n;
      m.m2 += delta * (x - m.mean);
    }
    parts[c] = m;
  });
  Moments total;
  for (const auto& m : parts) {
    const double n = total.n + m.n;
    const double delta = m.mean - total.mean;
    total.mean += delta * m.n / n;
    total.m2 += m.m2 + delta * delta * total.n * m.n / n;
    total.n = n;
  }
  PerfEstimate out;
  out.metric = metric;
  out.mean = total.mean;
  out.samples = n_samples;
  out.seed = seed;
  out.half_width = 1.96 * std::sqrt(total.m2 / (total.n - 1.0)) / std::sqrt(total.n);
  return out;
}

double evaluate_exact(const Mechanism& mech, const Instance& instance, Metric metric) {
  if (!instance.all_discrete()) throw std::invalid_argument("evaluate_exact: instance must be discrete");
  const ProfileSpace space(instance);
  if (space.size() > kMaxEnumeratedProfiles) throw std::invalid_argument("evaluate_exact: too many profiles");
  std::vector<double> part(space.size(), 0.0);
  parallel_for(space.size(), 0, [&](std::size_t index) {
    const std::vector<int> k = space.decode(index);
    const TypeProfile p = space.profile(k);
    const ExpectedOutcome e = mech.expected(p);
    double x = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      x += metric == Metric::kRevenue ? e.expected_payment[i] : p.values[i] * e.win_prob[i];
    }
    part[index] = space.prob(k) * x;
  });
  double total = 0.0;
  for (double x : part) total += x;
  return total;
}

}  // namespace budgetmech
