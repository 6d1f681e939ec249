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

#include <cstdint>
#include <string>
#include <vector>

#include "budgetmech/model.hpp"

namespace budgetmech {

enum class Metric { kRevenue, kWelfare };

std::string to_string(Metric metric);

// Per-agent (value, budget) grid; misreports range over the same grid.
struct AuditGrid {
  std::vector<std::vector<TypePoint>> types;
  std::string description;
};

// Types of discretize(instance, grid_size).
AuditGrid make_audit_grid(const Instance& instance, int grid_size);

struct AuditReport {
  std::string property;
  bool pass = true;
  long long checked = 0;
  // Worst violation (or, on pass, the largest observed gain).
  int agent = -1;
  TypePoint truth{0.0, 0.0, 0.0};
  TypePoint misreport{0.0, 0.0, 0.0};
  double gain = 0.0;
  std::string grid;
  std::string detail;
};

inline constexpr double kAuditTol = 1e-6;

// Ex-post over opponents' grid profiles, in expectation over the mechanism's
// randomness (expected()). A misreport whose payment may exceed the true
// budget yields the budget-violated utility.
AuditReport audit_dsic(const Mechanism& mech, const AuditGrid& grid, double tol = kAuditTol);
// Interim, in expectation over opponents' grid types.
AuditReport audit_bic(const Mechanism& mech, const AuditGrid& grid, double tol = kAuditTol);
// Interim utility of truth nonnegative.
AuditReport audit_interim_ir(const Mechanism& mech, const AuditGrid& grid, double tol = kAuditTol);

// Truthful runs on profiles sampled from the instance.
AuditReport audit_epir(const Mechanism& mech, const Instance& instance, long long n_runs, std::uint64_t seed);
AuditReport audit_budget(const Mechanism& mech, const Instance& instance, long long n_runs, std::uint64_t seed);

TypeProfile sample_profile(const Instance& instance, Rng& rng);
double metric_of(Metric metric, const Outcome& outcome, const TypeProfile& truth);

struct PerfEstimate {
  Metric metric = Metric::kRevenue;
  double mean = 0.0;
  double half_width = 0.0;  // 1.96 standard errors
  long long samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr long long kEstimateChunk = 1024;

// Samples are drawn in fixed chunks, chunk c from derive_seed(seed, c), and
// merged in chunk order, so the result does not depend on the thread count.
// threads = 0 uses the hardware concurrency.
PerfEstimate estimate(const Mechanism& mech, const Instance& instance, Metric metric, long long n_samples,
                      std::uint64_t seed, int threads = 0);

// Exact expectation over a discrete instance using expected().
double evaluate_exact(const Mechanism& mech, const Instance& instance, Metric metric);

}  // namespace budgetmech
