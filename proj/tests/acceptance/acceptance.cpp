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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "budgetmech/config.hpp"
#include "budgetmech/controls.hpp"
#include "budgetmech/experiment.hpp"
#include "budgetmech/harness.hpp"
#include "budgetmech/oracle.hpp"
#include "budgetmech/revenue_private.hpp"
#include "budgetmech/revenue_public.hpp"
#include "budgetmech/welfare.hpp"
#include "common/refcheck.hpp"

using namespace budgetmech;

namespace {

// Tolerances and budgets, one place.
constexpr double kGapTol = 1e-6;
constexpr double kGapSeconds = 10.0;
constexpr double kTopChoiceFactor = 0.75;
constexpr double kHalfBound = 0.5 + 1e-9;
constexpr double kTopChoiceSeconds = 1.0;
constexpr double kTradeoffSeconds = 60.0;
const double kMhrFactor = 1.0 / (2.0 * (1.0 + std::exp(1.0)));
constexpr double kMhrSeconds = 60.0;
constexpr double kSingleAgentTol = 1e-6;
constexpr double kPostedPriceBound = 0.16;
constexpr double kSingleAgentBaseline = 0.161511230469;
constexpr double kBaselineTol = 1e-9;
constexpr long long kEpirRuns = 20000;
constexpr double kIroningTol = 1e-8;
constexpr double kTailTol = 1e-12;
constexpr double kLpTol = 1e-9;
constexpr double kRandomLpTol = 1e-7;

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (!pass) detail += "; ";
    if (pass) detail.clear();
    pass = false;
    detail += what;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Instance iid(int n, const Distribution& d, double b, Feasibility f = Feasibility::single_item()) {
  return Instance(std::vector<Agent>(static_cast<std::size_t>(n), Agent{d, BudgetSpec::public_budget(b)}),
                  std::move(f));
}

struct WelfareFixture {
  std::string name;
  Instance instance;
};

std::vector<WelfareFixture> welfare_fixtures() {
  return {{"exp(1) x2 B=1", iid(2, discretize(Distribution::exponential(1.0), 8), 1.0)},
          {"U(0,1) x2 B=0.3", iid(2, discretize(Distribution::uniform(0.0, 1.0), 8), 0.3)},
          {"exp(2) x2 B=0.2", iid(2, discretize(Distribution::exponential(2.0), 8), 0.2)},
          {"U(0,1) x1 B=0.5", iid(1, discretize(Distribution::uniform(0.0, 1.0), 8), 0.5)}};
}

Verdict gap() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const Instance inst = epir_iir_gap_instance(4, 1.0);
  const auto epir = optimal_bic(inst, IrMode::kEpir, Objective::kRevenue);
  const auto iir = optimal_bic(inst, IrMode::kIir, Objective::kRevenue);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.detail = "EPIR=" + fmt("%.9f", epir.value) + " IIR=" + fmt("%.9f", iir.value) + " in " + fmt("%.3f", secs) + "s";
  v.require(epir.status == LpStatus::kOptimal && iir.status == LpStatus::kOptimal, "oracle not optimal");
  v.require(std::fabs(epir.value - 0.25) <= kGapTol, "EPIR revenue " + fmt("%.9f", epir.value) + " != 0.25");
  v.require(std::fabs(iir.value - 1.0) <= kGapTol, "IIR revenue " + fmt("%.9f", iir.value) + " != 1");
  v.require(secs < kGapSeconds, "runtime " + fmt("%.2f", secs) + "s");
  return v;
}

Verdict top_choice() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = Distribution::discrete({1.0, 2.0}, {0.5, 0.5});
  const Priors2 priors{{{d, d}, {d, d}}};
  double mech = 0.0;
  double best = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    Matrix2 m{};
    for (int k = 0; k < 4; ++k) m[static_cast<std::size_t>(k / 2)][static_cast<std::size_t>(k % 2)] = (mask >> k) & 1 ? 2.0 : 1.0;
    mech += topchoice_2x2(m, priors).welfare / 16.0;
    best += std::max(m[0][0] + m[1][1], m[0][1] + m[1][0]) / 16.0;
  }
  const double ratio = mech / best;

  // budget-ignoring fixture: with zero budgets every report is above the
  // budget, so the allocation cannot depend on values
  const auto lopsided = Distribution::discrete({0.01, 1.0}, {0.9, 0.1});
  const Instance blind = iid(4, lopsided, 0.0);
  const double blind_welfare = evaluate_exact(*modified_vcg(blind), blind, Metric::kWelfare);
  const double blind_opt = optimal_bic(iid(4, lopsided, kInfinity), IrMode::kEpir, Objective::kWelfare).value;
  const double blind_ratio = blind_welfare / blind_opt;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  v.detail = "top-choice " + fmt("%.6f", mech) + "/" + fmt("%.6f", best) + " = " + fmt("%.6f", ratio) +
             ", budget-ignoring ratio " + fmt("%.6f", blind_ratio) + " in " + fmt("%.3f", secs) + "s";
  v.require(ratio >= kTopChoiceFactor, "top-choice ratio " + fmt("%.6f", ratio) + " < 0.75");
  v.require(blind_ratio <= kHalfBound, "budget-ignoring ratio " + fmt("%.6f", blind_ratio) + " > 0.5");
  v.require(secs < kTopChoiceSeconds, "runtime " + fmt("%.2f", secs) + "s");
  return v;
}

Verdict tradeoff() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = kInfinity;
  int checked = 0;
  for (const auto& f : welfare_fixtures()) {
    const double w = evaluate_exact(*modified_vcg(f.instance), f.instance, Metric::kWelfare);
    for (double eps : {0.25, 0.5}) {
      const auto o = optimal_bic(f.instance, IrMode::kEpir, Objective::kWelfare, 1.0 - eps);
      const double target = eps * o.value;
      worst = std::min(worst, w / o.value);
      ++checked;
      v.require(o.status == LpStatus::kOptimal, f.name + ": oracle not optimal");
      v.require(w >= target, f.name + " eps=" + fmt("%.2f", eps) + ": " + fmt("%.6f", w) + " < " + fmt("%.6f", target));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (v.pass) {
    v.detail = std::to_string(checked) + " checks, min welfare/oracle(1-eps) " + fmt("%.6f", worst) + " in " +
               fmt("%.2f", secs) + "s";
  }
  v.require(secs < kTradeoffSeconds, "runtime " + fmt("%.2f", secs) + "s");
  return v;
}

Verdict mhr_factor() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = kInfinity;
  for (const auto& f : welfare_fixtures()) {
    v.require(is_mhr(f.instance.agent(0).value), f.name + ": not MHR");
    const double w = evaluate_exact(*welfare_via_revenue(f.instance), f.instance, Metric::kWelfare);
    const double o = optimal_bic(f.instance, IrMode::kEpir, Objective::kWelfare).value;
    worst = std::min(worst, w / o);
    v.require(w / o >= kMhrFactor, f.name + ": ratio " + fmt("%.6f", w / o));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (v.pass) {
    v.detail = "min ratio " + fmt("%.6f", worst) + " >= " + fmt("%.6f", kMhrFactor) + " in " + fmt("%.2f", secs) + "s";
  }
  v.require(secs < kMhrSeconds, "runtime " + fmt("%.2f", secs) + "s");
  return v;
}

Verdict single_agent() {
  Verdict v;
  struct Case {
    std::string name;
    Distribution d;
    double budget;
    int grid;
  };
  const std::vector<Case> cases{{"U(0,1) B=0.2", Distribution::uniform(0.0, 1.0), 0.2, 64},
                                {"exp(1) B=0.5", Distribution::exponential(1.0), 0.5, 16},
                                {"U(2,3) B=1", Distribution::uniform(2.0, 3.0), 1.0, 12},
                                {"{1,2,3} B=1.5", Distribution::discrete({1.0, 2.0, 3.0}, {0.2, 0.3, 0.5}), 1.5, 8},
                                {"exp(2) B=0.1", Distribution::exponential(2.0), 0.1, 32}};
  double worst = 0.0;
  double headline = 0.0;
  for (const auto& c : cases) {
    const auto s = optimal_single_agent(c.d, c.budget, c.grid);
    const auto o = optimal_bic(iid(1, s.grid, c.budget), IrMode::kEpir, Objective::kRevenue);
    const double diff = std::fabs(s.revenue - o.value);
    worst = std::max(worst, diff);
    v.require(diff <= kSingleAgentTol, c.name + ": LP " + fmt("%.9f", s.revenue) + " vs oracle " + fmt("%.9f", o.value));
    if (c.name == "U(0,1) B=0.2") headline = s.revenue;
  }
  v.require(headline > kPostedPriceBound, "uniform/B=0.2 revenue " + fmt("%.9f", headline) + " <= 0.16");
  v.require(std::fabs(headline - kSingleAgentBaseline) <= kBaselineTol,
            "uniform/B=0.2 revenue " + fmt("%.12f", headline) + " drifted from baseline");
  if (v.pass) {
    v.detail = "5 fixtures, max |LP - oracle| " + fmt("%.2e", worst) + ", uniform/B=0.2 revenue " +
               fmt("%.9f", headline) + " > 0.16";
  }
  return v;
}

Verdict audits() {
  Verdict v;
  int passed = 0;
  auto dsic_epir = [&](const std::string& name, const Mechanism& m, const Instance& inst, int grid) {
    const auto d = audit_dsic(m, make_audit_grid(inst, grid));
    const auto e = audit_epir(m, inst, kEpirRuns, 2026);
    const auto b = audit_budget(m, inst, kEpirRuns, 2026);
    v.require(d.pass, name + ": DSIC " + d.detail);
    v.require(e.pass, name + ": EPIR " + e.detail);
    v.require(b.pass, name + ": budget " + b.detail);
    passed += (d.pass ? 1 : 0) + (e.pass ? 1 : 0) + (b.pass ? 1 : 0);
  };

  const std::vector<WelfareFixture> publics{
      {"U(0,1) x2 B=0.1", iid(2, Distribution::uniform(0.0, 1.0), 0.1)},
      {"exp(1) x2 B=0.5", iid(2, Distribution::exponential(1.0), 0.5)},
      {"exp(1) x3 2-units B=0.4", iid(3, Distribution::exponential(1.0), 0.4, Feasibility::k_units(2))},
      {"U(0,1) x3 family B=0.3",
       iid(3, Distribution::uniform(0.0, 1.0), 0.3, Feasibility::explicit_family({0b000, 0b001, 0b010, 0b100, 0b011}))},
      {"gap n=4", epir_iir_gap_instance(4, 1.0)}};
  for (const auto& f : publics) {
    const int grid = f.instance.size() > 2 ? 5 : 8;
    dsic_epir("capped_myerson " + f.name, *capped_myerson(f.instance), f.instance, grid);
    dsic_epir("modified_vcg " + f.name, *modified_vcg(f.instance), f.instance, grid);
  }
  for (double budget : {0.2, 0.5}) {
    const auto s = optimal_single_agent(Distribution::uniform(0.0, 1.0), budget, 16);
    const Instance grid_inst = iid(1, s.grid, budget);
    const MenuMechanism on_grid(grid_inst, s.mechanism->menus(), "optimal_single_agent");
    dsic_epir("optimal_single_agent B=" + fmt("%.1f", budget), on_grid, grid_inst, 16);
  }
  const Distribution budgets = Distribution::discrete({0.5, 1.0}, {0.5, 0.5});
  const Agent priv{Distribution::exponential(1.0), BudgetSpec::private_budget(budgets)};
  for (int n : {1, 2}) {
    const Instance inst(std::vector<Agent>(static_cast<std::size_t>(n), priv), Feasibility::single_item());
    dsic_epir("private_menu x" + std::to_string(n), *private_menu_mechanism(inst), inst, 8);
  }

  for (const auto& f : welfare_fixtures()) {
    const auto m = to_iir_allpay(f.instance);
    const auto grid = make_audit_grid(f.instance, 8);
    const auto b = audit_bic(*m, grid);
    const auto ir = audit_interim_ir(*m, grid);
    v.require(b.pass, "iir_allpay " + f.name + ": BIC " + b.detail);
    v.require(ir.pass, "iir_allpay " + f.name + ": interim IR " + ir.detail);
    passed += (b.pass ? 1 : 0) + (ir.pass ? 1 : 0);
  }

  const Instance fp_inst = iid(2, Distribution::discrete({1.0, 2.0}, {0.5, 0.5}), kInfinity);
  const auto fp = audit_dsic(FirstPrice(fp_inst), make_audit_grid(fp_inst, 2));
  v.require(!fp.pass && fp.agent >= 0 && fp.gain > kAuditTol, "first_price passed DSIC");
  if (v.pass) {
    v.detail = std::to_string(passed) + " audits pass; first_price fails DSIC: agent " + std::to_string(fp.agent) +
               " value " + fmt("%g", fp.truth.value) + " reports " + fmt("%g", fp.misreport.value) + " gains " +
               fmt("%g", fp.gain);
  }
  return v;
}

Verdict private_structure() {
  Verdict v;
  struct Fixture {
    std::string name;
    Distribution value;
    Distribution budget;
    double floor;
  };
  const std::vector<Fixture> fixtures{
      {"exp(1) / {0.5,1}", discretize(Distribution::exponential(1.0), 16),
       Distribution::discrete({0.5, 1.0}, {0.5, 0.5}), 0.98},
      {"U(2,3) / {0.25,0.5,1}", discretize(Distribution::uniform(2.0, 3.0), 16),
       Distribution::discrete({0.25, 0.5, 1.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}), 0.99}};
  std::string ratios;
  for (const auto& f : fixtures) {
    v.require(is_mhr(f.value), f.name + ": not MHR");
    const auto m = build_private_menu(f.value, f.budget);
    const auto s = check_menu_structure(m, private_audit_grid(f.value, f.budget));
    v.require(s.holds, f.name + ": " + std::to_string(s.violations) + " grid points choose another option");
    const Instance inst({Agent{f.value, BudgetSpec::private_budget(f.budget)}}, Feasibility::single_item());
    const auto o = optimal_bic(inst, IrMode::kEpir, Objective::kRevenue);
    const double ratio = m.revenue / o.value;
    v.require(ratio >= f.floor, f.name + ": revenue ratio " + fmt("%.6f", ratio) + " < " + fmt("%.2f", f.floor));
    ratios += (ratios.empty() ? "" : ", ") + f.name + " " + fmt("%.6f", ratio) + " (" + std::to_string(s.points) + " pts)";
  }
  if (v.pass) v.detail = "menu/oracle " + ratios;
  return v;
}

Verdict plumbing() {
  Verdict v;
  int lp_ok = 0;
  for (const auto& c : refcheck::lp_cases()) {
    const auto s = solve_lp(c.lp);
    bool ok = s.status == c.status;
    if (ok && c.status == LpStatus::kOptimal) {
      ok = std::fabs(s.value - c.value) <= kLpTol * std::max(1.0, std::fabs(c.value)) && s.max_residual <= kLpTol;
    }
    v.require(ok, "LP case '" + c.name + "'");
    lp_ok += ok ? 1 : 0;
  }
  std::mt19937_64 rng(7);
  int random_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto lp = refcheck::random_lp(rng, 2 + trial % 3, 1 + trial % 4);
    const auto brute = refcheck::vertex_enumeration(lp);
    const auto s = solve_lp(lp);
    const bool ok = brute.feasible ? s.status == LpStatus::kOptimal &&
                                         std::fabs(s.value - brute.value) <= kRandomLpTol * std::max(1.0, std::fabs(brute.value))
                                   : s.status == LpStatus::kInfeasible;
    v.require(ok, "random LP " + std::to_string(trial));
    random_ok += ok ? 1 : 0;
  }

  Rng draw(2026);
  double worst_iron = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x;
    std::vector<double> pmf;
    double at = 0.0;
    double total = 0.0;
    for (int k = 0; k < 100; ++k) {
      at += 0.05 + uniform01(draw);
      x.push_back(at);
      const double w = (k % 5 == 2 ? 8.0 : 1.0) * (0.1 + uniform01(draw));
      pmf.push_back(w);
      total += w;
    }
    for (double& p : pmf) p /= total;
    const RevenueCurve curve(Distribution::discrete(x, pmf));
    const auto expect = refcheck::brute_ironed(x, pmf);
    for (std::size_t k = 0; k < x.size(); ++k) {
      worst_iron = std::max(worst_iron, std::fabs(curve.ironed_virtual_value(x[k]) - expect[k]) / std::max(1.0, at));
    }
  }
  v.require(worst_iron <= kIroningTol, "ironing error " + fmt("%.2e", worst_iron));

  double worst_tail = 0.0;
  for (double b : {0.0, 0.1, 0.3, 0.5, 0.9}) {
    worst_tail = std::max(worst_tail, std::fabs(tail_expectation(Distribution::uniform(0.0, 1.0), b) - (b + 1.0) / 2.0));
  }
  for (double rate : {0.5, 1.0, 2.0}) {
    for (double b : {0.0, 0.25, 1.0, 3.0}) {
      worst_tail = std::max(worst_tail,
                            std::fabs(tail_expectation(Distribution::exponential(rate), b) - (b + 1.0 / rate)) / std::max(1.0, b));
    }
  }
  v.require(worst_tail <= kTailTol, "tail expectation error " + fmt("%.2e", worst_tail));
  if (v.pass) {
    v.detail = std::to_string(lp_ok) + "/20 LP cases, " + std::to_string(random_ok) +
               "/100 random LPs, ironing err " + fmt("%.1e", worst_iron) + ", tail err " + fmt("%.1e", worst_tail);
  }
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  Verdict v;
  const std::filesystem::path root = std::filesystem::temp_directory_path() / "budgetmech_acceptance";
  std::filesystem::remove_all(root);
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(BUDGETMECH_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const auto cfg = parse_config(slurp(entry.path()));
    for (const char* run : {"a", "b"}) write_results(run_experiment(cfg), cfg, root / run);
    for (const char* ext : {".csv", ".json"}) {
      const std::string name = cfg.experiment_id + ext;
      const std::string a = slurp(root / "a" / name);
      v.require(!a.empty() && a == slurp(root / "b" / name), name + " differs between runs");
      ++files;
    }
  }
  std::filesystem::remove_all(root);
  if (v.pass) v.detail = std::to_string(files) + " output files byte-identical across two runs";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"EPIR/IIR revenue gap", gap},
      {"top-choice welfare 3/4", top_choice},
      {"epsilon tradeoff", tradeoff},
      {"MHR welfare factor", mhr_factor},
      {"single-agent optimality", single_agent},
      {"incentive audits", audits},
      {"private-budget structure", private_structure},
      {"numerical plumbing", plumbing},
      {"determinism", determinism}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu %s: %s %s\n", k + 1, criteria[k].first.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
