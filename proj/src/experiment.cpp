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

#include "budgetmech/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "budgetmech/controls.hpp"
#include "budgetmech/harness.hpp"
#include "budgetmech/oracle.hpp"
#include "budgetmech/revenue_private.hpp"
#include "budgetmech/revenue_public.hpp"
#include "budgetmech/welfare.hpp"

namespace budgetmech {

using nlohmann::json;

namespace {

int int_param(const json& params, const char* key, int fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number_integer() || params[key].get<int>() < 1) {
    throw std::invalid_argument(std::string("mechanism.params.") + key + ": expected a positive integer");
  }
  return params[key].get<int>();
}

json report_json(const AuditReport& r) {
  return json{{"property", r.property}, {"pass", r.pass},   {"checked", r.checked},
              {"gain", r.gain},         {"grid", r.grid},   {"detail", r.detail}};
}

}  // namespace

std::shared_ptr<Mechanism> make_mechanism(const std::string& name, const json& params, const Instance& instance,
                                          int grid) {
  if (name == "capped_myerson") return capped_myerson(instance);
  if (name == "myerson") return myerson(instance);
  if (name == "optimal_single_agent") {
    if (instance.size() != 1 || !instance.all_public_budgets()) {
      throw std::invalid_argument("optimal_single_agent: needs one agent with a public budget");
    }
    const Agent& a = instance.agent(0);
    return optimal_single_agent(a.value, a.budget.amount(), int_param(params, "grid", grid)).mechanism;
  }
  if (name == "private_menu") {
    PrivateMenuParams p;
    p.value_grid = int_param(params, "value_grid", p.value_grid);
    p.budget_grid = int_param(params, "budget_grid", p.budget_grid);
    return private_menu_mechanism(instance, p);
  }
  if (name == "modified_vcg") return modified_vcg(instance);
  if (name == "iir_allpay") return to_iir_allpay(discretize(instance, grid));
  if (name == "welfare_via_revenue") return welfare_via_revenue(instance);
  if (name == "first_price") return std::make_shared<FirstPrice>(instance);
  if (name == "posted_price") {
    if (!params.contains("prices") || !params["prices"].is_array()) {
      throw std::invalid_argument("mechanism.params.prices: expected an array with one price per agent");
    }
    std::vector<double> prices;
    for (const auto& p : params["prices"]) {
      if (!p.is_number()) throw std::invalid_argument("mechanism.params.prices: expected numbers");
      prices.push_back(p.get<double>());
    }
    return std::make_shared<PostedPrice>(instance, std::move(prices));
  }
  if (name == "empty") return std::make_shared<EmptyMechanism>(instance);
  throw std::invalid_argument("unknown mechanism '" + name + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const Instance instance = cfg.instance();
  json audits = json::array();
  json oracle = json::array();
  auto row = [&](const std::string& mechanism, const std::string& metric, double value, double ci, long long samples) {
    result.rows.push_back({cfg.experiment_id, mechanism, metric, value, ci, samples, cfg.seed});
  };

  switch (cfg.action) {
    case Action::kRun: {
      const auto mech = make_mechanism(cfg.mechanism, cfg.mechanism_params, instance, cfg.grid);
      for (Metric m : {Metric::kRevenue, Metric::kWelfare}) {
        const PerfEstimate e = estimate(*mech, mech->instance(), m, cfg.samples, cfg.seed);
        row(mech->name(), to_string(m), e.mean, e.half_width, e.samples);
      }
      break;
    }
    case Action::kAudit: {
      const auto mech = make_mechanism(cfg.mechanism, cfg.mechanism_params, instance, cfg.grid);
      const AuditGrid grid = make_audit_grid(mech->instance(), cfg.grid);
      std::vector<std::pair<AuditReport, bool>> reports;  // report, gating
      if (mech->is_ex_post_ir()) {
        reports.push_back({audit_dsic(*mech, grid), true});
        reports.push_back({audit_bic(*mech, grid), true});
      } else {
        reports.push_back({audit_bic(*mech, grid), true});
        reports.push_back({audit_interim_ir(*mech, grid), true});
      }
      reports.push_back({audit_epir(*mech, mech->instance(), cfg.samples, cfg.seed), mech->is_ex_post_ir()});
      reports.push_back({audit_budget(*mech, mech->instance(), cfg.samples, cfg.seed), true});
      for (const auto& [r, gating] : reports) {
        json j = report_json(r);
        j["gating"] = gating;
        audits.push_back(j);
        row(mech->name(), "audit_" + r.property, r.pass ? 1.0 : 0.0, 0.0, r.checked);
        if (gating && !r.pass) result.exit_code = kExitAuditFailure;
      }
      break;
    }
    case Action::kOracle: {
      const Instance d = discretize(instance, cfg.grid);
      for (IrMode mode : cfg.oracle.modes) {
        const OracleResult o = optimal_bic(d, mode, cfg.oracle.objective, cfg.oracle.budget_scale);
        if (o.status != LpStatus::kOptimal) throw std::runtime_error("oracle LP: " + to_string(o.status));
        oracle.push_back({{"ir_mode", to_string(mode)},
                          {"objective", to_string(cfg.oracle.objective)},
                          {"value", o.value},
                          {"profiles", o.profiles.size()},
                          {"max_residual", o.max_residual}});
        row("oracle", to_string(cfg.oracle.objective) + "_" + to_string(mode), o.value, 0.0, 0);
      }
      break;
    }
    case Action::kCompare: {
      const Instance d = discretize(instance, cfg.grid);
      const auto mech = make_mechanism(cfg.mechanism, cfg.mechanism_params, d, cfg.grid);
      const double value = evaluate_exact(*mech, mech->instance(), cfg.metric);
      const Objective objective = cfg.metric == Metric::kRevenue ? Objective::kRevenue : Objective::kWelfare;
      const IrMode mode = cfg.oracle.modes.front();
      const OracleResult o = optimal_bic(d, mode, objective, cfg.oracle.budget_scale);
      if (o.status != LpStatus::kOptimal) throw std::runtime_error("oracle LP: " + to_string(o.status));
      const std::string metric = to_string(cfg.metric);
      row(mech->name(), metric, value, 0.0, 0);
      row("oracle", metric + "_" + to_string(mode), o.value, 0.0, 0);
      row(mech->name(), "ratio_" + metric + "_" + to_string(mode), o.value > 0.0 ? value / o.value : 0.0, 0.0, 0);
      oracle.push_back({{"ir_mode", to_string(mode)},
                        {"objective", to_string(objective)},
                        {"value", o.value},
                        {"max_residual", o.max_residual}});
      break;
    }
  }

  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"mechanism", r.mechanism},
                    {"metric", r.metric},
                    {"value", r.value},
                    {"ci_halfwidth", r.ci_halfwidth},
                    {"samples", r.samples},
                    {"seed", r.seed}});
  }
  result.detail = json{{"config", to_json(cfg)}, {"rows", rows}, {"exit_code", result.exit_code}};
  if (!audits.empty()) result.detail["audits"] = audits;
  if (!oracle.empty()) result.detail["oracle"] = oracle;
  return result;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = "experiment_id,mechanism,metric,value,ci_halfwidth,samples,seed\n";
  char buf[64];
  for (const auto& r : rows) {
    out += r.experiment_id + "," + r.mechanism + "," + r.metric + ",";
    std::snprintf(buf, sizeof buf, "%.12g", r.value);
    out += std::string(buf) + ",";
    std::snprintf(buf, sizeof buf, "%.12g", r.ci_halfwidth);
    out += std::string(buf) + "," + std::to_string(r.samples) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

void write_results(const ExperimentResult& result, const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto base = dir / cfg.experiment_id;
  std::ofstream csv(base.string() + ".csv", std::ios::binary);
  csv << format_csv(result.rows);
  std::ofstream detail(base.string() + ".json", std::ios::binary);
  detail << result.detail.dump(2) << "\n";
  if (!csv || !detail) throw std::runtime_error("cannot write results under " + dir.string());
}

}  // namespace budgetmech
