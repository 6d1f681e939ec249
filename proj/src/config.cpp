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

#include "budgetmech/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace budgetmech {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& required(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing field");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity")) return kInfinity;
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

double nonnegative(const json& j, const std::string& path) {
  const double x = number(j, path);
  if (!(x >= 0.0)) throw ConfigError(path, "must be nonnegative");
  return x;
}

long long integer(const json& j, const std::string& path, long long min) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  const long long x = j.get<long long>();
  if (x < min) throw ConfigError(path, "must be at least " + std::to_string(min));
  return x;
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

json number_json(double x) { return std::isinf(x) ? json("inf") : json(x); }

Feasibility feasibility_from_json(const json& j, const std::string& path) {
  const json obj = j.is_string() ? json{{"kind", j}} : j;
  only_keys(obj, path, {"kind", "k", "sets"});
  const std::string kind = text(required(obj, path, "kind"), join(path, "kind"));
  try {
    if (kind == "single-item") return Feasibility::single_item();
    if (kind == "k-units") return Feasibility::k_units(static_cast<int>(integer(required(obj, path, "k"), join(path, "k"), 1)));
    if (kind == "explicit") {
      const json& sets = required(obj, path, "sets");
      if (!sets.is_array()) throw ConfigError(join(path, "sets"), "expected an array of index lists");
      std::vector<AgentSet> family;
      for (std::size_t k = 0; k < sets.size(); ++k) {
        const std::string p = join(path, "sets") + "[" + std::to_string(k) + "]";
        if (!sets[k].is_array()) throw ConfigError(p, "expected an array of agent indices");
        std::vector<int> idx;
        for (std::size_t m = 0; m < sets[k].size(); ++m) {
          idx.push_back(static_cast<int>(integer(sets[k][m], p + "[" + std::to_string(m) + "]", 0)));
        }
        family.push_back(make_set(idx));
      }
      return Feasibility::explicit_family(std::move(family));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join(path, "kind"), "unknown feasibility '" + kind + "' (single-item, k-units, explicit)");
}

json to_json(const Feasibility& f) {
  switch (f.kind()) {
    case Feasibility::Kind::kSingleItem:
      return json{{"kind", "single-item"}};
    case Feasibility::Kind::kKUnits:
      return json{{"kind", "k-units"}, {"k", f.units()}};
    case Feasibility::Kind::kExplicit: {
      json sets = json::array();
      for (AgentSet s : f.sets()) sets.push_back(members(s));
      return json{{"kind", "explicit"}, {"sets", sets}};
    }
  }
  return json();
}

}  // namespace

std::string to_string(Action action) {
  switch (action) {
    case Action::kRun:
      return "run";
    case Action::kAudit:
      return "audit";
    case Action::kOracle:
      return "oracle";
    case Action::kCompare:
      return "compare";
  }
  return "unknown";
}

Action parse_action(const std::string& t) {
  if (t == "run") return Action::kRun;
  if (t == "audit") return Action::kAudit;
  if (t == "oracle") return Action::kOracle;
  if (t == "compare") return Action::kCompare;
  throw ConfigError("action", "unknown action '" + t + "' (run, audit, oracle, compare)");
}

const std::vector<std::string>& mechanism_names() {
  static const std::vector<std::string> names{"capped_myerson", "myerson",     "optimal_single_agent",
                                              "private_menu",   "modified_vcg", "iir_allpay",
                                              "welfare_via_revenue", "first_price", "posted_price",
                                              "empty"};
  return names;
}

Distribution distribution_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::string kind = text(required(j, path, "kind"), join(path, "kind"));
  try {
    if (kind == "discrete") {
      only_keys(j, path, {"kind", "support", "pmf"});
      return Distribution::discrete(numbers(required(j, path, "support"), join(path, "support")),
                                    numbers(required(j, path, "pmf"), join(path, "pmf")));
    }
    if (kind == "atom") {
      only_keys(j, path, {"kind", "v"});
      return Distribution::atom(nonnegative(required(j, path, "v"), join(path, "v")));
    }
    if (kind == "uniform") {
      only_keys(j, path, {"kind", "lo", "hi"});
      return Distribution::uniform(number(required(j, path, "lo"), join(path, "lo")),
                                   number(required(j, path, "hi"), join(path, "hi")));
    }
    if (kind == "exponential") {
      only_keys(j, path, {"kind", "rate", "cap"});
      const double cap = j.contains("cap") ? number(j.at("cap"), join(path, "cap")) : kInfinity;
      return Distribution::exponential(number(required(j, path, "rate"), join(path, "rate")), cap);
    }
    if (kind == "piecewise") {
      only_keys(j, path, {"kind", "knots"});
      const json& knots = required(j, path, "knots");
      if (!knots.is_array()) throw ConfigError(join(path, "knots"), "expected an array of [x, cdf] pairs");
      std::vector<CdfKnot> out;
      for (std::size_t k = 0; k < knots.size(); ++k) {
        const std::string p = join(path, "knots") + "[" + std::to_string(k) + "]";
        const std::vector<double> pair = numbers(knots[k], p);
        if (pair.size() != 2) throw ConfigError(p, "expected [x, cdf]");
        out.push_back({pair[0], pair[1]});
      }
      return Distribution::piecewise_linear(std::move(out));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join(path, "kind"),
                    "unknown distribution '" + kind + "' (discrete, atom, uniform, exponential, piecewise)");
}

json to_json(const Distribution& d) {
  switch (d.kind()) {
    case DistributionKind::kDiscrete:
      return json{{"kind", "discrete"}, {"support", d.support()}, {"pmf", d.pmf()}};
    case DistributionKind::kUniform:
      return json{{"kind", "uniform"}, {"lo", d.uniform_lo()}, {"hi", d.uniform_hi()}};
    case DistributionKind::kExponential: {
      json j{{"kind", "exponential"}, {"rate", d.exponential_rate()}};
      if (std::isfinite(d.exponential_cap())) j["cap"] = d.exponential_cap();
      return j;
    }
    case DistributionKind::kPiecewiseLinearCdf: {
      json knots = json::array();
      for (const auto& k : d.knots()) knots.push_back({k.x, k.cdf});
      return json{{"kind", "piecewise"}, {"knots", knots}};
    }
  }
  return json();
}

ExperimentConfig parse_config(const std::string& source) {
  json root;
  try {
    root = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  only_keys(root, "",
            {"experiment_id", "action", "seed", "samples", "grid", "instance", "mechanism", "oracle", "metric", "output"});
  ExperimentConfig cfg;
  cfg.experiment_id = text(required(root, "", "experiment_id"), "experiment_id");
  if (cfg.experiment_id.empty() ||
      !std::all_of(cfg.experiment_id.begin(), cfg.experiment_id.end(),
                   [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'; })) {
    throw ConfigError("experiment_id", "use letters, digits, '_', '-' or '.'");
  }
  if (root.contains("action")) cfg.action = parse_action(text(root["action"], "action"));
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("samples")) cfg.samples = integer(root["samples"], "samples", 100);
  if (root.contains("grid")) cfg.grid = static_cast<int>(integer(root["grid"], "grid", 1));

  const json& inst = required(root, "", "instance");
  only_keys(inst, "instance", {"feasibility", "agents"});
  cfg.feasibility = inst.contains("feasibility") ? feasibility_from_json(inst["feasibility"], "instance.feasibility")
                                                 : Feasibility::single_item();
  const json& agents = required(inst, "instance", "agents");
  if (!agents.is_array() || agents.empty()) throw ConfigError("instance.agents", "expected a nonempty array");
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const std::string path = "instance.agents[" + std::to_string(k) + "]";
    only_keys(agents[k], path, {"value", "budget", "count"});
    Distribution value = distribution_from_json(required(agents[k], path, "value"), path + ".value");
    const json& b = required(agents[k], path, "budget");
    only_keys(b, path + ".budget", {"mode", "B", "dist"});
    const std::string mode = text(required(b, path + ".budget", "mode"), path + ".budget.mode");
    std::optional<BudgetSpec> budget;
    if (mode == "public") {
      budget = BudgetSpec::public_budget(nonnegative(required(b, path + ".budget", "B"), path + ".budget.B"));
    } else if (mode == "private") {
      Distribution d = distribution_from_json(required(b, path + ".budget", "dist"), path + ".budget.dist");
      if (d.support_min() < 0.0) throw ConfigError(path + ".budget.dist", "budget support must be nonnegative");
      budget = BudgetSpec::private_budget(std::move(d));
    } else {
      throw ConfigError(path + ".budget.mode", "unknown budget mode '" + mode + "' (public, private)");
    }
    const long long count = agents[k].contains("count") ? integer(agents[k]["count"], path + ".count", 1) : 1;
    if (value.support_min() < 0.0) throw ConfigError(path + ".value", "values must be nonnegative");
    for (long long c = 0; c < count; ++c) cfg.agents.push_back({value, *budget});
  }
  try {
    (void)cfg.instance();
  } catch (const std::exception& e) {
    throw ConfigError("instance", e.what());
  }

  const json& mech = required(root, "", "mechanism");
  only_keys(mech, "mechanism", {"name", "params"});
  cfg.mechanism = text(required(mech, "mechanism", "name"), "mechanism.name");
  const auto& names = mechanism_names();
  if (std::find(names.begin(), names.end(), cfg.mechanism) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("mechanism.name", "unknown mechanism '" + cfg.mechanism + "'; valid names: " + list);
  }
  if (mech.contains("params")) {
    if (!mech["params"].is_object()) throw ConfigError("mechanism.params", "expected an object");
    cfg.mechanism_params = mech["params"];
  }

  if (root.contains("oracle")) {
    const json& o = root["oracle"];
    only_keys(o, "oracle", {"ir_mode", "objective", "budget_scale"});
    if (o.contains("ir_mode")) {
      const std::string m = text(o["ir_mode"], "oracle.ir_mode");
      if (m == "both") {
        cfg.oracle.modes = {IrMode::kEpir, IrMode::kIir};
      } else if (m == "EPIR") {
        cfg.oracle.modes = {IrMode::kEpir};
      } else if (m == "IIR") {
        cfg.oracle.modes = {IrMode::kIir};
      } else {
        throw ConfigError("oracle.ir_mode", "unknown mode '" + m + "' (both, EPIR, IIR)");
      }
    }
    if (o.contains("objective")) {
      const std::string m = text(o["objective"], "oracle.objective");
      if (m == "revenue") {
        cfg.oracle.objective = Objective::kRevenue;
      } else if (m == "welfare") {
        cfg.oracle.objective = Objective::kWelfare;
      } else {
        throw ConfigError("oracle.objective", "unknown objective '" + m + "' (revenue, welfare)");
      }
    }
    if (o.contains("budget_scale")) cfg.oracle.budget_scale = nonnegative(o["budget_scale"], "oracle.budget_scale");
  }
  if (root.contains("metric")) {
    const std::string m = text(root["metric"], "metric");
    if (m == "revenue") {
      cfg.metric = Metric::kRevenue;
    } else if (m == "welfare") {
      cfg.metric = Metric::kWelfare;
    } else {
      throw ConfigError("metric", "unknown metric '" + m + "' (revenue, welfare)");
    }
  }
  if (root.contains("output")) cfg.output = text(root["output"], "output");
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json agents = json::array();
  for (const auto& a : cfg.agents) {
    json budget = a.budget.is_public() ? json{{"mode", "public"}, {"B", number_json(a.budget.amount())}}
                                       : json{{"mode", "private"}, {"dist", to_json(a.budget.distribution())}};
    agents.push_back({{"value", to_json(a.value)}, {"budget", budget}});
  }
  std::string mode = "both";
  if (cfg.oracle.modes.size() == 1) mode = to_string(cfg.oracle.modes[0]);
  json out{{"experiment_id", cfg.experiment_id},
           {"action", to_string(cfg.action)},
           {"seed", cfg.seed},
           {"samples", cfg.samples},
           {"grid", cfg.grid},
           {"instance", {{"feasibility", to_json(cfg.feasibility)}, {"agents", agents}}},
           {"mechanism", {{"name", cfg.mechanism}, {"params", cfg.mechanism_params}}},
           {"oracle",
            {{"ir_mode", mode},
             {"objective", to_string(cfg.oracle.objective)},
             {"budget_scale", cfg.oracle.budget_scale}}},
           {"metric", to_string(cfg.metric)}};
  if (!cfg.output.empty()) out["output"] = cfg.output;
  return out;
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

}  // namespace budgetmech
