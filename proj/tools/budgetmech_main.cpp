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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "budgetmech/config.hpp"
#include "budgetmech/experiment.hpp"

namespace bm = budgetmech;

int main(int argc, char** argv) {
  CLI::App app{"Budget-constrained Bayesian mechanisms: run, audit, oracle, compare"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;

  for (const char* name : {"run", "audit", "oracle", "compare"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "overrides the config seed")->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--out", out_dir, "output directory (default: config output, else .)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? bm::kExitOk : bm::kExitConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  bm::ExperimentConfig cfg;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw bm::ConfigError("", "cannot read " + config_path);
    std::ostringstream text;
    text << in.rdbuf();
    cfg = bm::parse_config(text.str());
  } catch (const bm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return bm::kExitConfigError;
  }
  cfg.action = bm::parse_action(command);
  if (seed_given) cfg.seed = seed;
  if (out_dir.empty()) out_dir = cfg.output.empty() ? "." : cfg.output;

  bm::ExperimentResult result;
  try {
    result = bm::run_experiment(cfg);
    bm::write_results(result, cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bm::kExitConfigError;
  }
  std::cout << bm::format_csv(result.rows);
  return result.exit_code;
}
