// Copyright 2026 The rivuq Authors.
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

// rivuq: batch driver for the surrogate comparison study.
//
//   rivuq reference --config study.json     Monte Carlo reference ensemble
//   rivuq fit       --config study.json     PC and pGP surrogates per budget
//   rivuq compare   --config study.json     statistics, metrics, plot data
//   rivuq report    --out DIR               print the summary tables
//   rivuq run       --config study.json     all of the above
//   rivuq config                            print the default configuration

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rivuq/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Override the reference seed");
  cmd->add_option("--workers", flags.workers, "Worker threads for forward solves and GP fits")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags.out, "Output directory");
}

rivuq::ExperimentConfig resolve(const CommonFlags& flags) {
  rivuq::ExperimentConfig config =
      flags.config_path.empty() ? rivuq::ExperimentConfig{} : rivuq::load_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.workers) config.workers = *flags.workers;
  if (!flags.out.empty()) config.out_dir = flags.out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial Chaos versus POD-Gaussian-process surrogates of a steady open-channel model"};
  app.set_version_flag("--version", std::string(rivuq::kVersion));
  app.require_subcommand(1);

  CommonFlags flags;
  auto* reference = app.add_subcommand("reference", "Generate the Monte Carlo reference ensemble");
  auto* fit = app.add_subcommand("fit", "Fit PC and pGP surrogates at every budget");
  auto* compare = app.add_subcommand("compare", "Compare the surrogates against the reference");
  auto* report = app.add_subcommand("report", "Print the summary tables of a finished comparison");
  auto* run = app.add_subcommand("run", "reference, fit and compare in sequence");
  auto* config = app.add_subcommand("config", "Print the effective configuration as JSON");
  for (auto* cmd : {reference, fit, compare, report, run, config}) add_common(cmd, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    const rivuq::ExperimentConfig cfg = resolve(flags);
    if (config->parsed()) {
      std::cout << rivuq::config_to_json(cfg).dump(2) << "\n";
    } else if (reference->parsed()) {
      rivuq::run_reference(cfg, &std::cerr);
    } else if (fit->parsed()) {
      rivuq::run_fit(cfg, &std::cerr);
    } else if (compare->parsed()) {
      std::cout << rivuq::format_report(rivuq::run_comparison(cfg, &std::cerr));
    } else if (report->parsed()) {
      const auto path = std::filesystem::path(cfg.out_dir) / "compare" / "summary.json";
      std::cout << rivuq::format_report(rivuq::read_json(path));
    } else if (run->parsed()) {
      rivuq::run_reference(cfg, &std::cerr);
      rivuq::run_fit(cfg, &std::cerr);
      std::cout << rivuq::format_report(rivuq::run_comparison(cfg, &std::cerr));
    }
  } catch (const std::exception& e) {
    std::cerr << "rivuq: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
