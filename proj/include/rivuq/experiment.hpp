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

#ifndef RIVUQ_EXPERIMENT_HPP_
#define RIVUQ_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rivuq/channel.hpp"
#include "rivuq/gp.hpp"
#include "rivuq/input_space.hpp"
#include "rivuq/pc.hpp"
#include "rivuq/pgp.hpp"
#include "rivuq/sampling.hpp"
#include "rivuq/serialize.hpp"

namespace rivuq {

inline constexpr const char* kVersion = "0.1.0";

struct ChannelConfig {
  SyntheticChannelSpec synthetic;
  /// When set, cross-sections are read from this CSV instead of being
  /// generated; friction zones and options still come from `synthetic`.
  std::string geometry_file;
  /// Explicit rating curve; calibrated from `synthetic` when absent.
  std::optional<RatingCurve> rating;
};

/// Everything that defines a run. Defaults reproduce the documented study.
struct ExperimentConfig {
  std::uint64_t seed = 20260419;  // reference ensemble; the Sobol' designs use seed + 1
  Eigen::Index n_reference = 20000;
  std::vector<int> budgets = {49, 121, 256};
  Eigen::Index sobol_samples = 10000;
  double alpha = 0.05;
  double station_of_interest_km = 36.0;
  int kde_points = 512;
  int workers = 1;
  std::string out_dir = "rivuq-out";
  InputSpace inputs = discharge_friction_space();
  DesignBox design_box = discharge_friction_box();
  ChannelConfig channel;
  GpFitOptions gp;

  std::uint64_t sobol_seed() const { return seed + 1; }
};

Json config_to_json(const ExperimentConfig& config);
/// Missing keys take their defaults; unknown keys and out-of-range values
/// throw std::invalid_argument naming the offending key.
ExperimentConfig config_from_json(const Json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Hash of the result-relevant configuration (excludes workers and out_dir).
std::string config_hash(const ExperimentConfig& config);

/// P with (P + 1)^dim == budget; otherwise throws std::invalid_argument
/// naming the nearest valid budgets.
int pc_order_for_budget(int budget, int dim);

ChannelModel build_channel(const ExperimentConfig& config);

struct ReferenceRun {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd outputs;
  Eigen::Index forward_solves = 0;
};

/// N_ref forward solves on a Monte Carlo sample. Writes inputs.csv,
/// outputs.csv, geometry.csv and metadata.json under <out>/reference.
ReferenceRun run_reference(const ExperimentConfig& config, std::ostream* log = nullptr);

struct FitRun {
  std::vector<int> budgets;
  std::vector<PcSurrogate> pc;
  std::vector<PgpSurrogate> pgp;
  std::vector<Eigen::Index> pc_solves;
  std::vector<Eigen::Index> pgp_solves;
};

/// Fits both surrogates at every budget and writes designs, surrogate
/// documents, PC coefficients and POD spectra under <out>/fit.
FitRun run_fit(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Compares the stored surrogates against the stored reference and writes
/// summary.json, report_<surrogate>_<N>.json, corr_mse.csv, sobol_error.csv
/// and pdf_sNN.csv under <out>/compare. Returns the summary document.
Json run_comparison(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Human-readable tables from a summary document.
std::string format_report(const Json& summary);

}  // namespace rivuq

#endif  // RIVUQ_EXPERIMENT_HPP_
