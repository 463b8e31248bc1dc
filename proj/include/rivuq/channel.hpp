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

#ifndef RIVUQ_CHANNEL_HPP_
#define RIVUQ_CHANNEL_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rivuq {

// Rectangular section helpers. Depth h in m, width W in m.

/// Manning-Strickler friction slope Q^2 / (Ks^2 A^2 R^(4/3)).
double friction_slope(double discharge, double depth, double strickler, double width);

/// Q^2 W / (g A^3) = Q^2 / (g W^2 h^3) for a rectangular section.
double froude_squared(double discharge, double depth, double width, double gravity = 9.81);

/// Depth at which uniform flow carries `discharge` on bed slope `slope`.
double normal_depth(double discharge, double strickler, double width, double slope);

struct CrossSectionGeometry {
  double abscissa_km = 0.0;
  double bed_elevation_m = 0.0;
  double width_m = 0.0;
};

/// Piecewise-constant Strickler coefficients. bounds_km has one more entry
/// than strickler; zone i covers [bounds_km[i], bounds_km[i+1]]. The value of
/// the random zone is supplied per solve and its entry here is ignored.
struct FrictionZones {
  std::vector<double> bounds_km;
  std::vector<double> strickler;
  std::size_t random_zone = 0;

  std::size_t zone_of(double abscissa_km) const;
};

/// h_out = coefficient * Q^exponent at the downstream end.
struct RatingCurve {
  double coefficient = 1.0;
  double exponent = 0.6;

  double depth(double discharge) const;
};

/// Power law matching the normal depth and its discharge sensitivity at
/// (reference_discharge, strickler) for a uniform rectangular sub-reach.
RatingCurve calibrate_rating_curve(double reference_discharge, double strickler, double width, double slope);

class TranscriticalFlowError : public std::runtime_error {
 public:
  TranscriticalFlowError(double abscissa_km, double froude2);
  double abscissa_km() const { return abscissa_km_; }
  double froude_squared() const { return froude2_; }

 private:
  double abscissa_km_;
  double froude2_;
};

class NonPositiveDepthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BackwaterSolution {
  Eigen::VectorXd abscissa_km;  // grid, upstream to downstream
  Eigen::VectorXd depth;
  Eigen::VectorXd elevation;
  Eigen::VectorXd station_depth;
  Eigen::VectorXd station_elevation;
};

struct ChannelOptions {
  double grid_step_m = 50.0;
  int station_count = 14;
  double gravity = 9.81;
  double critical_margin = 0.01;
};

/// Steady gradually varied flow in a prismatic rectangular reach.
///
/// The backwater ODE dh/da = (S0 - Sf) / (1 - Fr^2) is marched upstream from
/// the rating-curve depth at a_out with fixed-step RK4. Within a grid step the
/// bed slope is the chord slope of the interpolated bed, and width and
/// Strickler coefficient are taken at the step midpoint, so cross-sections
/// and zone bounds falling on grid nodes are resolved exactly.
///
/// Stations sit at cell centres a_in + (k + 1/2) L / M, k = 0..M-1.
/// Immutable after construction; solve() may be called concurrently.
class ChannelModel {
 public:
  ChannelModel(std::vector<CrossSectionGeometry> sections, FrictionZones friction, RatingCurve rating,
               ChannelOptions options = {});

  BackwaterSolution solve(double discharge, double random_strickler) const;

  /// Water elevations at the stations for x = (Q, Ks_random).
  Eigen::VectorXd station_levels(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Row-wise station_levels over an n x 2 input matrix.
  Eigen::MatrixXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& inputs, int workers = 1) const;

  double upstream_km() const { return sections_.front().abscissa_km; }
  double downstream_km() const { return sections_.back().abscissa_km; }
  const std::vector<CrossSectionGeometry>& sections() const { return sections_; }
  const FrictionZones& friction() const { return friction_; }
  const RatingCurve& rating() const { return rating_; }
  const ChannelOptions& options() const { return options_; }
  const Eigen::VectorXd& grid_km() const { return grid_km_; }
  const Eigen::VectorXd& stations_km() const { return stations_km_; }
  Eigen::Index station_count() const { return stations_km_.size(); }
  /// Index of the station closest to `abscissa_km`.
  Eigen::Index nearest_station(double abscissa_km) const;
  double bed_elevation(double abscissa_km) const;
  double width(double abscissa_km) const;

 private:
  std::vector<CrossSectionGeometry> sections_;
  FrictionZones friction_;
  RatingCurve rating_;
  ChannelOptions options_;

  Eigen::VectorXd grid_km_;
  Eigen::VectorXd grid_bed_;
  // Per step k covering [grid_km_[k], grid_km_[k+1]].
  Eigen::VectorXd step_slope_;
  Eigen::VectorXd step_width_;
  std::vector<std::size_t> step_zone_;
  Eigen::VectorXd stations_km_;
};

struct BedBump {
  double center_km = 36.0;
  double amplitude_m = 0.0;
  double width_km = 1.0;  // Gaussian standard deviation
};

/// Parameters of the synthetic lowland reach.
struct SyntheticChannelSpec {
  double upstream_km = 13.0;
  double downstream_km = 62.0;
  double width_m = 250.0;
  double mean_slope_m_per_km = 0.6;
  double outlet_bed_m = 10.0;
  double section_spacing_km = 0.25;
  std::vector<BedBump> bumps = {{33.5, 1.5, 2.0}, {36.5, -1.5, 2.0}};
  std::vector<double> zone_bounds_km = {13.0, 24.5, 36.0, 62.0};
  std::vector<double> strickler = {38.0, 38.0, 37.5};
  std::size_t random_zone = 2;
  double rating_discharge = 4031.0;
  double rating_strickler = 37.5;
  ChannelOptions options;
};

ChannelModel synthetic_channel(const SyntheticChannelSpec& spec);

}  // namespace rivuq

#endif  // RIVUQ_CHANNEL_HPP_
