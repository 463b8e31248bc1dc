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

#include "rivuq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rivuq/parallel.hpp"

namespace rivuq {

namespace {

void require_positive_depth(double depth) {
  if (!(depth > 0.0)) throw std::domain_error("water depth must be positive");
}

// Linear interpolation in a strictly increasing table.
double interpolate(const std::vector<CrossSectionGeometry>& sections, double a_km,
                   double CrossSectionGeometry::*field) {
  if (a_km <= sections.front().abscissa_km) return sections.front().*field;
  if (a_km >= sections.back().abscissa_km) return sections.back().*field;
  const auto upper = std::upper_bound(sections.begin(), sections.end(), a_km,
                                      [](double a, const CrossSectionGeometry& s) { return a < s.abscissa_km; });
  const auto lower = upper - 1;
  const double t = (a_km - lower->abscissa_km) / (upper->abscissa_km - lower->abscissa_km);
  return (1.0 - t) * ((*lower).*field) + t * ((*upper).*field);
}

}  // namespace

double friction_slope(double discharge, double depth, double strickler, double width) {
  require_positive_depth(depth);
  if (!(strickler > 0.0) || !(width > 0.0)) throw std::domain_error("Strickler and width must be positive");
  const double area = width * depth;
  const double radius = area / (width + 2.0 * depth);
  return discharge * discharge / (strickler * strickler * area * area * radius * std::cbrt(radius));
}

double froude_squared(double discharge, double depth, double width, double gravity) {
  require_positive_depth(depth);
  return discharge * discharge / (gravity * width * width * depth * depth * depth);
}

double normal_depth(double discharge, double strickler, double width, double slope) {
  if (!(discharge > 0.0) || !(strickler > 0.0) || !(width > 0.0) || !(slope > 0.0))
    throw std::domain_error("normal depth needs positive discharge, Strickler, width and slope");
  const double conveyance = strickler * std::sqrt(slope);
  auto carried = [&](double h) {
    const double area = width * h;
    return conveyance * area * std::cbrt(std::pow(area / (width + 2.0 * h), 2));
  };
  // Wide-channel guess, then Newton on log-discharge (monotone, concave).
  double h = std::pow(discharge / (conveyance * width), 0.6);
  for (int iter = 0; iter < 100; ++iter) {
    const double q = carried(h);
    const double dlnq_dlnh = 1.0 + (2.0 / 3.0) * (1.0 - 2.0 * h / (width + 2.0 * h));
    const double step = std::log(discharge / q) / dlnq_dlnh;
    h *= std::exp(step);
    if (std::abs(step) < 1e-15) break;
  }
  return h;
}

std::size_t FrictionZones::zone_of(double abscissa_km) const {
  const auto it = std::upper_bound(bounds_km.begin() + 1, bounds_km.end() - 1, abscissa_km);
  return static_cast<std::size_t>(it - (bounds_km.begin() + 1));
}

double RatingCurve::depth(double discharge) const {
  if (!(discharge > 0.0)) throw std::domain_error("rating curve needs positive discharge");
  return coefficient * std::pow(discharge, exponent);
}

RatingCurve calibrate_rating_curve(double reference_discharge, double strickler, double width, double slope) {
  const double h = normal_depth(reference_discharge, strickler, width, slope);
  const double dlnq_dlnh = 1.0 + (2.0 / 3.0) * (1.0 - 2.0 * h / (width + 2.0 * h));
  RatingCurve rc;
  rc.exponent = 1.0 / dlnq_dlnh;
  rc.coefficient = h / std::pow(reference_discharge, rc.exponent);
  return rc;
}

TranscriticalFlowError::TranscriticalFlowError(double abscissa_km, double froude2)
    : std::runtime_error("transcritical flow: Fr^2 = " + std::to_string(froude2) + " at a = " +
                         std::to_string(abscissa_km) + " km"),
      abscissa_km_(abscissa_km),
      froude2_(froude2) {}

ChannelModel::ChannelModel(std::vector<CrossSectionGeometry> sections, FrictionZones friction,
                           RatingCurve rating, ChannelOptions options)
    : sections_(std::move(sections)), friction_(std::move(friction)), rating_(rating), options_(options) {
  if (sections_.size() < 2) throw std::invalid_argument("channel needs at least two cross-sections");
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    if (!(sections_[i].width_m > 0.0)) throw std::invalid_argument("cross-section width must be positive");
    if (i > 0 && !(sections_[i].abscissa_km > sections_[i - 1].abscissa_km))
      throw std::invalid_argument("cross-section abscissas must be strictly increasing");
  }
  if (friction_.bounds_km.size() != friction_.strickler.size() + 1 || friction_.strickler.empty())
    throw std::invalid_argument("friction zones need one more bound than coefficients");
  if (friction_.random_zone >= friction_.strickler.size()) throw std::invalid_argument("random zone out of range");
  if (std::abs(friction_.bounds_km.front() - upstream_km()) > 1e-9 ||
      std::abs(friction_.bounds_km.back() - downstream_km()) > 1e-9)
    throw std::invalid_argument("friction zones must partition the reach");
  for (std::size_t i = 0; i < friction_.strickler.size(); ++i) {
    if (!(friction_.bounds_km[i + 1] > friction_.bounds_km[i])) throw std::invalid_argument("empty friction zone");
    if (i != friction_.random_zone && !(friction_.strickler[i] > 0.0))
      throw std::invalid_argument("Strickler coefficients must be positive");
  }
  if (!(rating_.coefficient > 0.0) || !(rating_.exponent > 0.0))
    throw std::invalid_argument("rating curve must be strictly increasing");
  if (!(options_.grid_step_m > 0.0) || options_.station_count < 1)
    throw std::invalid_argument("invalid grid step or station count");

  const double length_m = (downstream_km() - upstream_km()) * 1000.0;
  const double steps_real = length_m / options_.grid_step_m;
  const auto steps = static_cast<Eigen::Index>(std::llround(steps_real));
  if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real)
    throw std::invalid_argument("grid step must divide the reach length");

  grid_km_.resize(steps + 1);
  grid_bed_.resize(steps + 1);
  for (Eigen::Index k = 0; k <= steps; ++k) {
    grid_km_(k) = upstream_km() + static_cast<double>(k) * options_.grid_step_m / 1000.0;
    grid_bed_(k) = bed_elevation(grid_km_(k));
  }
  grid_km_(steps) = downstream_km();

  step_slope_.resize(steps);
  step_width_.resize(steps);
  step_zone_.resize(static_cast<std::size_t>(steps));
  for (Eigen::Index k = 0; k < steps; ++k) {
    const double mid = 0.5 * (grid_km_(k) + grid_km_(k + 1));
    step_slope_(k) = (grid_bed_(k) - grid_bed_(k + 1)) / options_.grid_step_m;
    step_width_(k) = width(mid);
    step_zone_[static_cast<std::size_t>(k)] = friction_.zone_of(mid);
  }

  const int m = options_.station_count;
  stations_km_.resize(m);
  const double spacing = (downstream_km() - upstream_km()) / m;
  for (int k = 0; k < m; ++k) stations_km_(k) = upstream_km() + (k + 0.5) * spacing;
}

double ChannelModel::bed_elevation(double abscissa_km) const {
  return interpolate(sections_, abscissa_km, &CrossSectionGeometry::bed_elevation_m);
}

double ChannelModel::width(double abscissa_km) const {
  return interpolate(sections_, abscissa_km, &CrossSectionGeometry::width_m);
}

Eigen::Index ChannelModel::nearest_station(double abscissa_km) const {
  Eigen::Index best = 0;
  (stations_km_.array() - abscissa_km).abs().minCoeff(&best);
  return best;
}

BackwaterSolution ChannelModel::solve(double discharge, double random_strickler) const {
  if (!(discharge > 0.0)) throw std::domain_error("discharge must be positive");
  if (!(random_strickler > 0.0)) throw std::domain_error("Strickler coefficient must be positive");

  const Eigen::Index steps = step_slope_.size();
  const double g = options_.gravity;
  const double limit = 1.0 - options_.critical_margin;
  const double dx = -options_.grid_step_m;  // marching upstream

  BackwaterSolution out;
  out.abscissa_km = grid_km_;
  out.depth.resize(steps + 1);
  out.depth(steps) = rating_.depth(discharge);

  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    const double slope = step_slope_(k);
    const double w = step_width_(k);
    const std::size_t zone = step_zone_[static_cast<std::size_t>(k)];
    const double ks = zone == friction_.random_zone ? random_strickler : friction_.strickler[zone];

    auto rhs = [&](double h) {
      if (!(h > 0.0)) {
        std::ostringstream msg;
        msg << "non-positive depth " << h << " m near a = " << grid_km_(k) << " km";
        throw NonPositiveDepthError(msg.str());
      }
      const double fr2 = froude_squared(discharge, h, w, g);
      if (fr2 >= limit) throw TranscriticalFlowError(grid_km_(k), fr2);
      return (slope - friction_slope(discharge, h, ks, w)) / (1.0 - fr2);
    };

    const double h0 = out.depth(k + 1);
    const double k1 = rhs(h0);
    const double k2 = rhs(h0 + 0.5 * dx * k1);
    const double k3 = rhs(h0 + 0.5 * dx * k2);
    const double k4 = rhs(h0 + dx * k3);
    out.depth(k) = h0 + dx * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    if (!(out.depth(k) > 0.0)) throw NonPositiveDepthError("non-positive depth after integration step");
  }
  // Upstream node check.
  {
    const double fr2 = froude_squared(discharge, out.depth(0), step_width_(0), g);
    if (fr2 >= limit) throw TranscriticalFlowError(grid_km_(0), fr2);
  }

  out.elevation = grid_bed_ + out.depth;

  const Eigen::Index m = stations_km_.size();
  out.station_depth.resize(m);
  out.station_elevation.resize(m);
  const double step_km = options_.grid_step_m / 1000.0;
  for (Eigen::Index s = 0; s < m; ++s) {
    const double pos = (stations_km_(s) - upstream_km()) / step_km;
    auto lo = static_cast<Eigen::Index>(std::floor(pos + 1e-9));
    lo = std::clamp<Eigen::Index>(lo, 0, steps);
    const double t = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
    if (t < 1e-9 || lo == steps) {
      out.station_depth(s) = out.depth(lo);
      out.station_elevation(s) = out.elevation(lo);
    } else {
      out.station_depth(s) = (1.0 - t) * out.depth(lo) + t * out.depth(lo + 1);
      out.station_elevation(s) = (1.0 - t) * out.elevation(lo) + t * out.elevation(lo + 1);
    }
  }
  return out;
}

Eigen::VectorXd ChannelModel::station_levels(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != 2) throw std::invalid_argument("channel input is (Q, Ks)");
  return solve(x(0), x(1)).station_elevation;
}

Eigen::MatrixXd ChannelModel::evaluate(const Eigen::Ref<const Eigen::MatrixXd>& inputs, int workers) const {
  if (inputs.cols() != 2) throw std::invalid_argument("channel inputs must be n x 2 (Q, Ks)");
  Eigen::MatrixXd out(inputs.rows(), station_count());
  parallel_for(inputs.rows(), workers, [&](Eigen::Index k) {
    try {
      out.row(k) = solve(inputs(k, 0), inputs(k, 1)).station_elevation.transpose();
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "forward solve failed for (Q, Ks) = (" << inputs(k, 0) << ", " << inputs(k, 1) << "): " << e.what();
      throw std::runtime_error(msg.str());
    }
  });
  return out;
}

ChannelModel synthetic_channel(const SyntheticChannelSpec& spec) {
  const double length = spec.downstream_km - spec.upstream_km;
  const auto count = static_cast<long>(std::llround(length / spec.section_spacing_km));
  std::vector<CrossSectionGeometry> sections;
  sections.reserve(static_cast<std::size_t>(count + 1));
  for (long i = 0; i <= count; ++i) {
    const double a = i == count ? spec.downstream_km
                                : spec.upstream_km + static_cast<double>(i) * spec.section_spacing_km;
    double z = spec.outlet_bed_m + spec.mean_slope_m_per_km * (spec.downstream_km - a);
    for (const auto& bump : spec.bumps) {
      const double u = (a - bump.center_km) / bump.width_km;
      z += bump.amplitude_m * std::exp(-0.5 * u * u);
    }
    sections.push_back({a, z, spec.width_m});
  }
  FrictionZones zones{spec.zone_bounds_km, spec.strickler, spec.random_zone};
  const RatingCurve rc = calibrate_rating_curve(spec.rating_discharge, spec.rating_strickler, spec.width_m,
                                                spec.mean_slope_m_per_km / 1000.0);
  return ChannelModel(std::move(sections), std::move(zones), rc, spec.options);
}

}  // namespace rivuq
