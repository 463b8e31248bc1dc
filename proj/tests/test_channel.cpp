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

#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "rivuq/channel.hpp"

using namespace rivuq;

namespace {

// Test-side hydraulics, written out independently of the library.
double oracle_conveyance(double h, double ks, double w) {
  const double area = w * h;
  const double radius = area / (w + 2.0 * h);
  return ks * area * std::pow(radius, 2.0 / 3.0);
}

double oracle_normal_depth(double q, double ks, double w, double slope) {
  double lo = 1e-6, hi = 100.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle_conveyance(mid, ks, w) * std::sqrt(slope) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double oracle_slope_of_depth(double h, double q, double ks, double w, double s0, double g) {
  const double area = w * h;
  const double radius = area / (w + 2.0 * h);
  const double sf = q * q / (ks * ks * area * area * std::pow(radius, 4.0 / 3.0));
  const double fr2 = q * q / (g * w * w * h * h * h);
  return (s0 - sf) / (1.0 - fr2);
}

struct UniformReach {
  double length_km = 10.0;
  double slope = 1e-3;
  double width = 120.0;
  double strickler = 30.0;
};

ChannelModel uniform_channel(const UniformReach& r, RatingCurve rating, ChannelOptions options = {}) {
  std::vector<CrossSectionGeometry> sections = {{0.0, 5.0 + r.slope * r.length_km * 1000.0, r.width},
                                                {r.length_km, 5.0, r.width}};
  FrictionZones zones{{0.0, r.length_km}, {r.strickler}, 0};
  return ChannelModel(std::move(sections), std::move(zones), rating, options);
}

}  // namespace

TEST_CASE("friction slope closed form") {
  const double expected = 200.0 * 200.0 / (30.0 * 30.0 * 200.0 * 200.0 * std::pow(200.0 / 104.0, 4.0 / 3.0));
  CHECK(friction_slope(200.0, 2.0, 30.0, 100.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(friction_slope(0.0, 2.0, 30.0, 100.0) == 0.0);
  CHECK(friction_slope(200.0, 2.0, 60.0, 100.0) ==
        doctest::Approx(friction_slope(200.0, 2.0, 30.0, 100.0) / 4.0).epsilon(1e-14));
  CHECK_THROWS_AS(friction_slope(200.0, 0.0, 30.0, 100.0), std::domain_error);
  CHECK_THROWS_AS(friction_slope(200.0, -1.0, 30.0, 100.0), std::domain_error);
}

TEST_CASE("Froude number of a rectangular section") {
  CHECK(froude_squared(0.0, 2.0, 100.0, 9.81) == 0.0);
  CHECK(froude_squared(200.0, 2.0, 100.0, 9.81) == doctest::Approx(0.050968).epsilon(1e-4));
  const double hc = std::cbrt(200.0 * 200.0 / (9.81 * 100.0 * 100.0));
  CHECK(froude_squared(200.0, hc, 100.0, 9.81) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(froude_squared(200.0, 0.0, 100.0), std::domain_error);
}

TEST_CASE("normal depth agrees with a bisection oracle") {
  for (double q : {50.0, 800.0, 4031.0}) {
    for (double ks : {15.0, 37.5, 60.0}) {
      const double h = normal_depth(q, ks, 250.0, 6e-4);
      CHECK(h == doctest::Approx(oracle_normal_depth(q, ks, 250.0, 6e-4)).epsilon(1e-12));
    }
  }
}

TEST_CASE("uniform channel with normal-depth outlet stays at normal depth") {
  const UniformReach reach;
  const double q = 350.0;
  const double hn = oracle_normal_depth(q, reach.strickler, reach.width, reach.slope);
  const double exponent = 0.6;
  const ChannelModel model = uniform_channel(reach, {hn / std::pow(q, exponent), exponent});
  const BackwaterSolution sol = model.solve(q, reach.strickler);
  REQUIRE(sol.depth.size() == 201);
  CHECK((sol.depth.array() - hn).abs().maxCoeff() < 1e-8);
  CHECK(sol.station_depth.size() == 14);
}

TEST_CASE("M1 backwater curve matches a fine-step reference integration") {
  const UniformReach reach;
  const double q = 350.0;
  const double g = 9.81;
  const double hn = oracle_normal_depth(q, reach.strickler, reach.width, reach.slope);
  const double h_out = hn + 1.5;
  const ChannelModel model = uniform_channel(reach, {h_out / q, 1.0});
  const BackwaterSolution sol = model.solve(q, reach.strickler);

  // Depth decreases monotonically toward h_n moving upstream.
  for (Eigen::Index k = 0; k + 1 < sol.depth.size(); ++k) CHECK(sol.depth(k) < sol.depth(k + 1));
  CHECK(sol.depth(0) > hn);
  CHECK(sol.depth(sol.depth.size() - 1) == h_out);

  // Test-side RK4 on the same 50 m grid, and a 1 m reference integration.
  auto f = [&](double h) { return oracle_slope_of_depth(h, q, reach.strickler, reach.width, reach.slope, g); };
  auto integrate = [&](double step_m) {
    std::vector<double> profile;
    double h = h_out;
    const int steps = static_cast<int>(std::lround(reach.length_km * 1000.0 / step_m));
    const int stride = static_cast<int>(std::lround(50.0 / step_m));
    for (int i = 0; i <= steps; ++i) {
      if (i % stride == 0) profile.push_back(h);
      const double ds = -step_m;
      const double k1 = f(h), k2 = f(h + 0.5 * ds * k1), k3 = f(h + 0.5 * ds * k2), k4 = f(h + ds * k3);
      h += ds / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return profile;
  };
  const std::vector<double> same = integrate(50.0), fine = integrate(1.0);
  REQUIRE(same.size() == static_cast<std::size_t>(sol.depth.size()));
  double same_err = 0.0, fine_err = 0.0;
  for (std::size_t i = 0; i < same.size(); ++i) {
    const double h = sol.depth(sol.depth.size() - 1 - static_cast<Eigen::Index>(i));
    same_err = std::max(same_err, std::abs(h - same[i]));
    fine_err = std::max(fine_err, std::abs(h - fine[i]));
  }
  CHECK(same_err < 1e-12);
  // Global RK4 error at 50 m steps stays within the grid-convergence tolerance.
  CHECK(fine_err < 1e-5);
}

TEST_CASE("synthetic reach layout") {
  const ChannelModel model = synthetic_channel({});
  REQUIRE(model.station_count() == 14);
  CHECK(model.upstream_km() == 13.0);
  CHECK(model.downstream_km() == 62.0);
  CHECK(model.stations_km()(0) == doctest::Approx(14.75));
  CHECK(model.stations_km()(13) == doctest::Approx(60.25));
  CHECK(model.nearest_station(36.0) == 6);
  CHECK(model.stations_km()(6) == doctest::Approx(35.75));
  CHECK(model.grid_km().size() == 981);
  CHECK(model.width(40.0) == 250.0);
}

TEST_CASE("downstream level equals the rating curve") {
  const ChannelModel model = synthetic_channel({});
  for (double q : {2500.0, 4031.0, 5500.0}) {
    const BackwaterSolution sol = model.solve(q, 40.0);
    CHECK(sol.depth(sol.depth.size() - 1) == model.rating().depth(q));
    CHECK(sol.elevation(sol.elevation.size() - 1) ==
          doctest::Approx(model.bed_elevation(62.0) + model.rating().depth(q)).epsilon(1e-15));
  }
}

TEST_CASE("station levels are monotone in discharge and friction") {
  const ChannelModel model = synthetic_channel({});
  const int n = 20;
  Eigen::MatrixXd levels(n * n, 14);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      levels.row(i * n + j) = model.station_levels(Eigen::Vector2d(2400.0 + 3200.0 * i / (n - 1), 15.0 + 45.0 * j / (n - 1)));
  for (int s = 0; s < 14; ++s) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i + 1 < n) CHECK(levels((i + 1) * n + j, s) > levels(i * n + j, s));
        if (j + 1 < n) CHECK(levels(i * n + j + 1, s) < levels(i * n + j, s));
      }
    }
  }
}

TEST_CASE("halving the grid step moves station levels by less than 1e-5 m") {
  SyntheticChannelSpec fine;
  fine.options.grid_step_m = 25.0;
  const ChannelModel coarse_model = synthetic_channel({});
  const ChannelModel fine_model = synthetic_channel(fine);
  for (const auto& x : {Eigen::Vector2d(2400.0, 60.0), Eigen::Vector2d(5600.0, 15.0), Eigen::Vector2d(4031.0, 37.5),
                        Eigen::Vector2d(5600.0, 60.0)}) {
    const double diff = (coarse_model.station_levels(x) - fine_model.station_levels(x)).cwiseAbs().maxCoeff();
    CHECK(diff < 1e-5);
  }
}

TEST_CASE("single discharge along the reach and concurrent evaluation") {
  const ChannelModel model = synthetic_channel({});
  Eigen::MatrixXd x(6, 2);
  x << 3000, 20, 3500, 30, 4000, 40, 4500, 50, 5000, 60, 4031, 37.5;
  const Eigen::MatrixXd serial = model.evaluate(x, 1);
  const Eigen::MatrixXd threaded = model.evaluate(x, 4);
  CHECK((serial.array() == threaded.array()).all());
  for (Eigen::Index k = 0; k < x.rows(); ++k)
    CHECK((model.station_levels(x.row(k).transpose()).array() == serial.row(k).transpose().array()).all());
}

TEST_CASE("supercritical configuration is rejected") {
  UniformReach steep;
  steep.slope = 0.01;
  steep.strickler = 60.0;
  const double q = 350.0;
  const double hn = oracle_normal_depth(q, steep.strickler, steep.width, steep.slope);
  REQUIRE(q * q / (9.81 * steep.width * steep.width * hn * hn * hn) > 1.0);
  const ChannelModel model = uniform_channel(steep, {hn / q, 1.0});
  CHECK_THROWS_AS(model.solve(q, steep.strickler), TranscriticalFlowError);

  Eigen::MatrixXd x(1, 2);
  x << q, steep.strickler;
  try {
    model.evaluate(x);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("350") != std::string::npos);
  }
}

TEST_CASE("invalid channel definitions") {
  const RatingCurve rc{0.1, 0.6};
  FrictionZones zones{{0.0, 10.0}, {30.0}, 0};
  CHECK_THROWS_AS(ChannelModel({{0.0, 10.0, 100.0}}, zones, rc), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel({{0.0, 10.0, 100.0}, {10.0, 5.0, 0.0}}, zones, rc), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel({{5.0, 10.0, 100.0}, {0.0, 5.0, 100.0}}, zones, rc), std::invalid_argument);
  FrictionZones gap{{0.0, 4.0}, {30.0}, 0};
  CHECK_THROWS_AS(ChannelModel({{0.0, 10.0, 100.0}, {10.0, 5.0, 100.0}}, gap, rc), std::invalid_argument);
  ChannelOptions odd;
  odd.grid_step_m = 33.0;
  CHECK_THROWS_AS(ChannelModel({{0.0, 10.0, 100.0}, {10.0, 5.0, 100.0}}, zones, rc, odd), std::invalid_argument);
}
