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
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "rivuq/sampling.hpp"
#include "rivuq/sobol.hpp"
#include "rivuq/stats.hpp"

using namespace rivuq;

namespace {

std::vector<double> normal_draws(std::size_t n, std::uint64_t seed, double mean = 0.0, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(mean, sd);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

std::span<const double> span_of(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

InputSpace cube3() { return InputSpace({UniformLaw{-1.0, 1.0}, UniformLaw{-1.0, 1.0}, UniformLaw{-1.0, 1.0}}); }

double toy(double x1, double x2, double x3) { return x1 + 2.0 * x2 + x1 * x3; }

// Var(E[f | x_i]) / Var(f) by an outer midpoint grid and inner Monte Carlo.
double double_loop_first_order(int input) {
  const int outer = 400, inner = 2000;
  std::mt19937_64 rng(77 + input);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> conditional(outer);
  double all_sum = 0.0, all_sq = 0.0;
  for (int a = 0; a < outer; ++a) {
    const double fixed = -1.0 + (a + 0.5) * 2.0 / outer;
    double acc = 0.0;
    for (int b = 0; b < inner; ++b) {
      double x[3] = {u(rng), u(rng), u(rng)};
      x[input] = fixed;
      const double f = toy(x[0], x[1], x[2]);
      acc += f;
      all_sum += f;
      all_sq += f * f;
    }
    conditional[static_cast<std::size_t>(a)] = acc / inner;
  }
  const double total_n = static_cast<double>(outer) * inner;
  const double total_var = all_sq / total_n - (all_sum / total_n) * (all_sum / total_n);
  double mean = 0.0;
  for (double c : conditional) mean += c;
  mean /= outer;
  double var = 0.0;
  for (double c : conditional) var += (c - mean) * (c - mean);
  return var / outer / total_var;
}

}  // namespace

TEST_CASE("ensemble moments and correlation") {
  Eigen::MatrixXd e(4, 2);
  e << 1, 10, 2, 20, 3, 30, 4, 40;
  const Moments m = ensemble_moments(e);
  CHECK(m.mean(0) == 2.5);
  CHECK(m.mean(1) == 25.0);
  CHECK(m.stddev(0) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
  const Eigen::MatrixXd cov = ensemble_covariance(e);
  CHECK(cov(0, 1) == doctest::Approx(50.0 / 3.0).epsilon(1e-14));

  const auto z = normal_draws(1000, 3);
  Eigen::MatrixXd pair(1000, 3);
  for (Eigen::Index k = 0; k < 1000; ++k) pair.row(k) << z[static_cast<std::size_t>(k)], 2.0 * z[static_cast<std::size_t>(k)], 5.0;
  const CovarianceMatrices c = correlation_from_covariance(ensemble_covariance(pair));
  CHECK(c.correlation(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.correlation(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(c.zero_variance.size() == 1);
  CHECK(c.zero_variance[0] == 2);
  CHECK(std::isnan(c.correlation(2, 2)));
  CHECK_THROWS_AS(ensemble_moments(Eigen::MatrixXd::Ones(1, 3)), std::invalid_argument);
}

TEST_CASE("sample covariance is positive semi-definite") {
  const Eigen::MatrixXd x = mc_sample(discharge_friction_space(), 50, 4);
  Eigen::MatrixXd e(50, 6);
  e << x, x.col(0) + x.col(1), x.col(0) - 3.0 * x.col(1), x.col(1).array().square().matrix(), x.col(0) * 0.5;
  const Eigen::MatrixXd cov = ensemble_covariance(e);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * cov.trace());
}

TEST_CASE("rmse") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(5, 4);
  const Eigen::MatrixXd b = a.array() + 0.25;
  CHECK(rmse(a, b) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(rmse(a, a) == 0.0);
  CHECK_THROWS_AS(rmse(a, Eigen::MatrixXd::Zero(4, 4)), std::invalid_argument);
}

TEST_CASE("Martinez estimator on an additive model") {
  const InputSpace space({NormalLaw{0.0, 1.0}, NormalLaw{0.0, 1.0}});
  const auto f = [](const Eigen::MatrixXd& x) -> Eigen::MatrixXd { return x.col(0) + 2.0 * x.col(1); };
  const MartinezEstimate est = martinez_sobol(f, space, 20000, 5);
  CHECK(est.evaluations == 80000);
  CHECK(std::abs(est.indices.first(0, 0) - 0.2) < 0.02);
  CHECK(std::abs(est.indices.first(0, 1) - 0.8) < 0.02);
  CHECK(std::abs(est.indices.total(0, 0) - 0.2) < 0.02);
  CHECK(std::abs(est.indices.total(0, 1) - 0.8) < 0.02);
  for (int i = 0; i < 2; ++i) {
    CHECK(est.first_lower(0, i) <= est.indices.first(0, i));
    CHECK(est.indices.first(0, i) <= est.first_upper(0, i));
    CHECK(est.total_lower(0, i) <= est.indices.total(0, i));
    CHECK(est.indices.total(0, i) <= est.total_upper(0, i));
  }
}

TEST_CASE("Martinez estimator on a pure interaction") {
  const InputSpace space({UniformLaw{-1.0, 1.0}, UniformLaw{-1.0, 1.0}});
  const auto f = [](const Eigen::MatrixXd& x) -> Eigen::MatrixXd { return x.col(0).cwiseProduct(x.col(1)); };
  const MartinezEstimate est = martinez_sobol(f, space, 20000, 6);
  CHECK(std::abs(est.indices.first(0, 0)) < 0.03);
  CHECK(std::abs(est.indices.first(0, 1)) < 0.03);
  CHECK(std::abs(est.indices.total(0, 0) - 1.0) < 0.03);
  CHECK(std::abs(est.indices.total(0, 1) - 1.0) < 0.03);
}

TEST_CASE("Martinez estimator agrees with a double-loop oracle") {
  const auto f = [](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
    Eigen::MatrixXd y(x.rows(), 1);
    for (Eigen::Index k = 0; k < x.rows(); ++k) y(k, 0) = toy(x(k, 0), x(k, 1), x(k, 2));
    return y;
  };
  const MartinezEstimate est = martinez_sobol(f, cube3(), 40000, 7);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(est.indices.first(0, i) - double_loop_first_order(i)) < 0.02);
  // Closed form for x1 + 2 x2 + x1 x3: S = (3, 12, 0) / 16, S_T3 = 1 / 16.
  CHECK(std::abs(est.indices.first(0, 1) - 0.75) < 0.02);
  CHECK(std::abs(est.indices.total(0, 2) - 1.0 / 16.0) < 0.02);
}

TEST_CASE("Martinez confidence intervals shrink as 1 / sqrt(n)") {
  const auto f = [](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
    Eigen::MatrixXd y(x.rows(), 1);
    for (Eigen::Index k = 0; k < x.rows(); ++k) y(k, 0) = toy(x(k, 0), x(k, 1), x(k, 2));
    return y;
  };
  const MartinezEstimate small = martinez_sobol(f, cube3(), 2500, 8);
  const MartinezEstimate large = martinez_sobol(f, cube3(), 10000, 8);
  const double w_small = small.first_upper(0, 1) - small.first_lower(0, 1);
  const double w_large = large.first_upper(0, 1) - large.first_lower(0, 1);
  CHECK(w_large / w_small == doctest::Approx(0.5).epsilon(0.1));
  CHECK_THROWS_AS(martinez_sobol(f, cube3(), 99, 1), std::invalid_argument);
}

TEST_CASE("correlation interval uses the Fisher transform") {
  const auto a = normal_draws(403, 9);
  const auto noise = normal_draws(403, 10);
  Eigen::VectorXd x(403), y(403);
  for (Eigen::Index k = 0; k < 403; ++k) {
    x(k) = a[static_cast<std::size_t>(k)];
    y(k) = a[static_cast<std::size_t>(k)] + noise[static_cast<std::size_t>(k)];
  }
  const CorrelationInterval ci = correlation_with_interval(x, y, 0.95);
  const double half = 1.959963984540054 / std::sqrt(400.0);
  CHECK(ci.lower == doctest::Approx(std::tanh(std::atanh(ci.value) - half)).epsilon(1e-12));
  CHECK(ci.upper == doctest::Approx(std::tanh(std::atanh(ci.value) + half)).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
}

TEST_CASE("kernel density estimate of a standard normal") {
  const auto z = normal_draws(100000, 11);
  const DensityCurve pdf = kde_pdf(z, 512);
  REQUIRE(pdf.grid.size() == 512);
  Eigen::Index k0;
  pdf.grid.cwiseAbs().minCoeff(&k0);
  CHECK(std::abs(pdf.density(k0) - 1.0 / std::sqrt(2.0 * std::numbers::pi)) < 0.05 / std::sqrt(2.0 * std::numbers::pi));
  double mass = 0.0;
  for (Eigen::Index k = 0; k + 1 < pdf.grid.size(); ++k)
    mass += 0.5 * (pdf.density(k) + pdf.density(k + 1)) * (pdf.grid(k + 1) - pdf.grid(k));
  CHECK(mass >= 0.98);
  CHECK(mass <= 1.0 + 1e-9);
  CHECK(pdf.density.minCoeff() >= 0.0);

  std::vector<double> shifted(z);
  for (double& v : shifted) v += 7.5;
  const DensityCurve moved = kde_pdf(shifted, 512);
  CHECK(moved.bandwidth == doctest::Approx(pdf.bandwidth).epsilon(1e-12));
  CHECK((moved.grid.array() - 7.5 - pdf.grid.array()).abs().maxCoeff() < 1e-9);
  CHECK((moved.density - pdf.density).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("kernel density of a constant sample") {
  const std::vector<double> c(50, 3.0);
  const DensityCurve pdf = kde_pdf(c, 512);
  CHECK(pdf.degenerate);
  CHECK(pdf.density.maxCoeff() > 0.0);
  CHECK(pdf.grid(256) == 3.0);
}

TEST_CASE("Kolmogorov-Smirnov critical value and p-value") {
  CHECK(ks_critical_value(0.05) == 1.36);
  const auto a = normal_draws(100000, 12);
  const auto b = normal_draws(100000, 13);
  const KsResult r = ks_two_sample(a, b, 0.05);
  CHECK(r.threshold == doctest::Approx(6.082e-3).epsilon(1e-3));
  CHECK_FALSE(r.reject);
  CHECK(kolmogorov_survival(3.97e-3 * std::sqrt(5e4)) == doctest::Approx(0.409).epsilon(0.005));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(5.0) < 1e-15);

  const KsResult same = ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);

  const std::vector<double> low = {1.0, 2.0, 3.0}, high = {4.0, 5.0};
  CHECK(ks_two_sample(low, high).statistic == 1.0);

  std::vector<double> ea(a), eb(b);
  for (double& v : ea) v = std::exp(v);
  for (double& v : eb) v = std::exp(v);
  CHECK(ks_two_sample(ea, eb).statistic == r.statistic);

  const auto shifted = normal_draws(100000, 14, 0.05);
  CHECK(ks_two_sample(a, shifted).reject);
}

TEST_CASE("Q2 predictivity") {
  const Eigen::MatrixXd ref = mc_sample(discharge_friction_space(), 500, 15);
  CHECK(q2(ref, ref).mean == 1.0);
  const Eigen::MatrixXd flat = ref.colwise().mean().replicate(500, 1);
  CHECK(std::abs(q2(ref, flat).mean) < 1e-12);

  std::mt19937_64 rng(16);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd noise(500, 2);
  for (Eigen::Index k = 0; k < noise.size(); ++k) noise(k) = n(rng);
  double previous = 1.0;
  for (double level : {0.01, 0.1, 1.0, 10.0}) {
    Eigen::MatrixXd pred = ref;
    pred.col(1) += level * noise.col(1);
    const double value = q2(ref, pred).per_station(1);
    CHECK(value < previous);
    previous = value;
  }

  Eigen::MatrixXd with_flat(500, 2);
  with_flat << ref.col(0), Eigen::VectorXd::Constant(500, 2.0);
  const Q2Result undefined = q2(with_flat, with_flat);
  REQUIRE(undefined.undefined.size() == 1);
  CHECK(std::isnan(undefined.per_station(1)));
  CHECK(undefined.mean == 1.0);
}

TEST_CASE("quantiles of sorted samples") {
  const Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(11, 0.0, 10.0);
  CHECK(sorted_quantile(span_of(s), 0.5) == 5.0);
  CHECK(sorted_quantile(span_of(s), 0.25) == 2.5);
  CHECK(sorted_quantile(span_of(s), 1.0) == 10.0);
}
