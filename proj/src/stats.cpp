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

#include "rivuq/stats.hpp"

#include <algorithm>
#include <array>
#include <numbers>

namespace rivuq {

CovarianceMatrices correlation_from_covariance(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != covariance.cols()) throw std::invalid_argument("covariance must be square");
  CovarianceMatrices out;
  out.covariance = covariance;
  const Eigen::Index m = covariance.rows();
  Eigen::VectorXd sd(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    sd(i) = covariance(i, i) > 0.0 ? std::sqrt(covariance(i, i)) : 0.0;
    if (sd(i) == 0.0) out.zero_variance.push_back(i);
  }
  out.correlation.resize(m, m);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (sd(i) == 0.0 || sd(j) == 0.0) {
        out.correlation(i, j) = nan;
      } else if (i == j) {
        out.correlation(i, j) = 1.0;
      } else {
        out.correlation(i, j) = std::clamp(covariance(i, j) / (sd(i) * sd(j)), -1.0, 1.0);
      }
    }
  }
  return out;
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return (1.0 - t) * sorted[lo] + t * sorted[hi];
}

DensityCurve kde_pdf(std::span<const double> samples, int grid_points) {
  if (samples.size() < 2) throw std::invalid_argument("kde_pdf needs at least two samples");
  if (grid_points < 2) throw std::invalid_argument("kde_pdf needs at least two grid points");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  DensityCurve out;
  out.grid.resize(grid_points);
  out.density = Eigen::VectorXd::Zero(grid_points);
  if (!(sd > 0.0)) {
    out.degenerate = true;
    out.grid = Eigen::VectorXd::LinSpaced(grid_points, sorted.front() - 0.5, sorted.front() + 0.5);
    const double spacing = 1.0 / (grid_points - 1);
    out.density(grid_points / 2) = 1.0 / spacing;
    out.grid(grid_points / 2) = sorted.front();
    return out;
  }

  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  const double bw = 1.06 * spread * std::pow(n, -0.2);
  out.bandwidth = bw;
  out.grid = Eigen::VectorXd::LinSpaced(grid_points, sorted.front() - 3.0 * bw, sorted.back() + 3.0 * bw);

  // Kernel contributions beyond 8 bandwidths are below 1e-14 and skipped.
  const double cutoff = 8.0 * bw;
  const double norm = 1.0 / (n * bw * std::sqrt(2.0 * std::numbers::pi));
  for (int g = 0; g < grid_points; ++g) {
    const double x = out.grid(g);
    auto first = std::lower_bound(sorted.begin(), sorted.end(), x - cutoff);
    auto last = std::upper_bound(first, sorted.end(), x + cutoff);
    double acc = 0.0;
    for (auto it = first; it != last; ++it) {
      const double u = (x - *it) / bw;
      acc += std::exp(-0.5 * u * u);
    }
    out.density(g) = acc * norm;
  }
  return out;
}

double ks_critical_value(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  // Smirnov's tabulated values at the customary levels.
  static constexpr std::array<std::pair<double, double>, 6> table = {
      {{0.10, 1.22}, {0.05, 1.36}, {0.025, 1.48}, {0.01, 1.63}, {0.005, 1.73}, {0.001, 1.95}}};
  for (const auto& [level, c] : table)
    if (std::abs(alpha - level) < 1e-12) return c;
  return std::sqrt(-0.5 * std::log(0.5 * alpha));
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form, fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample needs non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto n = static_cast<double>(x.size());
  const auto m = static_cast<double>(y.size());

  // Exact sup over the merged sample; ties advance both sides together.
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }

  KsResult out;
  out.statistic = d;
  out.threshold = ks_critical_value(alpha) * std::sqrt((n + m) / (n * m));
  out.reject = d > out.threshold;
  out.p_value = kolmogorov_survival(std::sqrt(n * m / (n + m)) * d);
  return out;
}

Q2Result q2(const Eigen::Ref<const Eigen::MatrixXd>& reference, const Eigen::Ref<const Eigen::MatrixXd>& predicted) {
  if (reference.rows() != predicted.rows() || reference.cols() != predicted.cols())
    throw std::invalid_argument("q2: shape mismatch");
  if (reference.rows() < 2) throw std::invalid_argument("q2 needs at least two members");
  Q2Result out;
  const Eigen::Index m = reference.cols();
  out.per_station.resize(m);
  double acc = 0.0;
  Eigen::Index defined = 0;
  for (Eigen::Index s = 0; s < m; ++s) {
    const double mean = reference.col(s).mean();
    const double total = (reference.col(s).array() - mean).square().sum();
    if (!(total > 0.0)) {
      out.per_station(s) = std::numeric_limits<double>::quiet_NaN();
      out.undefined.push_back(s);
      continue;
    }
    out.per_station(s) = 1.0 - (reference.col(s) - predicted.col(s)).squaredNorm() / total;
    acc += out.per_station(s);
    ++defined;
  }
  if (defined > 0) out.mean = acc / static_cast<double>(defined);
  return out;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal quantile needs p in (0, 1)");
  double lo = -40.0, hi = 40.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::numbers::sqrt2);
    (cdf < p ? lo : hi) = mid;
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rivuq
