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

#ifndef RIVUQ_STATS_HPP_
#define RIVUQ_STATS_HPP_

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace rivuq {

struct Moments {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
};

/// Column-wise sample mean and unbiased STD of an n x M ensemble.
template <typename Derived>
Moments ensemble_moments(const Eigen::MatrixBase<Derived>& ensemble) {
  const Eigen::Index n = ensemble.rows();
  if (n < 2) throw std::invalid_argument("ensemble moments need at least two members");
  Moments out;
  out.mean = ensemble.colwise().mean().transpose().template cast<double>();
  const Eigen::MatrixXd centred = ensemble.template cast<double>().rowwise() - out.mean.transpose();
  out.stddev = (centred.colwise().squaredNorm().transpose() / static_cast<double>(n - 1)).cwiseSqrt();
  return out;
}

/// Unbiased M x M sample covariance, (n - 1) divisor.
template <typename Derived>
Eigen::MatrixXd ensemble_covariance(const Eigen::MatrixBase<Derived>& ensemble) {
  const Eigen::Index n = ensemble.rows();
  if (n < 2) throw std::invalid_argument("ensemble covariance needs at least two members");
  const Eigen::RowVectorXd mean = ensemble.template cast<double>().colwise().mean();
  const Eigen::MatrixXd centred = ensemble.template cast<double>().rowwise() - mean;
  Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(n - 1);
  return 0.5 * (cov + cov.transpose());
}

struct CovarianceMatrices {
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd correlation;
  /// Stations with zero variance; their correlation rows/columns are NaN.
  std::vector<Eigen::Index> zero_variance;
};

CovarianceMatrices correlation_from_covariance(const Eigen::MatrixXd& covariance);

/// Root mean square difference over all entries (vectors or flattened
/// matrices).
template <typename DerivedA, typename DerivedB>
double rmse(const Eigen::MatrixBase<DerivedA>& values, const Eigen::MatrixBase<DerivedB>& reference) {
  if (values.rows() != reference.rows() || values.cols() != reference.cols())
    throw std::invalid_argument("rmse: shape mismatch");
  if (values.size() == 0) throw std::invalid_argument("rmse: empty input");
  return std::sqrt((values.template cast<double>() - reference.template cast<double>()).squaredNorm() /
                   static_cast<double>(values.size()));
}

struct DensityCurve {
  Eigen::VectorXd grid;
  Eigen::VectorXd density;
  double bandwidth = 0.0;
  bool degenerate = false;
};

/// Gaussian kernel density estimate with Silverman's bandwidth
/// 1.06 min(sd, IQR / 1.34) n^(-1/5) on `grid_points` evenly spaced points
/// spanning [min - 3 bw, max + 3 bw]. A zero-variance sample yields a spike
/// carrying unit mass and `degenerate` set.
DensityCurve kde_pdf(std::span<const double> samples, int grid_points = 512);

/// Linear-interpolation sample quantile of sorted data, p in [0, 1].
double sorted_quantile(std::span<const double> sorted, double p);

/// c(alpha) of the two-sample Kolmogorov-Smirnov rejection rule.
double ks_critical_value(double alpha);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;  // D = sup |F_n - G_m|
  double threshold = 0.0;  // c(alpha) sqrt((n + m) / (n m))
  double p_value = 1.0;    // asymptotic
  bool reject = false;
};

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

struct Q2Result {
  Eigen::VectorXd per_station;  // NaN where the reference has no variance
  double mean = std::numeric_limits<double>::quiet_NaN();
  std::vector<Eigen::Index> undefined;
};

/// Predictive coefficient 1 - sum (h - h_hat)^2 / sum (h - mean h)^2 per
/// column of two n x M ensembles.
Q2Result q2(const Eigen::Ref<const Eigen::MatrixXd>& reference, const Eigen::Ref<const Eigen::MatrixXd>& predicted);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace rivuq

#endif  // RIVUQ_STATS_HPP_
