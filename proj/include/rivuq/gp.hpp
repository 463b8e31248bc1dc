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

#ifndef RIVUQ_GP_HPP_
#define RIVUQ_GP_HPP_

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rivuq {

/// exp(-|x - y|^2 / (2 l^2)).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar sq_exp_kernel(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y,
                                        typename DerivedA::Scalar length_scale) {
  using std::exp;
  using Scalar = typename DerivedA::Scalar;
  return exp(-(x - y).squaredNorm() / (Scalar(2) * length_scale * length_scale));
}

/// Pairwise squared distances between the rows of `a` (n x d) and `b` (m x d).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> squared_distances(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d2(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) d2(i, j) = (a.row(i) - b.row(j)).squaredNorm();
  return d2;
}

/// Squared-exponential kernel matrix from precomputed squared distances.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> kernel_from_distances(
    const Eigen::MatrixBase<Derived>& d2, typename Derived::Scalar length_scale) {
  using Scalar = typename Derived::Scalar;
  return (-d2.array() / (Scalar(2) * length_scale * length_scale)).exp().matrix();
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kernel_matrix(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b, typename DerivedA::Scalar length_scale) {
  return kernel_from_distances(squared_distances(a, b), length_scale);
}

/// Covariance sigma^2 (Pi + tau^2 I): the nugget is relative to the signal
/// variance, so the dual weights beta = (Pi + tau^2 I)^-1 y do not depend on
/// sigma^2.
struct GpHyperparameters {
  double length_scale = 0.3;
  double signal_variance = 1.0;
  double nugget = 1e-8;
};

struct Interval {
  double lower;
  double upper;
};

struct GpBounds {
  Interval length_scale{1e-2, 1e1};
  Interval signal_variance{1e-8, 1e4};
  Interval nugget{1e-10, 1e-2};
};

struct GpFitOptions {
  GpBounds bounds;
  int restarts = 8;
  int max_iterations = 80;
  double max_jitter = 1e-6;
};

struct LogLikelihood {
  double value = 0.0;
  /// d/d(log l), d/d(log sigma^2), d/d(log tau^2).
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
  /// Diagonal jitter that was needed on top of tau^2 for the factorization.
  double jitter = 0.0;
};

class GpFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gaussian log marginal likelihood of targets y under covariance
/// sigma^2 (Pi + tau^2 I), Pi built from the squared distances `d2`.
LogLikelihood gp_log_likelihood(const Eigen::MatrixXd& d2, const Eigen::VectorXd& y, const GpHyperparameters& hyper,
                                double max_jitter = 1e-6);

/// One GP regressor over inputs already mapped to the unit box.
struct GpMode {
  GpHyperparameters hyper;
  Eigen::MatrixXd inputs;   // N x d, unit coordinates
  Eigen::VectorXd beta;     // N, in target units
  double target_scale = 0;  // RMS of the targets the fit was run on
  double log_likelihood = 0;
  double jitter = 0;
  bool trivial = false;  // targets identically zero

  Eigen::Index size() const { return inputs.rows(); }
};

/// Conditions on the data at fixed hyperparameters (targets are not
/// rescaled).
GpMode gp_condition(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const GpHyperparameters& hyper,
                    double max_jitter = 1e-6);

/// Maximum-likelihood fit. Targets are divided by their RMS, sigma^2 is
/// profiled out in closed form, and (log l, log tau^2) are searched by BFGS
/// from `restarts` Halton starting points over the bound box.
GpMode gp_fit_mode(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const GpFitOptions& options = {});

double gp_predict_mode(const GpMode& mode, const Eigen::Ref<const Eigen::VectorXd>& x);
/// Predictions at the rows of `points` (unit coordinates).
Eigen::VectorXd gp_predict_rows(const GpMode& mode, const Eigen::Ref<const Eigen::MatrixXd>& points);

}  // namespace rivuq

#endif  // RIVUQ_GP_HPP_
