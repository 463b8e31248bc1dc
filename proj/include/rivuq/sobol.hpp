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

#ifndef RIVUQ_SOBOL_HPP_
#define RIVUQ_SOBOL_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rivuq/input_space.hpp"

namespace rivuq {

/// Per-output first-order and total Sobol' indices, M x d. Outputs with zero
/// variance carry NaN and `defined[s] == false`.
struct SobolIndices {
  Eigen::MatrixXd first;
  Eigen::MatrixXd total;
  Eigen::VectorXd interaction;  // 1 - sum of first-order shares
  std::vector<bool> defined;
};

/// Maps an n x d input matrix to an n x M output matrix.
using BatchEvaluator = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

struct MartinezEstimate {
  SobolIndices indices;
  Eigen::MatrixXd first_lower, first_upper;
  Eigen::MatrixXd total_lower, total_upper;
  double confidence = 0.95;
  Eigen::Index sample_size = 0;
  Eigen::Index evaluations = 0;  // n (d + 2)
};

/// Correlation-coefficient pick-freeze estimator (Martinez).
///
/// A and B are independent n x d samples; C_i is B with column i taken from A.
/// S_i = corr(f(A), f(C_i)) because A and C_i share only x_i, and
/// S_Ti = 1 - corr(f(B), f(C_i)) because B and C_i share everything but x_i.
/// Confidence intervals come from Fisher's z transform with n - 3 degrees of
/// freedom. All n (d + 2) points go to the evaluator in a single batch.
MartinezEstimate martinez_sobol(const BatchEvaluator& evaluator, const InputSpace& space, Eigen::Index n,
                                std::uint64_t seed, double confidence = 0.95);

/// Pearson correlation and its Fisher-z interval. NaN when either side has no
/// variance.
struct CorrelationInterval {
  double value;
  double lower;
  double upper;
};
CorrelationInterval correlation_with_interval(const Eigen::Ref<const Eigen::VectorXd>& a,
                                              const Eigen::Ref<const Eigen::VectorXd>& b, double confidence);

}  // namespace rivuq

#endif  // RIVUQ_SOBOL_HPP_
