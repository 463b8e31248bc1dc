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

#include "rivuq/pod.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rivuq {

Eigen::VectorXd SnapshotSet::mean() const { return outputs.colwise().mean().transpose(); }

Eigen::MatrixXd SnapshotSet::centred() const { return (outputs.rowwise() - outputs.colwise().mean()).transpose(); }

void SnapshotSet::validate() const {
  if (inputs.rows() < 2) throw std::invalid_argument("snapshot set needs at least two snapshots");
  if (outputs.rows() != inputs.rows()) throw std::invalid_argument("snapshot inputs and outputs differ in length");
  if (inputs.cols() < 1 || outputs.cols() < 1) throw std::invalid_argument("snapshot set has empty rows");
  if (!inputs.allFinite() || !outputs.allFinite()) throw std::invalid_argument("snapshot set has non-finite entries");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(inputs.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto row_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
      if (inputs(a, j) != inputs(b, j)) return inputs(a, j) < inputs(b, j);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!row_less(order[k - 1], order[k])) throw std::invalid_argument("snapshot set has duplicate input rows");
  }
}

PodBasis pod_decompose(const SnapshotSet& snapshots) {
  snapshots.validate();
  const Eigen::MatrixXd y = snapshots.centred();  // M x N
  const Eigen::Index r = std::min(y.rows(), y.cols());

  PodBasis pod;
  if (y.squaredNorm() == 0.0) {
    pod.degenerate = true;
    pod.singular_values = Eigen::VectorXd::Zero(r);
    pod.modes = Eigen::MatrixXd::Identity(y.rows(), r);
    pod.mode_samples = Eigen::MatrixXd::Zero(r, y.cols());
    return pod;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  pod.singular_values = svd.singularValues();
  pod.modes = svd.matrixU();
  Eigen::MatrixXd v = svd.matrixV();
  for (Eigen::Index i = 0; i < r; ++i) {
    Eigen::Index arg = 0;
    pod.modes.col(i).cwiseAbs().maxCoeff(&arg);
    if (pod.modes(arg, i) < 0.0) {
      pod.modes.col(i) *= -1.0;
      v.col(i) *= -1.0;
    }
  }
  pod.mode_samples = pod.singular_values.asDiagonal() * v.transpose();
  return pod;
}

}  // namespace rivuq
