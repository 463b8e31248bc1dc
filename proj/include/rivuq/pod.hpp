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

#ifndef RIVUQ_POD_HPP_
#define RIVUQ_POD_HPP_

#include <Eigen/Dense>

namespace rivuq {

/// Training pairs: inputs N x d, outputs N x M (one snapshot per row).
struct SnapshotSet {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd outputs;

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::VectorXd mean() const;
  /// M x N matrix of snapshots minus their mean.
  Eigen::MatrixXd centred() const;
  /// Throws std::invalid_argument unless N >= 2, shapes agree, entries are
  /// finite and input rows are unique.
  void validate() const;
};

/// Thin SVD of the centred snapshot matrix Y = U diag(lambda) V^T, all
/// min(M, N) modes kept. Singular values are those of Y itself; the
/// eigenvalues of the snapshot correlation Y^T Y / N are lambda^2 / N.
///
/// Each column of U is signed so that its largest-magnitude entry is
/// positive (ties resolved by the lowest index).
struct PodBasis {
  Eigen::VectorXd singular_values;  // r, descending
  Eigen::MatrixXd modes;            // M x r, U
  Eigen::MatrixXd mode_samples;     // r x N, diag(lambda) V^T
  bool degenerate = false;          // centred snapshots are exactly zero

  Eigen::Index rank() const { return singular_values.size(); }
};

PodBasis pod_decompose(const SnapshotSet& snapshots);

}  // namespace rivuq

#endif  // RIVUQ_POD_HPP_
