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

#ifndef RIVUQ_PGP_HPP_
#define RIVUQ_PGP_HPP_

#include <vector>

#include <Eigen/Dense>

#include "rivuq/gp.hpp"
#include "rivuq/pod.hpp"
#include "rivuq/sampling.hpp"

namespace rivuq {

/// POD of the snapshots plus one GP per mode amplitude:
/// h(x) = mean + sum_i U_i psi_i(x).
struct PgpSurrogate {
  DesignBox box;           // inputs are mapped onto [0, 1]^d through this box
  Eigen::MatrixXd inputs;  // N x d physical, in canonical order
  Eigen::VectorXd mean;    // M
  PodBasis basis;
  std::vector<GpMode> modes;

  Eigen::Index outputs() const { return mean.size(); }
};

/// Snapshots are first sorted lexicographically by input row, so the fit
/// does not depend on the order in which they were supplied. Modes are
/// fitted concurrently on `workers` threads.
PgpSurrogate fit_pgp(const SnapshotSet& snapshots, const DesignBox& box, const GpFitOptions& options = {},
                     int workers = 1);

Eigen::VectorXd eval_pgp(const PgpSurrogate& pgp, const Eigen::Ref<const Eigen::VectorXd>& x);
/// n x M predictions at physical points (rows).
Eigen::MatrixXd eval_pgp_rows(const PgpSurrogate& pgp, const Eigen::Ref<const Eigen::MatrixXd>& points);

}  // namespace rivuq

#endif  // RIVUQ_PGP_HPP_
