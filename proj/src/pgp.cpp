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

#include "rivuq/pgp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rivuq/parallel.hpp"

namespace rivuq {

namespace {

SnapshotSet canonical_order(const SnapshotSet& snapshots) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(snapshots.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::MatrixXd& x = snapshots.inputs;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (x(a, j) != x(b, j)) return x(a, j) < x(b, j);
    return false;
  });
  SnapshotSet sorted;
  sorted.inputs.resize(x.rows(), x.cols());
  sorted.outputs.resize(snapshots.outputs.rows(), snapshots.outputs.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted.inputs.row(static_cast<Eigen::Index>(k)) = x.row(order[k]);
    sorted.outputs.row(static_cast<Eigen::Index>(k)) = snapshots.outputs.row(order[k]);
  }
  return sorted;
}

}  // namespace

PgpSurrogate fit_pgp(const SnapshotSet& snapshots, const DesignBox& box, const GpFitOptions& options, int workers) {
  snapshots.validate();
  if (box.dim() != snapshots.inputs.cols()) throw std::invalid_argument("fit_pgp: design box dimension mismatch");

  const SnapshotSet sorted = canonical_order(snapshots);
  PgpSurrogate pgp;
  pgp.box = box;
  pgp.inputs = sorted.inputs;
  pgp.mean = sorted.mean();
  pgp.basis = pod_decompose(sorted);

  const Eigen::MatrixXd unit = box.to_unit_rows(sorted.inputs);
  const Eigen::Index r = pgp.basis.rank();
  pgp.modes.resize(static_cast<std::size_t>(r));
  std::vector<std::string> failures(static_cast<std::size_t>(r));
  parallel_for(r, workers, [&](Eigen::Index i) {
    const auto slot = static_cast<std::size_t>(i);
    try {
      pgp.modes[slot] = gp_fit_mode(unit, pgp.basis.mode_samples.row(i).transpose(), options);
    } catch (const GpFitError& e) {
      failures[slot] = e.what();
    }
  });

  std::ostringstream msg;
  bool failed = false;
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (failures[i].empty()) continue;
    msg << (failed ? "; " : "") << "mode " << i << ": " << failures[i];
    failed = true;
  }
  if (failed) throw GpFitError("fit_pgp: " + msg.str());
  return pgp;
}

Eigen::MatrixXd eval_pgp_rows(const PgpSurrogate& pgp, const Eigen::Ref<const Eigen::MatrixXd>& points) {
  if (points.cols() != pgp.box.dim()) throw std::invalid_argument("eval_pgp: input dimension mismatch");
  const Eigen::MatrixXd train = pgp.box.to_unit_rows(pgp.inputs);
  const Eigen::Index r = pgp.basis.rank();
  Eigen::MatrixXd out(points.rows(), pgp.outputs());
  // Blocks bound the size of the distance matrix, which is shared by all modes.
  constexpr Eigen::Index kBlock = 2048;
  for (Eigen::Index start = 0; start < points.rows(); start += kBlock) {
    const Eigen::Index rows = std::min(kBlock, points.rows() - start);
    const Eigen::MatrixXd d2 = squared_distances(pgp.box.to_unit_rows(points.middleRows(start, rows)), train);
    Eigen::MatrixXd amplitudes(rows, r);
    for (Eigen::Index i = 0; i < r; ++i) {
      const GpMode& mode = pgp.modes[static_cast<std::size_t>(i)];
      if (mode.trivial) {
        amplitudes.col(i).setZero();
      } else {
        amplitudes.col(i) = kernel_from_distances(d2, mode.hyper.length_scale) * mode.beta;
      }
    }
    out.middleRows(start, rows) = amplitudes * pgp.basis.modes.transpose();
  }
  out.rowwise() += pgp.mean.transpose();
  return out;
}

Eigen::VectorXd eval_pgp(const PgpSurrogate& pgp, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return eval_pgp_rows(pgp, x.transpose()).row(0).transpose();
}

}  // namespace rivuq
