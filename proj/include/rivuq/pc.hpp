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

#ifndef RIVUQ_PC_HPP_
#define RIVUQ_PC_HPP_

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rivuq/input_space.hpp"
#include "rivuq/quadrature.hpp"
#include "rivuq/sobol.hpp"
#include "rivuq/stats.hpp"

namespace rivuq {

/// Total-degree multi-index set {i : |i| <= order} in graded-lexicographic
/// order: by total degree, then by decreasing first component. Row 0 is the
/// constant term.
class MultiIndexBasis {
 public:
  MultiIndexBasis() = default;
  MultiIndexBasis(std::vector<PolyFamily> families, int order);
  static MultiIndexBasis for_space(const InputSpace& space, int order);

  int order() const { return order_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(families_.size()); }
  Eigen::Index size() const { return indices_.rows(); }
  const std::vector<PolyFamily>& families() const { return families_; }
  /// size() x dim() matrix of degrees.
  const Eigen::MatrixXi& indices() const { return indices_; }

  /// Psi_j(z) for all j at one standardized point.
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  /// n x size() design matrix at standardized points (rows).
  Eigen::MatrixXd evaluate_rows(const Eigen::Ref<const Eigen::MatrixXd>& z) const;

 private:
  std::vector<PolyFamily> families_;
  int order_ = 0;
  Eigen::MatrixXi indices_;
};

/// Number of multi-indices of total degree <= order in `dim` variables.
Eigen::Index total_degree_size(int dim, int order);

struct PcSurrogate {
  InputSpace space;
  MultiIndexBasis basis;
  Eigen::MatrixXd coefficients;  // M x size(), row a holds gamma_{a, .}

  Eigen::Index outputs() const { return coefficients.rows(); }
};

/// Spectral projection gamma_{a,j} = sum_k h_a(z_k) Psi_j(z_k) w_k.
/// `outputs` is N x M in the node order of `rule`.
PcSurrogate fit_pc(const Eigen::Ref<const Eigen::MatrixXd>& outputs, const QuadratureRule& rule,
                   const MultiIndexBasis& basis, const InputSpace& space);

/// Surrogate value at one physical point. Throws std::domain_error outside the
/// support of a bounded marginal.
Eigen::VectorXd eval_pc(const PcSurrogate& pc, const Eigen::Ref<const Eigen::VectorXd>& x);
/// n x M values at physical points (rows).
Eigen::MatrixXd eval_pc_rows(const PcSurrogate& pc, const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Mean gamma_0 and STD sqrt(sum_{j>0} gamma_j^2) per output.
Moments pc_moments(const PcSurrogate& pc);

/// cov(a, b) = sum_{j>0} gamma_{a,j} gamma_{b,j}, with the derived correlation.
CovarianceMatrices pc_covariance(const PcSurrogate& pc);

/// First-order and total indices from the variance split of the coefficients.
SobolIndices pc_sobol(const PcSurrogate& pc);

}  // namespace rivuq

#endif  // RIVUQ_PC_HPP_
