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

#include "rivuq/pc.hpp"

#include <limits>
#include <sstream>

#include "rivuq/polynomials.hpp"

namespace rivuq {

namespace {

// All compositions of `degree` into `dim` parts, first component decreasing.
void append_degree(int dim, int degree, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == dim - 1) {
    prefix.push_back(degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int k = degree; k >= 0; --k) {
    prefix.push_back(k);
    append_degree(dim, degree - k, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

Eigen::Index total_degree_size(int dim, int order) {
  // C(dim + order, dim), accumulated exactly.
  Eigen::Index value = 1;
  for (int k = 1; k <= dim; ++k) value = value * (order + k) / k;
  return value;
}

MultiIndexBasis::MultiIndexBasis(std::vector<PolyFamily> families, int order)
    : families_(std::move(families)), order_(order) {
  if (families_.empty()) throw std::invalid_argument("basis needs at least one dimension");
  if (order < 0) throw std::invalid_argument("basis order must be >= 0");
  const int d = static_cast<int>(families_.size());
  std::vector<std::vector<int>> rows;
  std::vector<int> prefix;
  for (int degree = 0; degree <= order; ++degree) append_degree(d, degree, prefix, rows);
  indices_.resize(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (int i = 0; i < d; ++i) indices_(static_cast<Eigen::Index>(j), i) = rows[j][static_cast<std::size_t>(i)];
}

MultiIndexBasis MultiIndexBasis::for_space(const InputSpace& space, int order) {
  std::vector<PolyFamily> families;
  for (Eigen::Index i = 0; i < space.dim(); ++i) families.push_back(space.family(i));
  return MultiIndexBasis(std::move(families), order);
}

Eigen::VectorXd MultiIndexBasis::evaluate(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) throw std::invalid_argument("basis evaluation: dimension mismatch");
  const Eigen::Index d = dim();
  Eigen::MatrixXd univariate(order_ + 1, d);
  for (Eigen::Index i = 0; i < d; ++i)
    univariate.col(i) = orthonormal_poly_all<double>(families_[static_cast<std::size_t>(i)], order_, z(i));
  Eigen::VectorXd psi(size());
  for (Eigen::Index j = 0; j < size(); ++j) {
    double v = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) v *= univariate(indices_(j, i), i);
    psi(j) = v;
  }
  return psi;
}

Eigen::MatrixXd MultiIndexBasis::evaluate_rows(const Eigen::Ref<const Eigen::MatrixXd>& z) const {
  Eigen::MatrixXd out(z.rows(), size());
  for (Eigen::Index k = 0; k < z.rows(); ++k) out.row(k) = evaluate(z.row(k).transpose()).transpose();
  return out;
}

PcSurrogate fit_pc(const Eigen::Ref<const Eigen::MatrixXd>& outputs, const QuadratureRule& rule,
                   const MultiIndexBasis& basis, const InputSpace& space) {
  if (outputs.rows() != rule.size()) {
    std::ostringstream msg;
    msg << "fit_pc: " << outputs.rows() << " output rows for a rule with " << rule.size() << " nodes";
    throw std::invalid_argument(msg.str());
  }
  if (rule.standard_nodes.cols() != basis.dim() || space.dim() != basis.dim())
    throw std::invalid_argument("fit_pc: dimension mismatch between rule, basis and input space");
  if (rule.order != basis.order()) throw std::invalid_argument("fit_pc: rule order differs from basis order");
  if (!outputs.allFinite()) throw std::invalid_argument("fit_pc: non-finite model outputs");

  const Eigen::MatrixXd psi = basis.evaluate_rows(rule.standard_nodes);  // N x r
  PcSurrogate pc{space, basis, {}};
  pc.coefficients = outputs.transpose() * (rule.weights.asDiagonal() * psi);  // M x r
  return pc;
}

Eigen::VectorXd eval_pc(const PcSurrogate& pc, const Eigen::Ref<const Eigen::VectorXd>& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!pc.space.in_support(i, x(i))) {
      std::ostringstream msg;
      msg << "eval_pc: input " << i << " = " << x(i) << " outside the support of its law";
      throw std::domain_error(msg.str());
    }
  }
  return pc.coefficients * pc.basis.evaluate(pc.space.standardize(x));
}

Eigen::MatrixXd eval_pc_rows(const PcSurrogate& pc, const Eigen::Ref<const Eigen::MatrixXd>& points) {
  for (Eigen::Index k = 0; k < points.rows(); ++k)
    for (Eigen::Index i = 0; i < points.cols(); ++i)
      if (!pc.space.in_support(i, points(k, i))) {
        std::ostringstream msg;
        msg << "eval_pc: row " << k << " input " << i << " = " << points(k, i) << " outside the support of its law";
        throw std::domain_error(msg.str());
      }
  return pc.basis.evaluate_rows(pc.space.standardize_rows(points)) * pc.coefficients.transpose();
}

namespace {

// Projection of a constant output leaves quadrature roundoff in the
// non-constant coefficients; such rows are treated as exactly constant.
Eigen::MatrixXd variance_tail(const PcSurrogate& pc) {
  Eigen::MatrixXd tail = pc.coefficients.rightCols(pc.basis.size() - 1);
  for (Eigen::Index a = 0; a < tail.rows(); ++a)
    if (tail.row(a).norm() <= 1e-12 * pc.coefficients.row(a).cwiseAbs().maxCoeff()) tail.row(a).setZero();
  return tail;
}

}  // namespace

Moments pc_moments(const PcSurrogate& pc) {
  Moments m;
  m.mean = pc.coefficients.col(0);
  m.stddev = variance_tail(pc).rowwise().norm();
  return m;
}

CovarianceMatrices pc_covariance(const PcSurrogate& pc) {
  const Eigen::MatrixXd tail = variance_tail(pc);
  Eigen::MatrixXd cov = tail * tail.transpose();
  cov = 0.5 * (cov + cov.transpose());
  return correlation_from_covariance(cov);
}

SobolIndices pc_sobol(const PcSurrogate& pc) {
  const Eigen::Index m = pc.outputs();
  const Eigen::Index d = pc.basis.dim();
  const Eigen::Index r = pc.basis.size();
  const Eigen::MatrixXi& idx = pc.basis.indices();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  SobolIndices s;
  s.first = Eigen::MatrixXd::Zero(m, d);
  s.total = Eigen::MatrixXd::Zero(m, d);
  s.interaction = Eigen::VectorXd::Zero(m);
  s.defined.assign(static_cast<std::size_t>(m), true);
  const Eigen::MatrixXd tail = variance_tail(pc);

  for (Eigen::Index a = 0; a < m; ++a) {
    const double variance = tail.row(a).squaredNorm();
    if (!(variance > 0.0)) {
      s.first.row(a).setConstant(nan);
      s.total.row(a).setConstant(nan);
      s.interaction(a) = nan;
      s.defined[static_cast<std::size_t>(a)] = false;
      continue;
    }
    double mixed = 0.0;
    for (Eigen::Index j = 1; j < r; ++j) {
      const double share = pc.coefficients(a, j) * pc.coefficients(a, j);
      int active = 0;
      Eigen::Index last = 0;
      for (Eigen::Index i = 0; i < d; ++i) {
        if (idx(j, i) > 0) {
          ++active;
          last = i;
          s.total(a, i) += share;
        }
      }
      if (active == 1) s.first(a, last) += share;
      else mixed += share;
    }
    s.first.row(a) /= variance;
    s.total.row(a) /= variance;
    s.interaction(a) = mixed / variance;
  }
  return s;
}

}  // namespace rivuq
