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

#ifndef RIVUQ_QUADRATURE_HPP_
#define RIVUQ_QUADRATURE_HPP_

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "rivuq/input_space.hpp"
#include "rivuq/polynomials.hpp"

namespace rivuq {

/// One-dimensional Gauss rule for a probability measure (weights sum to 1).
template <typename Scalar>
struct Rule1d {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
};

namespace detail {

// Golub-Welsch on the symmetric Jacobi matrix, then a Newton polish of each
// node on p_n and Christoffel weights 1 / sum_k p_k(x)^2. The Christoffel form
// keeps the tiny tail weights accurate in a relative sense, which eigenvector
// components do not.
template <typename Scalar>
Rule1d<Scalar> gauss_rule(PolyFamily family, int order) {
  using std::abs;
  if (order < 0) throw std::invalid_argument("quadrature order must be >= 0");
  const int n = order + 1;
  Rule1d<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes(0) = Scalar(0);
    rule.weights(0) = Scalar(1);
    return rule;
  }

  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat jacobi = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = jacobi_offdiagonal<Scalar>(family, k);
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(jacobi, Eigen::EigenvaluesOnly);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = eig.eigenvalues();

  for (int i = 0; i < n; ++i) {
    for (int iter = 0; iter < 3; ++iter) {
      // p_n and its derivative through the recurrence.
      Scalar p_prev = 0, p = 1, dp_prev = 0, dp = 0;
      for (int k = 0; k < n; ++k) {
        const Scalar b_next = jacobi_offdiagonal<Scalar>(family, k + 1);
        const Scalar b_cur = k > 0 ? jacobi_offdiagonal<Scalar>(family, k) : Scalar(0);
        const Scalar p_next = (x(i) * p - b_cur * p_prev) / b_next;
        const Scalar dp_next = (p + x(i) * dp - b_cur * dp_prev) / b_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
      }
      if (dp == Scalar(0)) break;
      const Scalar step = p / dp;
      x(i) -= step;
      if (abs(step) <= Eigen::NumTraits<Scalar>::epsilon() * (Scalar(1) + abs(x(i)))) break;
    }
  }

  for (int i = 0; i < n; ++i) {
    const auto p = orthonormal_poly_all<Scalar>(family, n - 1, x(i));
    rule.weights(i) = Scalar(1) / p.squaredNorm();
  }
  rule.nodes = x;

  // Both weight functions are even: enforce exact node/weight symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const Scalar node = (rule.nodes(j) - rule.nodes(i)) / Scalar(2);
    const Scalar weight = (rule.weights(i) + rule.weights(j)) / Scalar(2);
    rule.nodes(i) = -node;
    rule.nodes(j) = node;
    rule.weights(i) = rule.weights(j) = weight;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = Scalar(0);
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace detail

/// Probabilists' Gauss-Hermite rule with order + 1 nodes for N(0, 1).
template <typename Scalar = double>
Rule1d<Scalar> gauss_hermite(int order) {
  return detail::gauss_rule<Scalar>(PolyFamily::hermite, order);
}

/// Gauss-Legendre rule with order + 1 nodes for U(-1, 1).
template <typename Scalar = double>
Rule1d<Scalar> gauss_legendre(int order) {
  return detail::gauss_rule<Scalar>(PolyFamily::legendre, order);
}

/// Tensor-product rule, (order + 1)^d nodes, last dimension fastest.
struct QuadratureRule {
  int order = 0;
  Eigen::MatrixXd standard_nodes;  // N x d
  Eigen::MatrixXd nodes;           // N x d, physical coordinates
  Eigen::VectorXd weights;         // N

  Eigen::Index size() const { return weights.size(); }
};

QuadratureRule tensor_quadrature(int order, const InputSpace& space);

}  // namespace rivuq

#endif  // RIVUQ_QUADRATURE_HPP_
