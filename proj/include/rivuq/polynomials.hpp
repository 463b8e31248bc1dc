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

#ifndef RIVUQ_POLYNOMIALS_HPP_
#define RIVUQ_POLYNOMIALS_HPP_

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "rivuq/input_space.hpp"

namespace rivuq {

/// Off-diagonal entry b_k of the Jacobi matrix of the family, so that the
/// orthonormal polynomials satisfy z p_k = b_{k+1} p_{k+1} + b_k p_{k-1}.
///   hermite  (N(0,1) weight):          b_k = sqrt(k)
///   legendre (uniform weight 1/2 on [-1, 1]): b_k = k / sqrt(4k^2 - 1)
template <typename Scalar = double>
Scalar jacobi_offdiagonal(PolyFamily family, int k) {
  using std::sqrt;
  const Scalar kk = Scalar(k);
  if (family == PolyFamily::hermite) return sqrt(kk);
  return kk / sqrt(Scalar(4) * kk * kk - Scalar(1));
}

/// Values p_0(z) .. p_max(z) of the orthonormal family, via three-term
/// recurrence. Hermite: He_k / sqrt(k!). Legendre: sqrt(2k+1) L_k.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> orthonormal_poly_all(PolyFamily family, int max_degree, Scalar z) {
  if (max_degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p(max_degree + 1);
  p(0) = Scalar(1);
  if (max_degree == 0) return p;
  p(1) = z / jacobi_offdiagonal<Scalar>(family, 1);
  for (int k = 1; k < max_degree; ++k) {
    p(k + 1) = (z * p(k) - jacobi_offdiagonal<Scalar>(family, k) * p(k - 1)) /
               jacobi_offdiagonal<Scalar>(family, k + 1);
  }
  return p;
}

template <typename Scalar = double>
Scalar orthonormal_poly_1d(PolyFamily family, int degree, Scalar z) {
  return orthonormal_poly_all<Scalar>(family, degree, z)(degree);
}

}  // namespace rivuq

#endif  // RIVUQ_POLYNOMIALS_HPP_
