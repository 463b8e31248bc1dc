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

#ifndef RIVUQ_SAMPLING_HPP_
#define RIVUQ_SAMPLING_HPP_

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "rivuq/input_space.hpp"

namespace rivuq {

/// i.i.d. draws from the product law, one point per row. The generator is
/// std::mt19937_64 seeded with `seed`.
Eigen::MatrixXd mc_sample(const InputSpace& space, Eigen::Index n, std::uint64_t seed);

inline constexpr std::array<unsigned, 10> kHaltonBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

/// Van der Corput radical inverse of `index` in `base`.
template <typename Scalar = double>
Scalar radical_inverse(std::uint64_t index, unsigned base) {
  const Scalar inv_base = Scalar(1) / Scalar(base);
  Scalar factor = inv_base;
  Scalar value = 0;
  while (index > 0) {
    value += Scalar(index % base) * factor;
    index /= base;
    factor *= inv_base;
  }
  return value;
}

/// Axis-aligned box in physical coordinates.
struct DesignBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index dim() const { return lower.size(); }
  /// Affine map of a physical point onto [0, 1]^d.
  Eigen::VectorXd to_unit(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::MatrixXd to_unit_rows(const Eigen::Ref<const Eigen::MatrixXd>& points) const;
};

/// Q bounded to [3000, 5000] m3/s, Ks3 on its full support [15, 60].
DesignBox discharge_friction_box();

/// Halton points with indices first_index, first_index + 1, ... in the prime
/// bases 2, 3, 5, ..., mapped affinely onto `box`.
Eigen::MatrixXd halton_design(const DesignBox& box, Eigen::Index n, std::uint64_t first_index = 1);

}  // namespace rivuq

#endif  // RIVUQ_SAMPLING_HPP_
