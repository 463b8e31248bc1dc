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

#ifndef RIVUQ_INPUT_SPACE_HPP_
#define RIVUQ_INPUT_SPACE_HPP_

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace rivuq {

struct NormalLaw {
  double mean = 0.0;
  double stddev = 1.0;
};

struct UniformLaw {
  double lower = -1.0;
  double upper = 1.0;
};

using Marginal = std::variant<NormalLaw, UniformLaw>;

/// Orthonormal polynomial family attached to a marginal law (Askey scheme).
enum class PolyFamily { hermite, legendre };

/// Independent random inputs. Points are stored as rows of an n x d matrix
/// throughout the library.
///
/// Standardization: a Normal dimension maps to its z-score, a Uniform
/// dimension maps affinely onto [-1, 1].
class InputSpace {
 public:
  InputSpace() = default;
  explicit InputSpace(std::vector<Marginal> marginals,
                      std::vector<std::string> names = {});

  Eigen::Index dim() const { return static_cast<Eigen::Index>(marginals_.size()); }
  const Marginal& marginal(Eigen::Index i) const { return marginals_.at(static_cast<std::size_t>(i)); }
  const std::vector<Marginal>& marginals() const { return marginals_; }
  const std::vector<std::string>& names() const { return names_; }
  PolyFamily family(Eigen::Index i) const;

  double to_standard(Eigen::Index i, double x) const;
  double to_physical(Eigen::Index i, double z) const;
  bool in_support(Eigen::Index i, double x) const;

  Eigen::VectorXd standardize(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd destandardize(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  Eigen::MatrixXd standardize_rows(const Eigen::Ref<const Eigen::MatrixXd>& points) const;
  Eigen::MatrixXd destandardize_rows(const Eigen::Ref<const Eigen::MatrixXd>& points) const;

 private:
  std::vector<Marginal> marginals_;
  std::vector<std::string> names_;
};

/// Q ~ N(4031, 400) m3/s and Ks3 ~ U(15, 60) m^(1/3)/s.
InputSpace discharge_friction_space();

}  // namespace rivuq

#endif  // RIVUQ_INPUT_SPACE_HPP_
