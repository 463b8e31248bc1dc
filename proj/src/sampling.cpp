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

#include "rivuq/sampling.hpp"

#include <random>
#include <stdexcept>

#include "rivuq/quadrature.hpp"

namespace rivuq {

Eigen::MatrixXd mc_sample(const InputSpace& space, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("mc_sample needs n >= 1");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd points(n, space.dim());
  // Row-major draw order so that a prefix of a larger sample is a valid sample.
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < space.dim(); ++j) {
      const auto& law = space.marginal(j);
      if (const auto* normal = std::get_if<NormalLaw>(&law)) {
        std::normal_distribution<double> dist(normal->mean, normal->stddev);
        points(k, j) = dist(rng);
      } else {
        const auto& uniform = std::get<UniformLaw>(law);
        std::uniform_real_distribution<double> dist(uniform.lower, uniform.upper);
        points(k, j) = dist(rng);
      }
    }
  }
  return points;
}

Eigen::VectorXd DesignBox::to_unit(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return ((x - lower).array() / (upper - lower).array()).matrix();
}

Eigen::MatrixXd DesignBox::to_unit_rows(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
  if (points.cols() != dim()) throw std::invalid_argument("design box dimension mismatch");
  Eigen::MatrixXd out = points.rowwise() - lower.transpose();
  out.array().rowwise() /= (upper - lower).transpose().array();
  return out;
}

DesignBox discharge_friction_box() {
  DesignBox box;
  box.lower = Eigen::Vector2d(3000.0, 15.0);
  box.upper = Eigen::Vector2d(5000.0, 60.0);
  return box;
}

Eigen::MatrixXd halton_design(const DesignBox& box, Eigen::Index n, std::uint64_t first_index) {
  if (n < 1) throw std::invalid_argument("halton_design needs n >= 1");
  if (box.dim() > static_cast<Eigen::Index>(kHaltonBases.size()))
    throw std::invalid_argument("halton_design: dimension exceeds the reserved prime bases");
  if ((box.upper - box.lower).minCoeff() <= 0.0) throw std::invalid_argument("degenerate design box");
  Eigen::MatrixXd points(n, box.dim());
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < box.dim(); ++j) {
      const double u = radical_inverse(first_index + static_cast<std::uint64_t>(k),
                                       kHaltonBases[static_cast<std::size_t>(j)]);
      points(k, j) = box.lower(j) + (box.upper(j) - box.lower(j)) * u;
    }
  }
  return points;
}

QuadratureRule tensor_quadrature(int order, const InputSpace& space) {
  if (order < 0) throw std::invalid_argument("quadrature order must be >= 0");
  const Eigen::Index d = space.dim();
  std::vector<Rule1d<double>> rules;
  rules.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j)
    rules.push_back(space.family(j) == PolyFamily::hermite ? gauss_hermite<double>(order)
                                                           : gauss_legendre<double>(order));

  const Eigen::Index per_dim = order + 1;
  Eigen::Index total = 1;
  for (Eigen::Index j = 0; j < d; ++j) total *= per_dim;

  QuadratureRule rule;
  rule.order = order;
  rule.standard_nodes.resize(total, d);
  rule.weights.resize(total);
  // Last dimension varies fastest.
  for (Eigen::Index k = 0; k < total; ++k) {
    Eigen::Index rem = k;
    double w = 1.0;
    for (Eigen::Index j = d - 1; j >= 0; --j) {
      const Eigen::Index idx = rem % per_dim;
      rem /= per_dim;
      rule.standard_nodes(k, j) = rules[static_cast<std::size_t>(j)].nodes(idx);
      w *= rules[static_cast<std::size_t>(j)].weights(idx);
    }
    rule.weights(k) = w;
  }
  rule.nodes = space.destandardize_rows(rule.standard_nodes);
  return rule;
}

}  // namespace rivuq
