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

#include "rivuq/input_space.hpp"

#include <stdexcept>

namespace rivuq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

InputSpace::InputSpace(std::vector<Marginal> marginals, std::vector<std::string> names)
    : marginals_(std::move(marginals)), names_(std::move(names)) {
  for (const auto& m : marginals_) {
    std::visit(overloaded{[](const NormalLaw& n) {
                            if (!(n.stddev > 0.0)) throw std::invalid_argument("normal law needs stddev > 0");
                          },
                          [](const UniformLaw& u) {
                            if (!(u.lower < u.upper)) throw std::invalid_argument("uniform law needs lower < upper");
                          }},
               m);
  }
  if (names_.empty()) {
    for (std::size_t i = 0; i < marginals_.size(); ++i) names_.push_back("x" + std::to_string(i + 1));
  }
  if (names_.size() != marginals_.size()) throw std::invalid_argument("one name per marginal expected");
}

PolyFamily InputSpace::family(Eigen::Index i) const {
  return std::holds_alternative<NormalLaw>(marginal(i)) ? PolyFamily::hermite : PolyFamily::legendre;
}

double InputSpace::to_standard(Eigen::Index i, double x) const {
  return std::visit(overloaded{[x](const NormalLaw& n) { return (x - n.mean) / n.stddev; },
                               [x](const UniformLaw& u) {
                                 return (2.0 * x - u.lower - u.upper) / (u.upper - u.lower);
                               }},
                    marginal(i));
}

double InputSpace::to_physical(Eigen::Index i, double z) const {
  return std::visit(overloaded{[z](const NormalLaw& n) { return n.mean + n.stddev * z; },
                               [z](const UniformLaw& u) {
                                 return 0.5 * (u.lower + u.upper) + 0.5 * (u.upper - u.lower) * z;
                               }},
                    marginal(i));
}

bool InputSpace::in_support(Eigen::Index i, double x) const {
  if (const auto* u = std::get_if<UniformLaw>(&marginal(i))) return x >= u->lower && x <= u->upper;
  return true;
}

Eigen::VectorXd InputSpace::standardize(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim()) throw std::invalid_argument("point dimension mismatch");
  Eigen::VectorXd z(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) z(i) = to_standard(i, x(i));
  return z;
}

Eigen::VectorXd InputSpace::destandardize(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) throw std::invalid_argument("point dimension mismatch");
  Eigen::VectorXd x(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) x(i) = to_physical(i, z(i));
  return x;
}

Eigen::MatrixXd InputSpace::standardize_rows(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
  if (points.cols() != dim()) throw std::invalid_argument("point dimension mismatch");
  Eigen::MatrixXd out(points.rows(), points.cols());
  for (Eigen::Index j = 0; j < dim(); ++j)
    for (Eigen::Index k = 0; k < points.rows(); ++k) out(k, j) = to_standard(j, points(k, j));
  return out;
}

Eigen::MatrixXd InputSpace::destandardize_rows(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
  if (points.cols() != dim()) throw std::invalid_argument("point dimension mismatch");
  Eigen::MatrixXd out(points.rows(), points.cols());
  for (Eigen::Index j = 0; j < dim(); ++j)
    for (Eigen::Index k = 0; k < points.rows(); ++k) out(k, j) = to_physical(j, points(k, j));
  return out;
}

InputSpace discharge_friction_space() {
  return InputSpace({NormalLaw{4031.0, 400.0}, UniformLaw{15.0, 60.0}}, {"Q_m3s", "Ks3"});
}

}  // namespace rivuq
