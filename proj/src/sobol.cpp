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

#include "rivuq/sobol.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rivuq/sampling.hpp"
#include "rivuq/stats.hpp"

namespace rivuq {

CorrelationInterval correlation_with_interval(const Eigen::Ref<const Eigen::VectorXd>& a,
                                              const Eigen::Ref<const Eigen::VectorXd>& b, double confidence) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Eigen::Index n = a.size();
  if (b.size() != n || n < 4) throw std::invalid_argument("correlation needs equal-length samples, n >= 4");
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  const double saa = ca.squaredNorm();
  const double sbb = cb.squaredNorm();
  if (!(saa > 0.0) || !(sbb > 0.0)) return {nan, nan, nan};
  const double r = std::clamp(ca.dot(cb) / std::sqrt(saa * sbb), -1.0, 1.0);
  const double half = normal_quantile(0.5 * (1.0 + confidence)) / std::sqrt(static_cast<double>(n - 3));
  if (std::abs(r) == 1.0) return {r, r, r};
  const double z = std::atanh(r);
  return {r, std::tanh(z - half), std::tanh(z + half)};
}

MartinezEstimate martinez_sobol(const BatchEvaluator& evaluator, const InputSpace& space, Eigen::Index n,
                                std::uint64_t seed, double confidence) {
  if (n < 100) throw std::invalid_argument("martinez_sobol needs n >= 100");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
  const Eigen::Index d = space.dim();
  const Eigen::MatrixXd ab = mc_sample(space, 2 * n, seed);

  Eigen::MatrixXd design(n * (d + 2), d);
  design.topRows(n) = ab.topRows(n);          // A
  design.middleRows(n, n) = ab.bottomRows(n);  // B
  for (Eigen::Index i = 0; i < d; ++i) {
    auto block = design.middleRows((i + 2) * n, n);
    block = ab.bottomRows(n);
    block.col(i) = ab.topRows(n).col(i);
  }

  const Eigen::MatrixXd outputs = evaluator(design);
  if (outputs.rows() != design.rows()) throw std::runtime_error("evaluator returned the wrong number of rows");
  const Eigen::Index m = outputs.cols();

  MartinezEstimate est;
  est.confidence = confidence;
  est.sample_size = n;
  est.evaluations = design.rows();
  auto& idx = est.indices;
  idx.first.resize(m, d);
  idx.total.resize(m, d);
  idx.interaction.resize(m);
  idx.defined.assign(static_cast<std::size_t>(m), true);
  est.first_lower.resize(m, d);
  est.first_upper.resize(m, d);
  est.total_lower.resize(m, d);
  est.total_upper.resize(m, d);

  for (Eigen::Index s = 0; s < m; ++s) {
    const auto fa = outputs.col(s).segment(0, n);
    const auto fb = outputs.col(s).segment(n, n);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto fc = outputs.col(s).segment((i + 2) * n, n);
      const auto first = correlation_with_interval(fa, fc, confidence);
      const auto complement = correlation_with_interval(fb, fc, confidence);
      if (std::isnan(first.value) || std::isnan(complement.value)) idx.defined[static_cast<std::size_t>(s)] = false;
      idx.first(s, i) = first.value;
      est.first_lower(s, i) = first.lower;
      est.first_upper(s, i) = first.upper;
      idx.total(s, i) = 1.0 - complement.value;
      est.total_lower(s, i) = 1.0 - complement.upper;
      est.total_upper(s, i) = 1.0 - complement.lower;
    }
    idx.interaction(s) = 1.0 - idx.first.row(s).sum();
  }
  return est;
}

}  // namespace rivuq
