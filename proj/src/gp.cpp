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

#include "rivuq/gp.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

#include "rivuq/sampling.hpp"

namespace rivuq {

namespace {

struct Factorization {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

// Cholesky of Pi + tau^2 I, escalating a diagonal jitter by decades from
// 1e-12 up to max_jitter when the factorization breaks down.
Factorization factorize(const Eigen::MatrixXd& d2, const GpHyperparameters& hyper, double max_jitter) {
  const Eigen::Index n = d2.rows();
  Eigen::MatrixXd base = kernel_from_distances(d2, hyper.length_scale);
  base.diagonal().array() += hyper.nugget;
  Factorization f;
  for (double jitter = 0.0;;) {
    Eigen::MatrixXd b = base;
    if (jitter > 0.0) b.diagonal().array() += jitter;
    f.llt.compute(b);
    if (f.llt.info() == Eigen::Success && f.llt.matrixLLT().diagonal().minCoeff() > 0.0 &&
        f.llt.matrixLLT().diagonal().allFinite()) {
      f.jitter = jitter;
      return f;
    }
    jitter = jitter == 0.0 ? 1e-12 : jitter * 10.0;
    if (jitter > max_jitter * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "GP kernel matrix not positive definite: N = " << n << ", length scale = " << hyper.length_scale
          << ", nugget = " << hyper.nugget << ", jitter escalated to " << max_jitter;
      throw GpFitError(msg.str());
    }
  }
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Search coordinates u in R^2 mapped onto the bounded (log l, log tau^2) box.
struct BoxMap {
  Eigen::Array2d lower, upper;

  Eigen::Array2d to_log(const Eigen::Array2d& u) const {
    return lower + (upper - lower) * u.unaryExpr([](double v) { return logistic(v); });
  }
  Eigen::Array2d jacobian(const Eigen::Array2d& u) const {
    const Eigen::Array2d s = u.unaryExpr([](double v) { return logistic(v); });
    return (upper - lower) * s * (1.0 - s);
  }
};

struct Profiled {
  double objective = std::numeric_limits<double>::infinity();  // negative log likelihood
  Eigen::Array2d gradient = Eigen::Array2d::Zero();            // in u coordinates
  GpHyperparameters hyper;
};

Profiled profiled_objective(const Eigen::MatrixXd& d2, const Eigen::VectorXd& y, const Eigen::Array2d& u,
                            const BoxMap& map, const GpBounds& bounds, double max_jitter) {
  const Eigen::Array2d theta = map.to_log(u);
  GpHyperparameters hyper;
  hyper.length_scale = std::exp(theta(0));
  hyper.nugget = std::exp(theta(1));
  Profiled out;
  Factorization f;
  try {
    f = factorize(d2, hyper, max_jitter);
  } catch (const GpFitError&) {
    return out;
  }
  const double q = y.dot(f.llt.solve(y));
  hyper.signal_variance =
      std::clamp(q / static_cast<double>(y.size()), bounds.signal_variance.lower, bounds.signal_variance.upper);
  const LogLikelihood ll = gp_log_likelihood(d2, y, hyper, max_jitter);
  out.hyper = hyper;
  out.objective = -ll.value;
  // sigma^2 sits at its conditional optimum or at a bound that does not move
  // with (l, tau^2), so the partial derivatives are the profile gradient.
  out.gradient = -Eigen::Array2d(ll.gradient(0), ll.gradient(2)) * map.jacobian(u);
  return out;
}

}  // namespace

LogLikelihood gp_log_likelihood(const Eigen::MatrixXd& d2, const Eigen::VectorXd& y, const GpHyperparameters& hyper,
                                double max_jitter) {
  if (d2.rows() != d2.cols() || d2.rows() != y.size()) throw std::invalid_argument("gp_log_likelihood: shape mismatch");
  const Eigen::Index n = y.size();
  const auto nd = static_cast<double>(n);
  const double ell = hyper.length_scale;
  const double s2 = hyper.signal_variance;
  const double t2 = hyper.nugget;

  const Factorization f = factorize(d2, hyper, max_jitter);
  const Eigen::VectorXd alpha = f.llt.solve(y);
  const double q = y.dot(alpha);
  const double log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();

  LogLikelihood out;
  out.jitter = f.jitter;
  out.value = -0.5 * q / s2 - 0.5 * (nd * std::log(s2) + log_det) - 0.5 * nd * std::log(2.0 * std::numbers::pi);

  Eigen::MatrixXd linv = Eigen::MatrixXd::Identity(n, n);
  f.llt.matrixL().solveInPlace(linv);
  const Eigen::MatrixXd binv = linv.transpose() * linv;
  const Eigen::MatrixXd dpi = kernel_from_distances(d2, ell).cwiseProduct(d2) / (ell * ell);  // dPi / dlog l

  out.gradient(0) = 0.5 * alpha.dot(dpi * alpha) / s2 - 0.5 * binv.cwiseProduct(dpi).sum();
  out.gradient(1) = 0.5 * q / s2 - 0.5 * nd;
  out.gradient(2) = 0.5 * t2 * alpha.squaredNorm() / s2 - 0.5 * t2 * binv.trace();
  return out;
}

GpMode gp_condition(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const GpHyperparameters& hyper,
                    double max_jitter) {
  if (inputs.rows() != targets.size()) throw std::invalid_argument("gp_condition: inputs and targets differ in length");
  if (inputs.rows() < 1) throw std::invalid_argument("gp_condition: no training points");
  if (!targets.allFinite()) throw std::invalid_argument("gp_condition: non-finite targets");
  GpMode mode;
  mode.hyper = hyper;
  mode.inputs = inputs;
  mode.target_scale = std::sqrt(targets.squaredNorm() / static_cast<double>(targets.size()));
  if (targets.squaredNorm() == 0.0) {
    mode.trivial = true;
    mode.beta = Eigen::VectorXd::Zero(targets.size());
    return mode;
  }
  const Eigen::MatrixXd d2 = squared_distances(inputs, inputs);
  const Factorization f = factorize(d2, hyper, max_jitter);
  mode.beta = f.llt.solve(targets);
  mode.jitter = f.jitter;
  return mode;
}

GpMode gp_fit_mode(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const GpFitOptions& options) {
  const Eigen::Index n = inputs.rows();
  if (n < 3) throw std::invalid_argument("gp_fit_mode needs at least three training points");
  if (targets.size() != n) throw std::invalid_argument("gp_fit_mode: inputs and targets differ in length");
  if (!targets.allFinite()) throw std::invalid_argument("gp_fit_mode: non-finite targets");
  if (options.restarts < 1) throw std::invalid_argument("gp_fit_mode needs at least one restart");

  const double scale = std::sqrt(targets.squaredNorm() / static_cast<double>(n));
  if (scale == 0.0) {
    GpMode mode = gp_condition(inputs, targets, GpHyperparameters{}, options.max_jitter);
    mode.hyper.signal_variance = options.bounds.signal_variance.lower;
    return mode;
  }
  const Eigen::VectorXd y = targets / scale;
  const Eigen::MatrixXd d2 = squared_distances(inputs, inputs);

  const GpBounds& b = options.bounds;
  const BoxMap map{{std::log(b.length_scale.lower), std::log(b.nugget.lower)},
                   {std::log(b.length_scale.upper), std::log(b.nugget.upper)}};

  Profiled best;
  for (int start = 0; start < options.restarts; ++start) {
    const double p0 = radical_inverse(static_cast<std::uint64_t>(start + 1), kHaltonBases[0]);
    const double p1 = radical_inverse(static_cast<std::uint64_t>(start + 1), kHaltonBases[1]);
    Eigen::Array2d u(std::log(p0 / (1.0 - p0)), std::log(p1 / (1.0 - p1)));
    Profiled cur = profiled_objective(d2, y, u, map, b, options.max_jitter);
    if (!std::isfinite(cur.objective)) continue;

    // BFGS with Armijo backtracking.
    Eigen::Matrix2d h = Eigen::Matrix2d::Identity();
    for (int iter = 0; iter < options.max_iterations; ++iter) {
      const Eigen::Vector2d g = cur.gradient.matrix();
      if (g.lpNorm<Eigen::Infinity>() < 1e-7) break;
      Eigen::Vector2d dir = -h * g;
      if (dir.dot(g) >= 0.0) {
        h.setIdentity();
        dir = -g;
      }
      const double max_step = dir.lpNorm<Eigen::Infinity>();
      double t = max_step > 4.0 ? 4.0 / max_step : 1.0;
      Profiled next;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
        next = profiled_objective(d2, y, u + t * dir.array(), map, b, options.max_jitter);
        if (std::isfinite(next.objective) && next.objective <= cur.objective + 1e-4 * t * dir.dot(g)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      const Eigen::Vector2d s = t * dir;
      const Eigen::Vector2d yk = next.gradient.matrix() - g;
      const double decrease = cur.objective - next.objective;
      u += s.array();
      cur = next;
      const double sy = s.dot(yk);
      if (sy > 1e-12) {
        const double rho = 1.0 / sy;
        const Eigen::Matrix2d v = Eigen::Matrix2d::Identity() - rho * s * yk.transpose();
        h = v * h * v.transpose() + rho * s * s.transpose();
      }
      if (decrease < 1e-10 * (1.0 + std::abs(cur.objective))) break;
    }
    if (cur.objective < best.objective) best = cur;
  }
  if (!std::isfinite(best.objective)) {
    std::ostringstream msg;
    msg << "GP fit failed from all " << options.restarts << " starting points (N = " << n << ")";
    throw GpFitError(msg.str());
  }

  GpMode mode = gp_condition(inputs, y, best.hyper, options.max_jitter);
  mode.beta *= scale;
  mode.target_scale = scale;
  mode.log_likelihood = -best.objective;
  return mode;
}

double gp_predict_mode(const GpMode& mode, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (mode.trivial) return 0.0;
  const double inv = 1.0 / (2.0 * mode.hyper.length_scale * mode.hyper.length_scale);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < mode.size(); ++k)
    acc += mode.beta(k) * std::exp(-(mode.inputs.row(k).transpose() - x).squaredNorm() * inv);
  return acc;
}

Eigen::VectorXd gp_predict_rows(const GpMode& mode, const Eigen::Ref<const Eigen::MatrixXd>& points) {
  if (mode.trivial) return Eigen::VectorXd::Zero(points.rows());
  return kernel_matrix(points, mode.inputs, mode.hyper.length_scale) * mode.beta;
}

}  // namespace rivuq
