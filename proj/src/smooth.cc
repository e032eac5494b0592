// Copyright 2026 The nuadv Authors.
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


#include "nuadv/smooth.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "nuadv/error.h"

namespace nuadv {

namespace {

constexpr double kMaxQuantileProbability = 1.0 - 1e-12;

Vector gaussian(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector z(d);
  for (Eigen::Index i = 0; i < d; ++i) z(i) = normal(rng);
  return z;
}

}  // namespace

void SmoothingConfig::validate() const {
  if (n0 < 1 || n < 1) throw std::invalid_argument("n0 and n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (covariance) {
    cholesky(*covariance);
  } else if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be finite and positive");
  }
}

Matrix SmoothingConfig::noise_covariance(std::size_t dim) const {
  if (covariance) {
    if (static_cast<std::size_t>(covariance->rows()) != dim) {
      throw DimensionMismatch("noise covariance", dim, covariance->rows());
    }
    return *covariance;
  }
  const auto d = static_cast<Eigen::Index>(dim);
  return sigma * sigma * Matrix::Identity(d, d);
}

double clopper_pearson_lower(int successes, int trials, double alpha) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw std::invalid_argument("clopper_pearson_lower: bad counts");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (successes == 0) return 0.0;
  return boost::math::ibeta_inv(static_cast<double>(successes),
                                static_cast<double>(trials - successes + 1),
                                alpha);
}

double certified_radius(double p_lower, int dof) {
  if (!(p_lower > 0.5 && p_lower <= 1.0)) {
    throw DomainError("certified_radius needs 1/2 < p <= 1");
  }
  const double p = std::min(p_lower, kMaxQuantileProbability);
  return chi_quantile(dof, p) - chi_quantile(dof, 0.5);
}

double isotropic_l2_radius(double p_lower, double sigma) {
  if (!(p_lower >= 0.5 && p_lower < 1.0)) {
    throw DomainError("isotropic_l2_radius needs 1/2 <= p < 1");
  }
  return sigma * normal_quantile_approx(p_lower);
}

SmoothingResult smoothed_predict(const MlpModel& model, const Vector& x,
                                 const SmoothingConfig& cfg) {
  cfg.validate();
  if (model.num_classes() != 2) {
    throw std::invalid_argument("smoothing needs a binary classifier");
  }
  if (static_cast<std::size_t>(x.size()) != model.input_dim()) {
    throw DimensionMismatch("smoothing input", model.input_dim(), x.size());
  }
  const Matrix chol = cholesky(cfg.noise_covariance(model.input_dim()));
  Rng rng(cfg.seed);
  auto count_ones = [&](int samples) {
    int ones = 0;
    for (int s = 0; s < samples; ++s) {
      ones += predict(model, x + chol * gaussian(x.size(), rng));
    }
    return ones;
  };

  const int selected = 2 * count_ones(cfg.n0) > cfg.n0 ? 1 : 0;
  const int ones = count_ones(cfg.n);
  SmoothingResult result;
  result.count = selected == 1 ? ones : cfg.n - ones;
  result.p_lower = clopper_pearson_lower(result.count, cfg.n, cfg.alpha);
  if (result.p_lower > 0.5) {
    result.prediction = selected;
    result.radius = certified_radius(result.p_lower, static_cast<int>(x.size()));
  }
  return result;
}

double LinearClassifier::majority_probability(const Vector& x,
                                              const Matrix& sigma) const {
  // w.(x + n) + b ~ N(w.x + b, w^T Sigma w).
  const double mean = w.dot(x) + b;
  const double sd = std::sqrt(w.dot(sigma * w));
  const double p_one = 0.5 * std::erfc(-mean / (sd * std::sqrt(2.0)));
  return predict(x) == 1 ? p_one : 1.0 - p_one;
}

WitnessResult verify_theorem_mc(const LinearClassifier& f, const Matrix& sigma,
                                const Vector& x, const Vector& delta,
                                int samples, std::uint64_t seed) {
  if (f.w.size() != x.size()) {
    throw DimensionMismatch("witness input", f.w.size(), x.size());
  }
  if (delta.size() != x.size() || sigma.rows() != x.size()) {
    throw DimensionMismatch("witness shift", x.size(),
                            delta.size() != x.size() ? delta.size()
                                                     : sigma.rows());
  }
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const Matrix chol = cholesky(sigma);
  Rng rng(seed);
  WitnessResult r;
  r.majority = f.predict(x);
  const Vector shifted = x + delta;
  long hits = 0;
  for (int s = 0; s < samples; ++s) {
    hits += f.predict(shifted + chol * gaussian(x.size(), rng)) == r.majority;
  }
  r.estimate = static_cast<double>(hits) / samples;
  r.holds = r.estimate > 0.5;
  return r;
}

}  // namespace nuadv
