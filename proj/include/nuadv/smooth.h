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


// Randomized smoothing of a binary classifier with Gaussian noise N(0, Sigma).
// When the smoothed classifier returns class a with probability at least
// p_a, it keeps returning a on the Mahalanobis ball
//   sqrt(delta^T Sigma^-1 delta) <= chi_d^-1(p_a) - chi_d^-1(1/2).

#ifndef NUADV_SMOOTH_H_
#define NUADV_SMOOTH_H_

#include <cstdint>
#include <optional>

#include "nuadv/net.h"
#include "nuadv/numerics.h"

namespace nuadv {

struct SmoothingConfig {
  // Full noise covariance; when absent the noise is sigma^2 I.
  std::optional<Matrix> covariance;
  double sigma = 1.0;
  int n0 = 100;      // selection samples
  int n = 10000;     // estimation samples
  double alpha = 0.001;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument, or NotPositiveDefinite for a bad Sigma.
  void validate() const;
  // Sigma for a d-dimensional input.
  Matrix noise_covariance(std::size_t dim) const;
};

inline constexpr int kAbstain = -1;

struct SmoothingResult {
  int prediction = kAbstain;
  int count = 0;           // hits of the candidate class among n samples
  double p_lower = 0.0;    // one-sided Clopper-Pearson bound
  double radius = 0.0;     // certified Mahalanobis radius, 0 on abstain
};

// Two phases: n0 noisy samples select the candidate class, n fresh samples
// bound its probability. Abstains when the bound is <= 1/2. The model must
// be binary; throws DimensionMismatch if Sigma does not match the input.
SmoothingResult smoothed_predict(const MlpModel& model, const Vector& x,
                                 const SmoothingConfig& cfg);

// Lower end of the one-sided (1 - alpha) Clopper-Pearson interval.
double clopper_pearson_lower(int successes, int trials, double alpha);

// chi_dof^-1(p) - chi_dof^-1(1/2). Probabilities too close to 1 for the
// quantile are capped at 1 - 1e-12. Throws DomainError unless 1/2 < p <= 1.
double certified_radius(double p_lower, int dof);

// sigma * Phi^-1(p): the l_2 radius of isotropic smoothing, for comparison.
double isotropic_l2_radius(double p_lower, double sigma);

// f(x) = 1 if w.x + b > 0 else 0.
struct LinearClassifier {
  Vector w;
  double b = 0.0;

  int predict(const Vector& x) const { return w.dot(x) + b > 0.0 ? 1 : 0; }
  // Exact P(f(x + n) = predict(x)) for n ~ N(0, sigma).
  double majority_probability(const Vector& x, const Matrix& sigma) const;
};

struct WitnessResult {
  int majority = 0;      // predict(x)
  double estimate = 0.0; // fraction of samples with f(x + delta + n) = majority
  bool holds = false;    // estimate > 1/2
};

// Monte-Carlo check that shifting x by delta keeps the noisy majority.
WitnessResult verify_theorem_mc(const LinearClassifier& f, const Matrix& sigma,
                                const Vector& x, const Vector& delta,
                                int samples, std::uint64_t seed);

}  // namespace nuadv

#endif  // NUADV_SMOOTH_H_
