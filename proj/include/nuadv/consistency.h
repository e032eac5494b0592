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

// Plausibility of perturbations under a zero-mean Gaussian model of the
// target class. A perturbation delta has density
//   gamma(delta) = exp(C - MD(delta)^2 / 2),  C = -log((2 pi)^(d/2) |Sigma|^(1/2))
// so bounding the Mahalanobis length MD(delta) <= eps is the same as
// requiring sqrt(2C - 2 log gamma) <= eps.

#ifndef NUADV_CONSISTENCY_H_
#define NUADV_CONSISTENCY_H_

#include <string>
#include <vector>

#include "nuadv/numerics.h"

namespace nuadv {

class GaussianModel {
 public:
  // Throws NotPositiveDefinite unless covariance is SPD.
  explicit GaussianModel(Matrix covariance);

  std::size_t dim() const { return static_cast<std::size_t>(covariance_.rows()); }
  const Matrix& covariance() const { return covariance_; }
  // The log-normalizer C.
  double log_normalizer() const { return log_normalizer_; }

  // delta^T Sigma^-1 delta, via the Cholesky factor.
  double md_squared(const Vector& delta) const;

 private:
  Matrix covariance_;
  Matrix chol_;  // lower triangular
  double log_normalizer_;
};

struct Consistency {
  double log_gamma;  // authoritative; gamma underflows for large d
  double gamma;
};

Consistency gamma_consistency(const GaussianModel& g, const Vector& delta);

// sqrt(max(0, 2C - 2 log gamma)); equals MD(delta) up to rounding.
double md_from_log_gamma(const GaussianModel& g, double log_gamma);

// Relative slack for comparing MD against a budget enforced through a
// different factorization of Sigma (e.g. a projection with Sigma^(-1/2)).
inline constexpr double kBoundSlack = 1e-9;

// True iff MD(delta) <= epsilon (1 + kBoundSlack).
bool consistency_bound_check(const GaussianModel& g, const Vector& delta,
                             double epsilon);

struct MdSquareStats {
  double mean = 0.0;
  double mean_log_gamma = 0.0;
  std::vector<double> bin_edges;  // bins + 1 edges over [0, max MD^2]
  std::vector<std::size_t> counts;
};

inline constexpr int kMdHistogramBins = 50;

// Throws EmptyInput for an empty list.
MdSquareStats md_square_stats(const GaussianModel& g,
                              const std::vector<Vector>& deltas,
                              int bins = kMdHistogramBins);

// "bin_low,bin_high,count" rows with a header.
void write_histogram_csv(const MdSquareStats& stats, const std::string& path);

}  // namespace nuadv

#endif  // NUADV_CONSISTENCY_H_
