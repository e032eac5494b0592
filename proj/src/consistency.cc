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

#include "nuadv/consistency.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "nuadv/error.h"
#include "nuadv/text.h"

namespace nuadv {

GaussianModel::GaussianModel(Matrix covariance)
    : covariance_(std::move(covariance)), chol_(cholesky(covariance_)) {
  const double d = static_cast<double>(covariance_.rows());
  // log |Sigma|^(1/2) = sum log L_ii.
  const double half_log_det = chol_.diagonal().array().log().sum();
  log_normalizer_ = -0.5 * d * std::log(2.0 * std::numbers::pi) - half_log_det;
}

double GaussianModel::md_squared(const Vector& delta) const {
  if (static_cast<std::size_t>(delta.size()) != dim()) {
    throw DimensionMismatch("gaussian model", dim(), delta.size());
  }
  const Vector w = chol_.triangularView<Eigen::Lower>().solve(delta);
  return w.squaredNorm();
}

Consistency gamma_consistency(const GaussianModel& g, const Vector& delta) {
  const double log_gamma = g.log_normalizer() - 0.5 * g.md_squared(delta);
  return {log_gamma, std::exp(log_gamma)};
}

double md_from_log_gamma(const GaussianModel& g, double log_gamma) {
  return std::sqrt(std::max(0.0, 2.0 * g.log_normalizer() - 2.0 * log_gamma));
}

bool consistency_bound_check(const GaussianModel& g, const Vector& delta,
                             double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  return std::sqrt(g.md_squared(delta)) <= epsilon * (1.0 + kBoundSlack);
}

MdSquareStats md_square_stats(const GaussianModel& g,
                              const std::vector<Vector>& deltas, int bins) {
  if (deltas.empty()) throw EmptyInput("md_square_stats: no perturbations");
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  std::vector<double> md2;
  md2.reserve(deltas.size());
  MdSquareStats stats;
  for (const Vector& d : deltas) {
    md2.push_back(g.md_squared(d));
    stats.mean += md2.back();
  }
  stats.mean /= static_cast<double>(md2.size());
  stats.mean_log_gamma = g.log_normalizer() - 0.5 * stats.mean;

  const double hi = *std::max_element(md2.begin(), md2.end());
  const double width = hi > 0.0 ? hi / bins : 1.0 / bins;
  for (int b = 0; b <= bins; ++b) stats.bin_edges.push_back(b * width);
  stats.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : md2) {
    auto b = static_cast<int>(v / width);
    b = std::clamp(b, 0, bins - 1);
    ++stats.counts[static_cast<std::size_t>(b)];
  }
  return stats;
}

void write_histogram_csv(const MdSquareStats& stats, const std::string& path) {
  AtomicFile out(path);
  out.stream() << "bin_low,bin_high,count\n";
  for (std::size_t b = 0; b < stats.counts.size(); ++b) {
    out.stream() << format_double(stats.bin_edges[b]) << ','
                 << format_double(stats.bin_edges[b + 1]) << ','
                 << stats.counts[b] << '\n';
  }
  out.commit();
}

}  // namespace nuadv
