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

#include "nuadv/numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nuadv/error.h"

namespace nuadv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSeriesTerms = 1000;

// Series expansion of P(a, x), good for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), good for x >= a + 1
// (modified Lentz).
double gamma_q_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// d/dx P(a, x).
double gamma_p_density(double a, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a));
}

}  // namespace

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw NotPositiveDefinite("cholesky: matrix is not square");
  }
  if (!is_symmetric(a)) {
    throw NotPositiveDefinite("cholesky: matrix is not symmetric");
  }
  const Eigen::Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) {
      throw NotPositiveDefinite("cholesky: non-positive pivot at " +
                                std::to_string(j));
    }
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Matrix sym_inv_sqrt(const Matrix& sigma, double ridge) {
  if (ridge < 0.0) throw std::invalid_argument("sym_inv_sqrt: negative ridge");
  if (!is_symmetric(sigma)) {
    throw NotPositiveDefinite("sym_inv_sqrt: matrix is not symmetric");
  }
  // Symmetrize exactly so the eigensolver sees a self-adjoint input.
  Matrix s = 0.5 * (sigma + sigma.transpose());
  s.diagonal().array() += ridge;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success) {
    throw NotPositiveDefinite("sym_inv_sqrt: eigendecomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > 0.0)) {
    throw NotPositiveDefinite("sym_inv_sqrt: eigenvalue " +
                              std::to_string(lambda.minCoeff()) +
                              " is not positive");
  }
  const Matrix& v = eig.eigenvectors();
  Matrix r = v * lambda.array().rsqrt().matrix().asDiagonal() * v.transpose();
  return 0.5 * (r + r.transpose());
}

double default_ridge(const Matrix& sigma) {
  if (sigma.rows() == 0) return 0.0;
  return 1e-6 * sigma.trace() / static_cast<double>(sigma.rows());
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double normal_quantile_approx(double p) {
  // Acklam's rational approximation.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - kLow) return -normal_quantile_approx(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double gamma_p_inv(double a, double p) {
  if (!(a > 0.0)) throw DomainError("gamma_p_inv: shape must be positive");
  if (!(p >= 0.0 && p < 1.0)) {
    throw DomainError("gamma_p_inv: probability must lie in [0, 1)");
  }
  if (p == 0.0) return 0.0;

  // Wilson-Hilferty seed; small-x power series seed when it goes negative.
  const double z = normal_quantile_approx(p);
  const double t = 1.0 / (9.0 * a);
  double x = a * std::pow(1.0 - t + z * std::sqrt(t), 3);
  if (!(x > 0.0) || !std::isfinite(x)) {
    x = std::exp((std::log(p) + std::lgamma(a + 1.0)) / a);
  }

  // Keep a bracket so a bad Newton step can fall back to bisection.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-12;
  for (int it = 0; it < kMaxIter; ++it) {
    const double f = gamma_p(a, x) - p;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double dens = gamma_p_density(a, x);
    double next;
    if (dens > 0.0 && std::isfinite(dens)) {
      const double newton = f / dens;
      // Halley correction; the second derivative over the first is
      // (a - 1) / x - 1.
      const double curv = (a - 1.0) / x - 1.0;
      const double denom = 1.0 - 0.5 * newton * curv;
      next = x - (std::abs(denom) > 0.1 ? newton / denom : newton);
    } else {
      next = std::numeric_limits<double>::quiet_NaN();
    }
    if (!(next > lo && next < hi)) {
      next = std::isinf(hi) ? 2.0 * std::max(x, 1.0) : 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= kTol * std::max(x, 1e-300)) return next;
    x = next;
  }
  return x;
}

double chi_cdf(int dof, double x) {
  if (dof < 1) throw DomainError("chi_cdf: dof must be >= 1");
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * dof, 0.5 * x * x);
}

double chi_quantile(int dof, double p) {
  if (dof < 1) throw DomainError("chi_quantile: dof must be >= 1");
  if (!(p >= 0.0 && p < 1.0)) {
    throw DomainError("chi_quantile: probability must lie in [0, 1)");
  }
  if (p == 0.0) return 0.0;
  return std::sqrt(2.0 * gamma_p_inv(0.5 * dof, p));
}

}  // namespace nuadv
