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

// Dense linear algebra helpers and the special functions used by the
// certification code. Everything is double precision.

#ifndef NUADV_NUMERICS_H_
#define NUADV_NUMERICS_H_

#include <Eigen/Dense>

namespace nuadv {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Absolute asymmetry tolerated by the symmetric routines.
inline constexpr double kSymmetryTolerance = 1e-10;

bool is_symmetric(const Matrix& a, double tol = kSymmetryTolerance);

// Lower-triangular L with L * L^T == a. Throws NotPositiveDefinite when a is
// not square, not symmetric, or has a non-positive pivot.
Matrix cholesky(const Matrix& a);

// (sigma + ridge * I)^(-1/2) through a symmetric eigendecomposition. The
// result R is symmetric and R^T R == (sigma + ridge * I)^-1, so ||R d||_2 is
// the Mahalanobis length of d.
Matrix sym_inv_sqrt(const Matrix& sigma, double ridge = 0.0);

// 1e-6 * trace(sigma) / d.
double default_ridge(const Matrix& sigma);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Inverse of P(a, .) for p in [0, 1). Newton/Halley iteration seeded with
// the Wilson-Hilferty approximation.
double gamma_p_inv(double a, double p);

// CDF of the chi distribution (the norm of a standard normal vector) with
// dof degrees of freedom.
double chi_cdf(int dof, double x);

// Quantile of the chi distribution. Throws DomainError unless 0 <= p < 1.
double chi_quantile(int dof, double p);

// Standard normal quantile, accurate to ~1e-9; used as a starting point.
double normal_quantile_approx(double p);

}  // namespace nuadv

#endif  // NUADV_NUMERICS_H_
