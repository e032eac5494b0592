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

// The constraint transform Omega of the perturbation set
// { delta : ||Omega delta||_p <= eps }.
//
// Four representations are supported:
//   identity  the ordinary l_p ball;
//   diagonal  a weighted norm, Omega = diag(w) with w > 0;
//   full      a symmetric positive-definite matrix, e.g. Sigma^(-1/2);
//   mask      perturbations restricted to a set of mutable features.
// A mask stores the mutable set rather than the singular 0/1 diagonal; its
// "inverse" operations are defined on that support.

#ifndef NUADV_OMEGA_H_
#define NUADV_OMEGA_H_

#include <string>
#include <vector>

#include "nuadv/numerics.h"

namespace nuadv {

enum class NormOrder { kOne, kTwo, kInf };

// Conjugate order: 2 <-> 2, inf <-> 1.
NormOrder dual_norm(NormOrder p);
double vector_norm(const Vector& v, NormOrder p);
std::string norm_name(NormOrder p);
NormOrder parse_norm(const std::string& s);  // "1", "2", "inf"

class OmegaTransform {
 public:
  enum class Kind { kIdentity, kDiagonal, kFull, kMask };

  static OmegaTransform identity(std::size_t dim);
  // Throws std::invalid_argument unless every weight is finite and > 0.
  static OmegaTransform diagonal(Vector weights);
  // Throws NotPositiveDefinite unless m is symmetric positive definite.
  static OmegaTransform full(Matrix m);
  // Throws EmptyMutableSet when no feature is mutable.
  static OmegaTransform mask(std::vector<bool> mutable_set);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool invertible() const { return kind_ != Kind::kMask; }

  // Free-form origin tag ("md-target", "pearson", ...) carried into reports.
  const std::string& label() const { return label_; }
  OmegaTransform& set_label(std::string label);

  const Vector& weights() const { return weights_; }      // kDiagonal
  const Matrix& matrix() const { return matrix_; }        // kFull
  const Matrix& inverse_matrix() const { return inverse_; }  // kFull
  const std::vector<bool>& mutable_set() const { return mutable_; }  // kMask

  // Omega * delta. For a mask, immutable coordinates are zeroed.
  Vector apply(const Vector& delta) const;
  // Omega^-1 * u. Throws NonInvertibleOmega for a mask.
  Vector apply_inverse(const Vector& u) const;
  // Zeroes immutable coordinates for a mask; identity otherwise.
  Vector restrict(const Vector& v) const;
  // Dense d x d matrix (the 0/1 diagonal for a mask).
  Matrix dense() const;
  // c * Omega for c > 0. Masks cannot be scaled.
  OmegaTransform scaled(double c) const;

 private:
  OmegaTransform() = default;
  void check_dim(const Vector& v, const char* what) const;

  Kind kind_ = Kind::kIdentity;
  std::size_t dim_ = 0;
  std::string label_;
  Vector weights_;
  Matrix matrix_;
  Matrix inverse_;
  std::vector<bool> mutable_;
};

std::string kind_name(OmegaTransform::Kind kind);

// ||Omega delta||_p.
double omega_norm(const OmegaTransform& omega, const Vector& delta,
                  NormOrder p);

// ||Omega^-1 v||_q, the support function of the unit Omega-ball in direction
// v. For a mask this is ||v restricted to the mutable set||_q.
double inverse_norm(const OmegaTransform& omega, const Vector& v, NormOrder q);

// Floor applied to |importance| before inversion.
inline constexpr double kImportanceFloor = 1e-3;

// Omega = (Sigma + ridge I)^(-1/2). A negative ridge selects default_ridge.
OmegaTransform omega_mahalanobis(const Matrix& covariance, double ridge = -1.0);

// Omega = diag(1 / c_i) / ||1 / c||_2 with c_i = max(|importance_i|, floor).
OmegaTransform omega_from_importance(const Vector& importance,
                                     double floor = kImportanceFloor);

// Mask from feature names; throws SchemaError for unknown names and
// EmptyMutableSet when the list is empty.
OmegaTransform omega_mask(const std::vector<std::string>& feature_names,
                          const std::vector<std::string>& mutable_names);

}  // namespace nuadv

#endif  // NUADV_OMEGA_H_
