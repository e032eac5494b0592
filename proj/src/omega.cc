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

#include "nuadv/omega.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "nuadv/error.h"

namespace nuadv {

NormOrder dual_norm(NormOrder p) {
  switch (p) {
    case NormOrder::kOne:
      return NormOrder::kInf;
    case NormOrder::kTwo:
      return NormOrder::kTwo;
    case NormOrder::kInf:
      return NormOrder::kOne;
  }
  return NormOrder::kTwo;
}

double vector_norm(const Vector& v, NormOrder p) {
  if (v.size() == 0) return 0.0;
  switch (p) {
    case NormOrder::kOne:
      return v.lpNorm<1>();
    case NormOrder::kTwo:
      return v.norm();
    case NormOrder::kInf:
      return v.lpNorm<Eigen::Infinity>();
  }
  return v.norm();
}

std::string norm_name(NormOrder p) {
  switch (p) {
    case NormOrder::kOne:
      return "1";
    case NormOrder::kTwo:
      return "2";
    case NormOrder::kInf:
      return "inf";
  }
  return "2";
}

NormOrder parse_norm(const std::string& s) {
  if (s == "1") return NormOrder::kOne;
  if (s == "2") return NormOrder::kTwo;
  if (s == "inf") return NormOrder::kInf;
  throw std::invalid_argument("unknown norm order '" + s + "'");
}

OmegaTransform OmegaTransform::identity(std::size_t dim) {
  OmegaTransform o;
  o.kind_ = Kind::kIdentity;
  o.dim_ = dim;
  o.label_ = "identity";
  return o;
}

OmegaTransform OmegaTransform::diagonal(Vector weights) {
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i))) {
      throw std::invalid_argument("diagonal omega weights must be positive");
    }
  }
  OmegaTransform o;
  o.kind_ = Kind::kDiagonal;
  o.dim_ = static_cast<std::size_t>(weights.size());
  o.label_ = "diagonal";
  o.weights_ = std::move(weights);
  return o;
}

OmegaTransform OmegaTransform::full(Matrix m) {
  if (!is_symmetric(m)) throw NotPositiveDefinite("omega is not symmetric");
  Matrix sym = 0.5 * (m + m.transpose());
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("omega is not positive definite");
  }
  OmegaTransform o;
  o.kind_ = Kind::kFull;
  o.dim_ = static_cast<std::size_t>(m.rows());
  o.label_ = "full";
  o.inverse_ = llt.solve(Matrix::Identity(m.rows(), m.cols()));
  o.inverse_ = 0.5 * (o.inverse_ + o.inverse_.transpose());
  o.matrix_ = std::move(sym);
  return o;
}

OmegaTransform OmegaTransform::mask(std::vector<bool> mutable_set) {
  if (std::none_of(mutable_set.begin(), mutable_set.end(),
                   [](bool b) { return b; })) {
    throw EmptyMutableSet();
  }
  OmegaTransform o;
  o.kind_ = Kind::kMask;
  o.dim_ = mutable_set.size();
  o.label_ = "mask";
  o.mutable_ = std::move(mutable_set);
  return o;
}

OmegaTransform& OmegaTransform::set_label(std::string label) {
  label_ = std::move(label);
  return *this;
}

void OmegaTransform::check_dim(const Vector& v, const char* what) const {
  if (static_cast<std::size_t>(v.size()) != dim_) {
    throw DimensionMismatch(what, dim_, v.size());
  }
}

Vector OmegaTransform::apply(const Vector& delta) const {
  check_dim(delta, "omega apply");
  switch (kind_) {
    case Kind::kIdentity:
      return delta;
    case Kind::kDiagonal:
      return weights_.cwiseProduct(delta);
    case Kind::kFull:
      return matrix_ * delta;
    case Kind::kMask:
      return restrict(delta);
  }
  return delta;
}

Vector OmegaTransform::apply_inverse(const Vector& u) const {
  check_dim(u, "omega apply_inverse");
  switch (kind_) {
    case Kind::kIdentity:
      return u;
    case Kind::kDiagonal:
      return u.cwiseQuotient(weights_);
    case Kind::kFull:
      return inverse_ * u;
    case Kind::kMask:
      throw NonInvertibleOmega("mask omega has no inverse");
  }
  return u;
}

Vector OmegaTransform::restrict(const Vector& v) const {
  check_dim(v, "omega restrict");
  if (kind_ != Kind::kMask) return v;
  Vector out = v;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!mutable_[i]) out(static_cast<Eigen::Index>(i)) = 0.0;
  }
  return out;
}

Matrix OmegaTransform::dense() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  switch (kind_) {
    case Kind::kIdentity:
      return Matrix::Identity(n, n);
    case Kind::kDiagonal:
      return weights_.asDiagonal();
    case Kind::kFull:
      return matrix_;
    case Kind::kMask: {
      Matrix m = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) m(i, i) = mutable_[i] ? 1.0 : 0.0;
      return m;
    }
  }
  return Matrix::Identity(n, n);
}

OmegaTransform OmegaTransform::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("omega scale must be positive");
  OmegaTransform o;
  switch (kind_) {
    case Kind::kIdentity:
      o = diagonal(Vector::Constant(static_cast<Eigen::Index>(dim_), c));
      break;
    case Kind::kDiagonal:
      o = diagonal(c * weights_);
      break;
    case Kind::kFull:
      o = full(c * matrix_);
      break;
    case Kind::kMask:
      throw std::invalid_argument("mask omega cannot be scaled");
  }
  o.label_ = label_;
  return o;
}

std::string kind_name(OmegaTransform::Kind kind) {
  switch (kind) {
    case OmegaTransform::Kind::kIdentity:
      return "identity";
    case OmegaTransform::Kind::kDiagonal:
      return "diagonal";
    case OmegaTransform::Kind::kFull:
      return "full";
    case OmegaTransform::Kind::kMask:
      return "mask";
  }
  return "identity";
}

double omega_norm(const OmegaTransform& omega, const Vector& delta,
                  NormOrder p) {
  return vector_norm(omega.apply(delta), p);
}

double inverse_norm(const OmegaTransform& omega, const Vector& v,
                    NormOrder q) {
  if (omega.kind() == OmegaTransform::Kind::kMask) {
    return vector_norm(omega.restrict(v), q);
  }
  // Every invertible kind is symmetric, so Omega^-T == Omega^-1.
  return vector_norm(omega.apply_inverse(v), q);
}

OmegaTransform omega_mahalanobis(const Matrix& covariance, double ridge) {
  const double r = ridge < 0.0 ? default_ridge(covariance) : ridge;
  OmegaTransform o = OmegaTransform::full(sym_inv_sqrt(covariance, r));
  o.set_label("md");
  return o;
}

OmegaTransform omega_from_importance(const Vector& importance, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("floor must be positive");
  Vector inv(importance.size());
  for (Eigen::Index i = 0; i < importance.size(); ++i) {
    if (!std::isfinite(importance(i))) {
      throw std::invalid_argument("non-finite importance");
    }
    inv(i) = 1.0 / std::max(std::abs(importance(i)), floor);
  }
  OmegaTransform o = OmegaTransform::diagonal(inv / inv.norm());
  o.set_label("importance");
  return o;
}

OmegaTransform omega_mask(const std::vector<std::string>& feature_names,
                          const std::vector<std::string>& mutable_names) {
  std::vector<bool> mut(feature_names.size(), false);
  for (const std::string& name : mutable_names) {
    const auto it =
        std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) {
      throw SchemaError("mask: unknown feature '" + name + "'");
    }
    mut[static_cast<std::size_t>(it - feature_names.begin())] = true;
  }
  OmegaTransform o = OmegaTransform::mask(std::move(mut));
  return o;
}

}  // namespace nuadv
