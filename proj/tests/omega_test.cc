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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "nuadv/error.h"
#include "test_util.h"

namespace nuadv {
namespace {

using testing_util::random_spd;
using testing_util::random_vector;

TEST(OmegaTest, NormsAndDuals) {
  Vector v(3);
  v << 3, -4, 1;
  EXPECT_DOUBLE_EQ(vector_norm(v, NormOrder::kOne), 8.0);
  EXPECT_DOUBLE_EQ(vector_norm(v, NormOrder::kTwo), std::sqrt(26.0));
  EXPECT_DOUBLE_EQ(vector_norm(v, NormOrder::kInf), 4.0);
  EXPECT_EQ(dual_norm(NormOrder::kTwo), NormOrder::kTwo);
  EXPECT_EQ(dual_norm(NormOrder::kInf), NormOrder::kOne);
  EXPECT_EQ(dual_norm(NormOrder::kOne), NormOrder::kInf);
  for (auto p : {NormOrder::kOne, NormOrder::kTwo, NormOrder::kInf}) {
    EXPECT_EQ(parse_norm(norm_name(p)), p);
  }
  EXPECT_THROW(parse_norm("3"), std::invalid_argument);
}

TEST(OmegaTest, ApplyAndInverseAreConsistent) {
  std::mt19937_64 rng(1);
  const Vector w = random_vector(4, rng).cwiseAbs().array() + 0.5;
  const std::vector<OmegaTransform> omegas = {
      OmegaTransform::identity(4), OmegaTransform::diagonal(w),
      OmegaTransform::full(random_spd(4, rng))};
  for (const auto& om : omegas) {
    const Vector u = random_vector(4, rng);
    EXPECT_NEAR((om.apply(om.apply_inverse(u)) - u).norm(), 0.0, 1e-10);
    EXPECT_NEAR((om.dense() * u - om.apply(u)).norm(), 0.0, 1e-12);
  }
}

// Dual-norm identity: max over ||Omega d||_p <= 1 of v.d is ||Omega^-T v||_q.
TEST(OmegaTest, InverseNormIsSupportFunction) {
  std::mt19937_64 rng(2);
  const OmegaTransform om = OmegaTransform::full(random_spd(3, rng));
  const Vector v = random_vector(3, rng);
  for (auto p : {NormOrder::kOne, NormOrder::kTwo, NormOrder::kInf}) {
    const double support = inverse_norm(om, v, dual_norm(p));
    double best = 0.0;
    for (int t = 0; t < 20000; ++t) {
      const Vector u = random_vector(3, rng);
      const Vector d = om.apply_inverse(u / vector_norm(u, p));
      EXPECT_LE(v.dot(d), support + 1e-9);
      best = std::max(best, v.dot(d));
    }
    EXPECT_GT(best, 0.9 * support) << norm_name(p);
  }
}

TEST(OmegaTest, MaskBehaviour) {
  const OmegaTransform m = OmegaTransform::mask({true, false, true});
  EXPECT_FALSE(m.invertible());
  Vector v(3);
  v << 1, 2, -3;
  EXPECT_EQ(m.restrict(v), Vector((Vector(3) << 1, 0, -3).finished()));
  EXPECT_DOUBLE_EQ(omega_norm(m, v, NormOrder::kInf), 3.0);
  EXPECT_DOUBLE_EQ(inverse_norm(m, v, NormOrder::kOne), 4.0);
  EXPECT_THROW(m.apply_inverse(v), NonInvertibleOmega);
  EXPECT_THROW(m.scaled(2.0), std::invalid_argument);
  EXPECT_THROW(OmegaTransform::mask({false, false}), EmptyMutableSet);
}

TEST(OmegaTest, ConstructorsValidate) {
  EXPECT_THROW(OmegaTransform::diagonal(Vector::Zero(2)),
               std::invalid_argument);
  Matrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  EXPECT_THROW(OmegaTransform::full(indefinite), NotPositiveDefinite);
  EXPECT_THROW(OmegaTransform::identity(2).apply(Vector::Ones(3)),
               DimensionMismatch);
}

TEST(OmegaTest, ScaledMultipliesNorm) {
  std::mt19937_64 rng(3);
  const OmegaTransform om = OmegaTransform::full(random_spd(3, rng));
  const Vector d = random_vector(3, rng);
  EXPECT_NEAR(omega_norm(om.scaled(2.5), d, NormOrder::kTwo),
              2.5 * omega_norm(om, d, NormOrder::kTwo), 1e-10);
}

TEST(OmegaTest, MahalanobisWhitens) {
  std::mt19937_64 rng(4);
  const Matrix sigma = random_spd(4, rng);
  const OmegaTransform om = omega_mahalanobis(sigma, 0.0);
  EXPECT_EQ(om.label(), "md");
  const Vector d = random_vector(4, rng);
  EXPECT_NEAR(std::pow(omega_norm(om, d, NormOrder::kTwo), 2),
              d.dot(sigma.ldlt().solve(d)), 1e-8);
}

TEST(OmegaTest, ImportanceWeightsAreNormalizedReciprocals) {
  Vector c(3);
  c << 0.5, 0.25, 0.0;
  const OmegaTransform om = omega_from_importance(c);
  ASSERT_EQ(om.kind(), OmegaTransform::Kind::kDiagonal);
  EXPECT_NEAR(om.weights().norm(), 1.0, 1e-15);
  EXPECT_NEAR(om.weights()(1) / om.weights()(0), 2.0, 1e-12);
  EXPECT_NEAR(om.weights()(2) / om.weights()(0), 0.5 / kImportanceFloor, 1e-9);
}

TEST(OmegaTest, MaskFromNames) {
  const std::vector<std::string> names = {"a", "b", "c"};
  const auto m = omega_mask(names, {"c", "a"});
  EXPECT_EQ(m.mutable_set(), (std::vector<bool>{true, false, true}));
  EXPECT_THROW(omega_mask(names, {"z"}), SchemaError);
  EXPECT_THROW(omega_mask(names, {}), EmptyMutableSet);
}

}  // namespace
}  // namespace nuadv
