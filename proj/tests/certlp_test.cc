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


#include "nuadv/certlp.h"

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "nuadv/error.h"
#include "test_util.h"

namespace nuadv {
namespace {

using testing_util::random_spd;
using testing_util::random_vector;

constexpr NormOrder kNorms[] = {NormOrder::kOne, NormOrder::kTwo,
                                NormOrder::kInf};

MlpModel random_net(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  MlpModel m = make_he_uniform_model(dims, 0.0, seed);
  std::mt19937_64 rng(seed + 100);
  for (auto& b : m.biases) b = random_vector(b.size(), rng, 0.3);
  return m;
}

std::vector<OmegaTransform> omegas(int d, std::mt19937_64& rng) {
  std::vector<bool> mask(d, true);
  mask[0] = false;
  return {OmegaTransform::identity(d),
          OmegaTransform::diagonal(random_vector(d, rng).cwiseAbs().array() + 0.3),
          OmegaTransform::full(random_spd(d, rng)), OmegaTransform::mask(mask)};
}

// A point of the Omega ball: on the boundary half of the time.
Vector sample_delta(const OmegaTransform& om, const PerturbationBudget& b,
                    std::mt19937_64& rng) {
  const auto d = static_cast<int>(om.dim());
  Vector u = random_vector(d, rng);
  if (b.p == NormOrder::kInf) u = u.array().sign();
  Vector delta = om.invertible() ? om.apply_inverse(u) : om.restrict(u);
  double s = b.epsilon / omega_norm(om, delta, b.p);
  if (std::uniform_int_distribution<int>(0, 1)(rng)) {
    s *= std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
  return s * delta;
}

// Pre-activations of every layer.
std::vector<Vector> preactivations(const MlpModel& m, const Vector& x) {
  std::vector<Vector> z;
  Vector h = x;
  for (std::size_t i = 0; i < m.num_layers(); ++i) {
    z.push_back(m.weights[i] * h + m.biases[i]);
    h = z.back().cwiseMax(0.0);
  }
  return z;
}

MlpModel truncated(const MlpModel& m, std::size_t layers) {
  MlpModel t;
  t.layer_dims.assign(m.layer_dims.begin(), m.layer_dims.begin() + layers + 1);
  t.weights.assign(m.weights.begin(), m.weights.begin() + layers);
  t.biases.assign(m.biases.begin(), m.biases.begin() + layers);
  return t;
}

// A single affine layer has no relaxation: J is the exact minimum.
TEST(CertLpTest, LinearNetIsTight) {
  std::mt19937_64 rng(1);
  const MlpModel m = random_net({4, 3}, 1);
  const Vector x = random_vector(4, rng);
  Vector c(3);
  c << 1, -1, 0;
  for (const auto& om : omegas(4, rng)) {
    for (NormOrder p : kNorms) {
      const PerturbationBudget b{0.6, p};
      const double exact = c.dot(m.weights[0] * x + m.biases[0]) -
                           0.6 * inverse_norm(om, m.weights[0].transpose() * c,
                                              dual_norm(p));
      const auto bounds = activation_bounds(m, x, b, om);
      EXPECT_NEAR(dual_objective(m, bounds, x, b, om, c), exact, 1e-12);
    }
  }
}

// When every hidden unit is provably active the network is affine on the
// ball, so J again equals the exact minimum.
TEST(CertLpTest, AllActiveNetIsTight) {
  std::mt19937_64 rng(2);
  MlpModel m = random_net({3, 5, 2}, 2);
  m.biases[0].setConstant(50.0);
  const Vector x = random_vector(3, rng);
  Vector c(2);
  c << 1, -1;
  for (const auto& om : omegas(3, rng)) {
    const PerturbationBudget b{0.5, NormOrder::kTwo};
    const auto bounds = activation_bounds(m, x, b, om);
    for (std::size_t r = 0; r < bounds[0].size(); ++r) {
      ASSERT_EQ(bounds[0].state(r), UnitState::kActive);
    }
    const Matrix w = m.weights[1] * m.weights[0];
    const double exact =
        c.dot(w * x + m.weights[1] * m.biases[0] + m.biases[1]) -
        0.5 * inverse_norm(om, w.transpose() * c, NormOrder::kTwo);
    EXPECT_NEAR(dual_objective(m, bounds, x, b, om, c), exact, 1e-10);
  }
}

// The forward recurrence must reproduce, unit by unit, the backward dual
// with c = +-e_m on the truncated network.
TEST(CertLpTest, ForwardBoundsMatchBackwardDual) {
  std::mt19937_64 rng(3);
  const MlpModel m = random_net({4, 6, 5, 4, 2}, 3);
  for (const auto& om : omegas(4, rng)) {
    for (NormOrder p : kNorms) {
      const Vector x = random_vector(4, rng);
      const PerturbationBudget b{0.8, p};
      const auto bounds = activation_bounds(m, x, b, om);
      ASSERT_EQ(bounds.size(), m.num_layers());
      int spanning = 0;
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        const MlpModel t = truncated(m, i + 1);
        for (std::size_t r = 0; r < bounds[i].size(); ++r) {
          const Vector e = Vector::Unit(bounds[i].size(), r);
          const double lo = dual_objective(t, bounds, x, b, om, e);
          const double hi = -dual_objective(t, bounds, x, b, om, -e);
          EXPECT_NEAR(bounds[i].lower(r), lo, 1e-9 * (1 + std::abs(lo)));
          EXPECT_NEAR(bounds[i].upper(r), hi, 1e-9 * (1 + std::abs(hi)));
          if (i + 1 < bounds.size() &&
              bounds[i].state(r) == UnitState::kSpanning) {
            ++spanning;
          }
        }
      }
      EXPECT_GT(spanning, 0);  // otherwise the relaxation is not exercised
    }
  }
}

TEST(CertLpTest, BoundsAreSoundUnderSampling) {
  std::mt19937_64 rng(4);
  const MlpModel m = random_net({4, 8, 6, 3}, 4);
  for (const auto& om : omegas(4, rng)) {
    for (NormOrder p : kNorms) {
      const Vector x = random_vector(4, rng);
      const PerturbationBudget b{0.7, p};
      const int label = predict(m, x);
      const auto report = certify(m, x, label, b, om);
      for (int t = 0; t < 2000; ++t) {
        const Vector delta = sample_delta(om, b, rng);
        const auto z = preactivations(m, x + delta);
        for (std::size_t i = 0; i < z.size(); ++i) {
          EXPECT_TRUE((z[i].array() >= report.bounds[i].lower.array() - 1e-9).all());
          EXPECT_TRUE((z[i].array() <= report.bounds[i].upper.array() + 1e-9).all());
        }
        for (int k = 0; k < 3; ++k) {
          if (k == label) continue;
          EXPECT_GE(z.back()(label) - z.back()(k),
                    report.objectives[k] - 1e-9);
        }
      }
    }
  }
}

TEST(CertLpTest, MarginShrinksWithEpsilon) {
  std::mt19937_64 rng(5);
  const MlpModel m = random_net({4, 8, 8, 2}, 5);
  for (const auto& om : omegas(4, rng)) {
    const Vector x = random_vector(4, rng);
    const int label = predict(m, x);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps = 0.05; eps < 2.0; eps += 0.05) {
      const double margin =
          certify(m, x, label, {eps, NormOrder::kTwo}, om).margin;
      EXPECT_LE(margin, prev + 1e-12);
      prev = margin;
    }
  }
}

// On a linear classifier the certificate flips exactly at the critical
// radius margin / ||Omega^-1 w||_q.
TEST(CertLpTest, CertifiesUpToCriticalRadiusOnLinearNet) {
  MlpModel m = make_zero_model({2, 2});
  m.weights[0] << 0, 0, 1, 2;
  m.biases[0] << 0, -1;
  Vector x(2);
  x << 2, 1;  // logit margin 3 for class 1
  const auto om = OmegaTransform::diagonal((Vector(2) << 2, 0.5).finished());
  const Vector wd = (Vector(2) << 1, 2).finished();
  const double critical = 3.0 / inverse_norm(om, wd, NormOrder::kTwo);
  EXPECT_TRUE(certify(m, x, 1, {critical * 0.999, NormOrder::kTwo}, om).certified);
  EXPECT_FALSE(certify(m, x, 1, {critical * 1.001, NormOrder::kTwo}, om).certified);
  EXPECT_FALSE(certify(m, x, 0, {1e-3, NormOrder::kTwo}, om).certified);
}

TEST(CertLpTest, ScaledOmegaEqualsScaledEpsilon) {
  std::mt19937_64 rng(6);
  const MlpModel m = random_net({3, 6, 2}, 6);
  const Vector x = random_vector(3, rng);
  const auto om = OmegaTransform::full(random_spd(3, rng));
  const double a = certify(m, x, 0, {1.0, NormOrder::kTwo}, om.scaled(2.0)).margin;
  const double b = certify(m, x, 0, {0.5, NormOrder::kTwo}, om).margin;
  EXPECT_NEAR(a, b, 1e-10);
}

TEST(CertLpTest, MaskIgnoresImmutableFeatures) {
  std::mt19937_64 rng(7);
  MlpModel m = random_net({3, 5, 2}, 7);
  const Vector x = random_vector(3, rng);
  const auto om = OmegaTransform::mask({false, true, true});
  const PerturbationBudget b{0.4, NormOrder::kInf};
  const double before = certify(m, x, 0, b, om).margin;
  // Scaling the immutable column scales only the nominal value of x_0.
  m.weights[0].col(0) *= 3.0;
  Vector x2 = x;
  x2(0) /= 3.0;
  EXPECT_NEAR(certify(m, x2, 0, b, om).margin, before, 1e-10);
}

TEST(CertLpTest, RejectsBadInputs) {
  const MlpModel m = random_net({3, 4, 2}, 8);
  const PerturbationBudget b{0.1, NormOrder::kTwo};
  EXPECT_THROW(certify(m, Vector::Ones(2), 0, b, OmegaTransform::identity(3)),
               DimensionMismatch);
  EXPECT_THROW(certify(m, Vector::Ones(3), 0, b, OmegaTransform::identity(2)),
               DimensionMismatch);
  EXPECT_THROW(certify(m, Vector::Ones(3), 2, b, OmegaTransform::identity(3)),
               std::invalid_argument);
}

}  // namespace
}  // namespace nuadv
