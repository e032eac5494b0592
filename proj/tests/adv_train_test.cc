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


#include "nuadv/adv_train.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "nuadv/error.h"

namespace nuadv {
namespace {

Dataset blobs(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix x(n, 3);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = i % 3 == 0 ? 1 : 0;
    for (int j = 0; j < 3; ++j) x(i, j) = normal(rng) + (y[i] ? 1.0 : -1.0);
  }
  return make_dataset(x, y, {"a", "b", "c"});
}

AdvTrainConfig small_config() {
  AdvTrainConfig cfg;
  cfg.base.epochs = 4;
  cfg.base.seed = 3;
  cfg.budget = {0.5, NormOrder::kTwo};
  return cfg;
}

void expect_same_weights(const MlpModel& a, const MlpModel& b, double tol) {
  for (std::size_t l = 0; l < a.num_layers(); ++l) {
    EXPECT_LE((a.weights[l] - b.weights[l]).cwiseAbs().maxCoeff(), tol);
    EXPECT_LE((a.biases[l] - b.biases[l]).cwiseAbs().maxCoeff(), tol);
  }
}

TEST(AdvTrainTest, ZeroFractionEqualsCleanTraining) {
  const Dataset d = blobs(90, 1);
  const MlpModel init = make_he_uniform_model({3, 8, 2}, 0.2, 1);
  AdvTrainConfig cfg = small_config();
  cfg.positive_fraction = 0.0;
  const auto adv = adversarial_train(init, d, cfg);
  const auto clean = train_clean(init, d, cfg.base);
  expect_same_weights(adv.train.model, clean.model, 0.0);
}

TEST(AdvTrainTest, TinyBudgetMatchesCleanTraining) {
  const Dataset d = blobs(90, 2);
  const MlpModel init = make_he_uniform_model({3, 8, 2}, 0.2, 2);
  AdvTrainConfig cfg = small_config();
  cfg.budget.epsilon = 1e-12;
  const auto adv = adversarial_train(init, d, cfg);
  const auto clean = train_clean(init, d, cfg.base);
  expect_same_weights(adv.train.model, clean.model, 1e-6);
}

TEST(AdvTrainTest, PerturbsRoundedFractionOfPositivesEachEpoch) {
  const Dataset d = blobs(90, 3);  // 30 positives
  AdvTrainConfig cfg = small_config();
  const auto r =
      adversarial_train(make_he_uniform_model({3, 8, 2}, 0.0, 3), d, cfg);
  ASSERT_EQ(r.perturbed_per_epoch.size(), 4u);
  for (auto n : r.perturbed_per_epoch) EXPECT_EQ(n, 27u);
}

TEST(AdvTrainTest, AllClassesPerturbsEverySample) {
  const Dataset d = blobs(90, 3);
  AdvTrainConfig cfg = small_config();
  cfg.perturb_class = kAllClasses;
  cfg.positive_fraction = 1.0;
  const auto r =
      adversarial_train(make_he_uniform_model({3, 8, 2}, 0.0, 3), d, cfg);
  for (auto n : r.perturbed_per_epoch) EXPECT_EQ(n, 90u);
}

TEST(AdvTrainTest, RejectsMissingClassAndBadFraction) {
  Matrix x(3, 3);
  x.setRandom();
  const Dataset d = make_dataset(x, {0, 0, 0}, {"a", "b", "c"});
  AdvTrainConfig cfg = small_config();
  EXPECT_THROW(adversarial_train(make_zero_model({3, 2}), d, cfg),
               NoPositiveSamples);
  cfg.positive_fraction = 1.5;
  EXPECT_THROW(adversarial_train(make_zero_model({3, 2}), blobs(30, 1), cfg),
               std::invalid_argument);
}

TEST(AdvTrainTest, DeterministicPerSeed) {
  const Dataset d = blobs(60, 4);
  const MlpModel init = make_he_uniform_model({3, 8, 2}, 0.2, 4);
  AdvTrainConfig cfg = small_config();
  cfg.attack.init = AttackInit::kRandom;
  const auto a = adversarial_train(init, d, cfg);
  const auto b = adversarial_train(init, d, cfg);
  expect_same_weights(a.train.model, b.train.model, 0.0);
}

// On a linear score PGD ends on the boundary along -w, so the mean l2 is
// eps for I and eps / 2 for 2I; each match is within 2%, hence the ratio is
// within a factor 1.02 / 0.98 of 2.
TEST(BudgetMatchTest, ScaledOmegaNeedsScaledEpsilon) {
  const Dataset d = blobs(60, 5);
  MlpModel m = make_zero_model({3, 2});
  m.weights[0].row(1) << 1.0, -0.5, 2.0;
  AttackConfig attack;
  const std::vector<OmegaTransform> omegas = {
      OmegaTransform::identity(3), OmegaTransform::identity(3).scaled(2.0)};
  const auto eps = match_budgets(d, omegas, 0.4, attack, m);
  ASSERT_EQ(eps.size(), 2u);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.labels[i] == 1) rows.push_back(i);
  for (std::size_t k = 0; k < 2; ++k) {
    AttackConfig a = attack;
    a.constraint = ConstraintSet::nonuniform(omegas[k]);
    const double got =
        mean_perturbation_l2(m, d, rows, {eps[k], NormOrder::kTwo}, a);
    EXPECT_NEAR(got, 0.4, 0.02 * 0.4);
  }
  EXPECT_NEAR(eps[1] / eps[0], 2.0, 2.0 * (1.02 / 0.98 - 1.0));
}

TEST(BudgetMatchTest, FailsWhenTargetIsUnreachable) {
  const Dataset d = blobs(30, 6);
  AttackConfig attack;
  BudgetMatchOptions opt;
  opt.max_evaluations = 5;
  // A zero model has no gradient, so no epsilon moves anything.
  EXPECT_THROW(match_budgets(d, {OmegaTransform::identity(3)}, 1.0, attack,
                             make_zero_model({3, 2}), NormOrder::kTwo, opt),
               CalibrationFailed);
}

TEST(DefenseTest, CountsSurvivingPositives) {
  const Dataset d = blobs(90, 7);
  // Class-1 logit 100: no budget of 0.1 can flip it.
  MlpModel m = make_zero_model({3, 2});
  m.biases[0](1) = 100.0;
  m.weights[0].row(1).setConstant(0.01);
  const auto r = evaluate_defense(m, d, {0.1, NormOrder::kTwo}, {});
  EXPECT_EQ(r.attacked, 30u);
  EXPECT_DOUBLE_EQ(r.defense_success_rate, 1.0);
  EXPECT_NEAR(r.clean_accuracy, 1.0 / 3.0, 1e-12);
  // Negated: everything is predicted negative, nothing is defended.
  m.biases[0](1) = -100.0;
  const auto s = evaluate_defense(m, d, {0.1, NormOrder::kTwo}, {});
  EXPECT_DOUBLE_EQ(s.defense_success_rate, 0.0);
}

TEST(DefenseTest, LargerBudgetNeverDefendsMoreOnLinearModel) {
  const Dataset d = blobs(90, 8);
  MlpModel m = make_zero_model({3, 2});
  m.weights[0].row(1).setConstant(1.0);
  double prev = 1.0;
  for (double eps : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const auto r = evaluate_defense(m, d, {eps, NormOrder::kTwo}, {});
    EXPECT_LE(r.defense_success_rate, prev);
    prev = r.defense_success_rate;
  }
  EXPECT_LT(prev, 0.5);
}

}  // namespace
}  // namespace nuadv
