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


// Adversarial training against a PGD attack should defend better than
// standard training against that same attack (majority over seeds).

#include <cstdio>
#include <random>

#include <gtest/gtest.h>

#include "nuadv/adv_train.h"
#include "nuadv/data.h"
#include "nuadv/omega.h"

namespace nuadv {
namespace {

constexpr int kSeeds = 5;

struct Comparison {
  double standard;
  double adversarial;
};

Comparison compare(const Dataset& train, const Dataset& test, const AdvTrainConfig& cfg,
                   const std::vector<std::size_t>& dims) {
  const MlpModel init = make_he_uniform_model(dims, cfg.base.dropout_enabled ? 0.2 : 0.0,
                                              cfg.base.seed);
  const MlpModel standard = train_clean(init, train, cfg.base).model;
  const MlpModel robust = adversarial_train(init, train, cfg).train.model;
  return {evaluate_defense(standard, test, cfg.budget, cfg.attack).defense_success_rate,
          evaluate_defense(robust, test, cfg.budget, cfg.attack).defense_success_rate};
}

// Jittered grid (x-spacing 1.05, y-spacing 1.7) with random labels, centred
// and scaled by 1/2.5 on both axes; every point is perturbed during training.
TEST(DefenseProperty, ToyAdversarialTrainingBeatsStandard) {
  const double scale = 2.5;
  const OmegaTransform ellipse =
      OmegaTransform::diagonal((Vector(2) << 1 / 0.5, 1 / 0.8).finished());
  int wins = 0;
  for (int s = 0; s < kSeeds; ++s) {
    std::mt19937_64 rng(1000 + s);
    std::uniform_real_distribution<double> jitter(-0.01, 0.01);
    std::bernoulli_distribution coin(0.5);
    Matrix x(40, 2);
    std::vector<int> y(40);
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 8; ++c) {
        const int i = r * 8 + c;
        x(i, 0) = (1.05 * (c - 3.5) + jitter(rng)) / scale;
        x(i, 1) = (1.7 * (r - 2.0) + jitter(rng)) / scale;
        y[i] = coin(rng);
      }
    }
    const Dataset data = make_dataset(x, y, {"x", "y"});
    AdvTrainConfig cfg;
    cfg.base.epochs = 2000;
    cfg.base.batch_size = 8;
    cfg.base.learning_rate = 0.05;
    cfg.base.seed = 1000 + s;
    cfg.base.dropout_enabled = false;
    cfg.perturb_class = kAllClasses;
    cfg.positive_fraction = 1.0;
    cfg.budget = {1.0 / scale, NormOrder::kTwo};
    cfg.attack.constraint = ConstraintSet::nonuniform(ellipse);
    const Comparison c = compare(data, data, cfg, {2, 64, 32, 16, 2});
    std::printf("seed %d: standard %.4f adversarial %.4f\n", s, c.standard, c.adversarial);
    wins += c.adversarial > c.standard;
  }
  EXPECT_GT(wins, kSeeds / 2);
}

// NU-MDtarget training at a matched average ||delta||_2 of 1.
TEST(DefenseProperty, GermanCreditAdversarialTrainingBeatsStandard) {
  const Dataset raw = load_csv(NUADV_GERMAN_CREDIT, "label");
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const TrainTestSplit split = train_test_split(raw, 0.2, seed);
    const auto [train, stats] = standardize(split.train);
    const Dataset test = stats.apply(split.test);
    const std::size_t d = train.dim();
    AdvTrainConfig cfg;
    cfg.base.seed = seed;
    cfg.attack.seed = seed;
    const OmegaTransform md_target =
        omega_mahalanobis(covariance(train, ClassFilter::kNegativeOnly));
    const MlpModel surrogate =
        train_clean(make_he_uniform_model({d, 64, 32, 16, 2}, 0.2, seed), train, cfg.base)
            .model;
    const double eps = match_budgets(train, {md_target}, 1.0, cfg.attack, surrogate)[0];
    cfg.budget = {eps, NormOrder::kTwo};
    cfg.attack.constraint = ConstraintSet::nonuniform(md_target);
    const Comparison c = compare(train, test, cfg, {d, 64, 32, 16, 2});
    std::printf("seed %d: standard %.4f adversarial %.4f\n", static_cast<int>(seed),
                c.standard, c.adversarial);
    wins += c.adversarial > c.standard;
  }
  EXPECT_GT(wins, kSeeds / 2);
}

}  // namespace
}  // namespace nuadv
