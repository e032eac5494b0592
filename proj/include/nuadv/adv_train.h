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

// Adversarial training against PGD perturbations of one class, budget
// matching across constraint shapes, and defense evaluation.

#ifndef NUADV_ADV_TRAIN_H_
#define NUADV_ADV_TRAIN_H_

#include <vector>

#include "nuadv/attack.h"
#include "nuadv/data.h"
#include "nuadv/net.h"

namespace nuadv {

// perturb_class value that perturbs samples of every class.
inline constexpr int kAllClasses = -1;

struct AdvTrainConfig {
  TrainConfig base;
  PerturbationBudget budget;
  AttackConfig attack;  // attack.constraint carries Omega
  double positive_fraction = 0.9;
  int perturb_class = 1;  // or kAllClasses

  void validate() const;
};

struct AdvTrainResult {
  TrainResult train;
  std::vector<std::size_t> perturbed_per_epoch;
};

// Each epoch a fresh random subset of round(positive_fraction * #positives)
// samples of perturb_class is replaced by x + pgd(x); PGD runs from the
// weights at the start of the sample's mini-batch. Every other sample trains
// clean. Throws NoPositiveSamples when the class is absent.
AdvTrainResult adversarial_train(const MlpModel& init, const Dataset& data,
                                 const AdvTrainConfig& cfg);

struct BudgetMatchOptions {
  double tolerance = 0.02;       // relative, on the mean ||delta||_2
  int max_evaluations = 60;
  std::size_t max_calibration_samples = 200;
  int calibration_class = 1;
};

// For every omega, bisects on epsilon until the mean ||delta||_2 of PGD
// perturbations (constraint ||Omega delta||_p <= eps) over the calibration
// samples is within tolerance of target_avg_l2. Throws CalibrationFailed.
std::vector<double> match_budgets(const Dataset& data,
                                  const std::vector<OmegaTransform>& omegas,
                                  double target_avg_l2,
                                  const AttackConfig& attack,
                                  const MlpModel& model,
                                  NormOrder p = NormOrder::kTwo,
                                  const BudgetMatchOptions& options = {});

// Mean ||delta||_2 of PGD perturbations over the given rows.
double mean_perturbation_l2(const MlpModel& model, const Dataset& data,
                            const std::vector<std::size_t>& rows,
                            const PerturbationBudget& budget,
                            const AttackConfig& attack);

struct DefenseReport {
  double clean_accuracy = 0.0;
  double defense_success_rate = 0.0;  // attacked positives still positive
  std::size_t attacked = 0;
};

// Clean accuracy over every sample; every sample of the positive class is
// attacked and counted as defended when it is still classified positive.
DefenseReport evaluate_defense(const MlpModel& model, const Dataset& data,
                               const PerturbationBudget& budget,
                               const AttackConfig& attack,
                               int positive_class = 1);

}  // namespace nuadv

#endif  // NUADV_ADV_TRAIN_H_
