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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nuadv/error.h"
#include "nuadv/train_loop.h"

namespace nuadv {

namespace {

// Separate stream for subset selection so the SGD stream stays untouched.
constexpr std::uint64_t kSubsetStream = 0x9e3779b97f4a7c15ULL;

std::vector<std::size_t> rows_of_class(const Dataset& data, int label) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (label == kAllClasses || data.labels[i] == label) rows.push_back(i);
  }
  return rows;
}

}  // namespace

void AdvTrainConfig::validate() const {
  base.validate();
  budget.validate();
  attack.validate();
  if (!(positive_fraction >= 0.0 && positive_fraction <= 1.0)) {
    throw std::invalid_argument("positive_fraction must lie in [0, 1]");
  }
}

AdvTrainResult adversarial_train(const MlpModel& init, const Dataset& data,
                                 const AdvTrainConfig& cfg) {
  cfg.validate();
  if (data.dim() != init.input_dim()) {
    throw DimensionMismatch("training data", init.input_dim(), data.dim());
  }
  const std::vector<std::size_t> positives =
      rows_of_class(data, cfg.perturb_class);
  if (positives.empty()) throw NoPositiveSamples();
  const auto n_perturb = static_cast<std::size_t>(std::llround(
      cfg.positive_fraction * static_cast<double>(positives.size())));

  AdvTrainResult result;
  std::vector<char> selected(data.size(), 0);
  Rng subset_rng(cfg.base.seed ^ kSubsetStream);
  int current_epoch = 0;

  TrainHooks hooks;
  hooks.on_epoch = [&](int epoch) {
    current_epoch = epoch;
    std::fill(selected.begin(), selected.end(), 0);
    std::vector<std::size_t> pool = positives;
    std::shuffle(pool.begin(), pool.end(), subset_rng);
    for (std::size_t k = 0; k < n_perturb; ++k) selected[pool[k]] = 1;
    result.perturbed_per_epoch.push_back(n_perturb);
  };
  hooks.transform = [&](const MlpModel& current, std::size_t idx,
                        const Vector& x) -> Vector {
    if (!selected[idx]) return x;
    AttackConfig attack = cfg.attack;
    attack.seed = cfg.attack.seed + static_cast<std::uint64_t>(current_epoch) *
                                        data.size() + idx;
    attack.record_trace = false;
    MlpModel eval_model = current;
    eval_model.dropout_rate = 0.0;
    return x + pgd(eval_model, x, data.labels[idx], cfg.budget, attack).delta;
  };
  result.train = train_sgd(init, data, cfg.base, hooks);
  return result;
}

double mean_perturbation_l2(const MlpModel& model, const Dataset& data,
                            const std::vector<std::size_t>& rows,
                            const PerturbationBudget& budget,
                            const AttackConfig& attack) {
  double total = 0.0;
  for (std::size_t r : rows) {
    AttackConfig a = attack;
    a.seed = attack.seed + r;
    total += pgd(model, data.row(r), data.labels[r], budget, a).delta.norm();
  }
  return total / static_cast<double>(rows.size());
}

std::vector<double> match_budgets(const Dataset& data,
                                  const std::vector<OmegaTransform>& omegas,
                                  double target_avg_l2,
                                  const AttackConfig& attack,
                                  const MlpModel& model, NormOrder p,
                                  const BudgetMatchOptions& options) {
  if (!(target_avg_l2 > 0.0) || !std::isfinite(target_avg_l2)) {
    throw std::invalid_argument("target average l2 must be positive");
  }
  std::vector<std::size_t> rows = rows_of_class(data, options.calibration_class);
  if (rows.empty()) throw NoPositiveSamples();
  if (rows.size() > options.max_calibration_samples) {
    rows.resize(options.max_calibration_samples);
  }

  std::vector<double> epsilons;
  for (const OmegaTransform& omega : omegas) {
    AttackConfig a = attack;
    a.constraint = ConstraintSet::nonuniform(omega);
    auto mean_l2 = [&](double eps) {
      return mean_perturbation_l2(model, data, rows, {eps, p}, a);
    };
    const double tol = options.tolerance * target_avg_l2;
    int evaluations = 0;
    auto fail = [&]() {
      throw CalibrationFailed("no epsilon reaches mean l2 " +
                              std::to_string(target_avg_l2) + " for omega '" +
                              omega.label() + "' within " +
                              std::to_string(options.max_evaluations) +
                              " evaluations");
    };

    double lo = 0.0;
    double hi = target_avg_l2;
    double f_hi = mean_l2(hi);
    ++evaluations;
    while (f_hi < target_avg_l2 - tol) {
      if (evaluations >= options.max_evaluations) fail();
      lo = hi;
      hi *= 2.0;
      f_hi = mean_l2(hi);
      ++evaluations;
    }
    double eps = hi;
    double f = f_hi;
    while (std::abs(f - target_avg_l2) > tol) {
      if (evaluations >= options.max_evaluations) fail();
      eps = 0.5 * (lo + hi);
      f = mean_l2(eps);
      ++evaluations;
      if (f < target_avg_l2) {
        lo = eps;
      } else {
        hi = eps;
      }
    }
    epsilons.push_back(eps);
  }
  return epsilons;
}

DefenseReport evaluate_defense(const MlpModel& model, const Dataset& data,
                               const PerturbationBudget& budget,
                               const AttackConfig& attack,
                               int positive_class) {
  MlpModel eval_model = model;
  eval_model.dropout_rate = 0.0;
  DefenseReport report;
  report.clean_accuracy = accuracy(eval_model, data);
  std::size_t defended = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] != positive_class) continue;
    AttackConfig a = attack;
    a.seed = attack.seed + i;
    const Vector x = data.row(i);
    const Vector delta = pgd(eval_model, x, positive_class, budget, a).delta;
    if (predict(eval_model, x + delta) == positive_class) ++defended;
    ++report.attacked;
  }
  if (report.attacked == 0) throw NoPositiveSamples();
  report.defense_success_rate =
      static_cast<double>(defended) / static_cast<double>(report.attacked);
  return report;
}

}  // namespace nuadv
