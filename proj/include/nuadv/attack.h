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

// Projected-gradient attacks under uniform and Omega-shaped budgets.
//
// Both projections are radial rescalings, delta * eps / max(eps, ||.||),
// which for an ellipsoid is not the Euclidean-nearest feasible point.

#ifndef NUADV_ATTACK_H_
#define NUADV_ATTACK_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "nuadv/net.h"
#include "nuadv/omega.h"

namespace nuadv {

struct PerturbationBudget {
  double epsilon = 1.0;
  NormOrder p = NormOrder::kTwo;

  // Throws std::invalid_argument unless epsilon is finite and positive.
  void validate() const;
};

// Which set the attack projects onto after every step.
//   uniform     ||delta||_p <= eps
//   nonuniform  ||Omega delta||_p <= eps
//   combo       nonuniform projection, then uniform projection with
//               epsilon_uniform, so the result satisfies both constraints.
struct ConstraintSet {
  enum class Mode { kUniform, kNonUniform, kCombo };

  Mode mode = Mode::kUniform;
  std::optional<OmegaTransform> omega;
  double epsilon_uniform = 0.0;

  static ConstraintSet uniform();
  static ConstraintSet nonuniform(OmegaTransform omega);
  static ConstraintSet combo(OmegaTransform omega, double epsilon_uniform);
};

Vector project_uniform(const Vector& delta, const PerturbationBudget& budget);

// For a mask, immutable coordinates are zeroed before scaling.
Vector project_nonuniform(const Vector& delta, const OmegaTransform& omega,
                          const PerturbationBudget& budget);

Vector project(const Vector& delta, const ConstraintSet& set,
               const PerturbationBudget& budget);

// ||delta||_p for uniform sets, ||Omega delta||_p otherwise.
double constraint_norm(const Vector& delta, const ConstraintSet& set,
                       NormOrder p);

enum class AttackInit { kZero, kRandom };

struct AttackConfig {
  int steps = 10;
  // alpha = step_scale * epsilon.
  double step_scale = 0.25;
  AttackInit init = AttackInit::kZero;
  std::uint64_t seed = 0;
  ConstraintSet constraint;
  bool record_trace = false;

  void validate() const;
};

struct PgdResult {
  Vector delta;
  double loss = 0.0;                // loss at x + delta
  std::vector<double> loss_trace;   // loss before each step, if recorded
  int steps_taken = 0;
};

// delta <- project(delta + alpha * g / ||g||_p) with g the input gradient of
// the cross-entropy loss; stops early on a zero gradient. The model is used
// in evaluation mode.
PgdResult pgd(const MlpModel& model, const Vector& x, int y,
              const PerturbationBudget& budget, const AttackConfig& cfg);

// One step to the boundary of the uniform ball: eps * sign(g) for l_inf,
// eps * g / ||g||_2 for l_2. Zero gradient gives a zero perturbation.
Vector fgsm(const MlpModel& model, const Vector& x, int y,
            const PerturbationBudget& budget);

}  // namespace nuadv

#endif  // NUADV_ATTACK_H_
