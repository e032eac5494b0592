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

#include "nuadv/attack.h"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "nuadv/error.h"

namespace nuadv {

namespace {

Vector radial_scale(const Vector& delta, double norm, double epsilon) {
  return norm > epsilon ? Vector(delta * (epsilon / norm)) : delta;
}

// Uniform sample from the radius-eps ball of the given norm in k dimensions.
Vector sample_ball(Eigen::Index k, double epsilon, NormOrder p, Rng& rng) {
  Vector v(k);
  if (p == NormOrder::kInf) {
    std::uniform_real_distribution<double> u(-epsilon, epsilon);
    for (Eigen::Index i = 0; i < k; ++i) v(i) = u(rng);
    return v;
  }
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < k; ++i) v(i) = normal(rng);
  const double n = v.norm();
  if (n == 0.0) return Vector::Zero(k);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double radius = epsilon * std::pow(u(rng), 1.0 / static_cast<double>(k));
  v *= radius / n;
  // l_1 balls are not sampled uniformly; the l_2 sample is projected instead.
  if (p == NormOrder::kOne) {
    const double l1 = v.lpNorm<1>();
    if (l1 > epsilon) v *= epsilon / l1;
  }
  return v;
}

Vector initial_delta(const Vector& x, const PerturbationBudget& budget,
                     const AttackConfig& cfg) {
  const auto d = x.size();
  if (cfg.init == AttackInit::kZero) return Vector::Zero(d);
  Rng rng(cfg.seed);
  Vector w = sample_ball(d, budget.epsilon, budget.p, rng);
  Vector delta = w;
  if (cfg.constraint.omega) {
    const OmegaTransform& omega = *cfg.constraint.omega;
    delta = omega.invertible() ? omega.apply_inverse(w) : omega.restrict(w);
  }
  return project(delta, cfg.constraint, budget);
}

}  // namespace

void PerturbationBudget::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be finite and positive");
  }
}

ConstraintSet ConstraintSet::uniform() { return ConstraintSet{}; }

ConstraintSet ConstraintSet::nonuniform(OmegaTransform omega) {
  ConstraintSet s;
  s.mode = Mode::kNonUniform;
  s.omega = std::move(omega);
  return s;
}

ConstraintSet ConstraintSet::combo(OmegaTransform omega,
                                   double epsilon_uniform) {
  if (!(epsilon_uniform > 0.0)) {
    throw std::invalid_argument("combo epsilon_uniform must be positive");
  }
  ConstraintSet s;
  s.mode = Mode::kCombo;
  s.omega = std::move(omega);
  s.epsilon_uniform = epsilon_uniform;
  return s;
}

Vector project_uniform(const Vector& delta, const PerturbationBudget& budget) {
  return radial_scale(delta, vector_norm(delta, budget.p), budget.epsilon);
}

Vector project_nonuniform(const Vector& delta, const OmegaTransform& omega,
                          const PerturbationBudget& budget) {
  const Vector d = omega.restrict(delta);
  return radial_scale(d, omega_norm(omega, d, budget.p), budget.epsilon);
}

Vector project(const Vector& delta, const ConstraintSet& set,
               const PerturbationBudget& budget) {
  switch (set.mode) {
    case ConstraintSet::Mode::kUniform:
      return project_uniform(delta, budget);
    case ConstraintSet::Mode::kNonUniform:
      return project_nonuniform(delta, *set.omega, budget);
    case ConstraintSet::Mode::kCombo: {
      const Vector d = project_nonuniform(delta, *set.omega, budget);
      return project_uniform(d, {set.epsilon_uniform, budget.p});
    }
  }
  return delta;
}

double constraint_norm(const Vector& delta, const ConstraintSet& set,
                       NormOrder p) {
  if (set.mode == ConstraintSet::Mode::kUniform) return vector_norm(delta, p);
  return omega_norm(*set.omega, delta, p);
}

void AttackConfig::validate() const {
  if (steps < 1) throw std::invalid_argument("attack steps must be >= 1");
  if (!(step_scale > 0.0)) {
    throw std::invalid_argument("attack step_scale must be positive");
  }
  if (constraint.mode != ConstraintSet::Mode::kUniform && !constraint.omega) {
    throw std::invalid_argument("non-uniform attack needs an omega");
  }
}

PgdResult pgd(const MlpModel& model, const Vector& x, int y,
              const PerturbationBudget& budget, const AttackConfig& cfg) {
  budget.validate();
  cfg.validate();
  if (static_cast<std::size_t>(x.size()) != model.input_dim()) {
    throw DimensionMismatch("pgd input", model.input_dim(), x.size());
  }
  if (cfg.constraint.omega && cfg.constraint.omega->dim() != model.input_dim()) {
    throw DimensionMismatch("pgd omega", model.input_dim(),
                            cfg.constraint.omega->dim());
  }
  const double alpha = cfg.step_scale * budget.epsilon;
  const OmegaTransform* omega =
      cfg.constraint.omega ? &*cfg.constraint.omega : nullptr;

  PgdResult result;
  result.delta = initial_delta(x, budget, cfg);
  Vector grad;
  for (int t = 0; t < cfg.steps; ++t) {
    const double loss = loss_and_input_grad(model, x + result.delta, y, &grad);
    if (cfg.record_trace) result.loss_trace.push_back(loss);
    // Gradient components on immutable features cannot be used.
    if (omega) grad = omega->restrict(grad);
    const double gn = vector_norm(grad, budget.p);
    if (!(gn > 0.0)) break;
    result.delta =
        project(result.delta + (alpha / gn) * grad, cfg.constraint, budget);
    ++result.steps_taken;
  }
  result.loss = loss_and_input_grad(model, x + result.delta, y, &grad);
  if (cfg.record_trace) result.loss_trace.push_back(result.loss);
  return result;
}

Vector fgsm(const MlpModel& model, const Vector& x, int y,
            const PerturbationBudget& budget) {
  budget.validate();
  if (static_cast<std::size_t>(x.size()) != model.input_dim()) {
    throw DimensionMismatch("fgsm input", model.input_dim(), x.size());
  }
  Vector grad;
  loss_and_input_grad(model, x, y, &grad);
  const double gn = vector_norm(grad, budget.p);
  if (!(gn > 0.0)) return Vector::Zero(x.size());
  switch (budget.p) {
    case NormOrder::kInf:
      return budget.epsilon * grad.array().sign().matrix();
    case NormOrder::kTwo:
      return (budget.epsilon / gn) * grad;
    case NormOrder::kOne: {
      // Steepest l_1 ascent puts the whole budget on the largest component.
      Eigen::Index j = 0;
      grad.cwiseAbs().maxCoeff(&j);
      Vector delta = Vector::Zero(x.size());
      delta(j) = grad(j) > 0 ? budget.epsilon : -budget.epsilon;
      return delta;
    }
  }
  return Vector::Zero(x.size());
}

}  // namespace nuadv
