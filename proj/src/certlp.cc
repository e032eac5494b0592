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

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "nuadv/error.h"

namespace nuadv {

namespace {

void check_inputs(const MlpModel& model, const Vector& x,
                  const PerturbationBudget& budget,
                  const OmegaTransform& omega) {
  model.validate();
  budget.validate();
  if (static_cast<std::size_t>(x.size()) != model.input_dim()) {
    throw DimensionMismatch("certification input", model.input_dim(), x.size());
  }
  if (omega.dim() != model.input_dim()) {
    throw DimensionMismatch("certification omega", model.input_dim(),
                            omega.dim());
  }
}

// ||Omega^-1 column||_q for every column of m.
Vector column_inverse_norms(const OmegaTransform& omega, const Matrix& m,
                            NormOrder q) {
  Vector out(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    out(c) = inverse_norm(omega, m.col(c), q);
  }
  return out;
}

}  // namespace

UnitState LayerBounds::state(std::size_t r) const {
  const auto i = static_cast<Eigen::Index>(r);
  if (upper(i) <= 0.0) return UnitState::kInactive;
  if (lower(i) >= 0.0) return UnitState::kActive;
  return UnitState::kSpanning;
}

Vector LayerBounds::slopes() const {
  Vector d(lower.size());
  for (std::size_t r = 0; r < size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    switch (state(r)) {
      case UnitState::kInactive: d(i) = 0.0; break;
      case UnitState::kActive: d(i) = 1.0; break;
      case UnitState::kSpanning:
        d(i) = upper(i) / (upper(i) - lower(i));
        break;
    }
  }
  return d;
}

// Row j of the matrices below is a unit of an earlier layer, column m a unit
// of the layer being bounded:
//   first  = W_1^T D_2 W_2^T ... D_i W_i^T        (-nuhat_1 for c = e_m)
//   hidden[j] = D_j W_j^T ... D_i W_i^T           (-nu_j    for c = e_m)
//   offset = sum_t b_t^T hidden[t + 1] + b_i      (the bias terms)
std::vector<LayerBounds> activation_bounds(const MlpModel& model,
                                           const Vector& x,
                                           const PerturbationBudget& budget,
                                           const OmegaTransform& omega) {
  check_inputs(model, x, budget, omega);
  const NormOrder q = dual_norm(budget.p);
  const double eps = budget.epsilon;

  std::vector<LayerBounds> bounds;
  Matrix first = model.weights[0].transpose();
  Vector offset = model.biases[0];
  std::vector<Matrix> hidden;

  for (std::size_t i = 0;; ++i) {
    const Vector center = first.transpose() * x + offset;
    const Vector radius = eps * column_inverse_norms(omega, first, q);
    Vector lower = center - radius;
    Vector upper = center + radius;
    for (std::size_t j = 0; j < hidden.size(); ++j) {
      const LayerBounds& lb = bounds[j];
      for (std::size_t r = 0; r < lb.size(); ++r) {
        if (lb.state(r) != UnitState::kSpanning) continue;
        const auto ri = static_cast<Eigen::Index>(r);
        const double l = lb.lower(ri);
        const auto row = hidden[j].row(ri);
        // l < 0 here, so this widens both bounds.
        lower += l * (-row.transpose()).cwiseMax(0.0);
        upper -= l * row.transpose().cwiseMax(0.0);
      }
    }
    bounds.push_back({lower, upper});
    if (i + 1 == model.num_layers()) break;

    const Matrix step =
        bounds.back().slopes().asDiagonal() * model.weights[i + 1].transpose();
    first = first * step;
    for (Matrix& h : hidden) h = h * step;
    hidden.push_back(step);
    offset = step.transpose() * offset + model.biases[i + 1];
  }
  return bounds;
}

double dual_objective(const MlpModel& model,
                      const std::vector<LayerBounds>& bounds, const Vector& x,
                      const PerturbationBudget& budget,
                      const OmegaTransform& omega, const Vector& c) {
  check_inputs(model, x, budget, omega);
  const std::size_t layers = model.num_layers();
  if (bounds.size() + 1 < layers) {
    throw std::invalid_argument("dual_objective: missing layer bounds");
  }
  if (static_cast<std::size_t>(c.size()) != model.num_classes()) {
    throw DimensionMismatch("objective vector", model.num_classes(), c.size());
  }
  Vector nu = -c;  // nu_{i+1}
  double j = 0.0;
  for (std::size_t i = layers; i-- > 0;) {
    j -= nu.dot(model.biases[i]);
    const Vector nu_hat = model.weights[i].transpose() * nu;
    if (i == 0) {
      j -= nu_hat.dot(x);
      j -= budget.epsilon * inverse_norm(omega, nu_hat, dual_norm(budget.p));
      break;
    }
    const LayerBounds& lb = bounds[i - 1];
    nu = lb.slopes().cwiseProduct(nu_hat);
    for (std::size_t r = 0; r < lb.size(); ++r) {
      if (lb.state(r) != UnitState::kSpanning) continue;
      const auto ri = static_cast<Eigen::Index>(r);
      j += lb.lower(ri) * std::max(nu(ri), 0.0);
    }
  }
  return j;
}

CertificationReport certify(const MlpModel& model, const Vector& x, int label,
                            const PerturbationBudget& budget,
                            const OmegaTransform& omega) {
  const auto classes = static_cast<int>(model.num_classes());
  if (label < 0 || label >= classes) {
    throw std::invalid_argument("certify: label out of range");
  }
  CertificationReport report;
  report.label = label;
  report.bounds = activation_bounds(model, x, budget, omega);
  report.objectives.assign(classes, std::numeric_limits<double>::infinity());
  report.margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < classes; ++k) {
    if (k == label) continue;
    Vector c = Vector::Zero(classes);
    c(label) = 1.0;
    c(k) = -1.0;
    report.objectives[k] =
        dual_objective(model, report.bounds, x, budget, omega, c);
    report.margin = std::min(report.margin, report.objectives[k]);
  }
  report.certified = report.margin > 0.0;
  return report;
}

}  // namespace nuadv
