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


// Certified lower bounds for ReLU networks under ||Omega delta||_p <= eps via
// the dual of the LP relaxation.
//
// With z_{i+1} = W_i zhat_i + b_i, zhat_1 = x + delta and zhat_i = relu(z_i),
// the dual network for an objective c^T z_k is
//   nu_k = -c,   nuhat_i = W_i^T nu_{i+1},   nu_i = D_i nuhat_i,
// where D_i is 0 on inactive units (u <= 0), 1 on active ones (l >= 0) and
// u / (u - l) on spanning ones. Every feasible output then satisfies
//   c^T z_k >= J = -sum_i nu_{i+1}^T b_i - nuhat_1^T x
//                  - eps ||Omega^-T nuhat_1||_q + sum_{spanning} l [nu]_+ .

#ifndef NUADV_CERTLP_H_
#define NUADV_CERTLP_H_

#include <vector>

#include "nuadv/attack.h"
#include "nuadv/net.h"
#include "nuadv/omega.h"

namespace nuadv {

enum class UnitState { kInactive, kActive, kSpanning };

struct LayerBounds {
  Vector lower;
  Vector upper;

  std::size_t size() const { return static_cast<std::size_t>(lower.size()); }
  UnitState state(std::size_t r) const;
  // Diagonal of D for this layer.
  Vector slopes() const;
};

// Bounds on every pre-activation z_2 .. z_k, one entry per weight matrix;
// the last entry bounds the logits. All units of a layer are bounded at once
// by carrying the dual network forward layer by layer.
std::vector<LayerBounds> activation_bounds(const MlpModel& model,
                                           const Vector& x,
                                           const PerturbationBudget& budget,
                                           const OmegaTransform& omega);

// J for objective c^T z_k. `bounds` needs at least the hidden-layer entries
// (num_layers - 1); extra entries are ignored.
double dual_objective(const MlpModel& model,
                      const std::vector<LayerBounds>& bounds, const Vector& x,
                      const PerturbationBudget& budget,
                      const OmegaTransform& omega, const Vector& c);

struct CertificationReport {
  int label = 0;
  bool certified = false;
  // Smallest lower bound of logit[label] - logit[j] over j != label.
  double margin = 0.0;
  // Per-class lower bounds; the entry for `label` is +infinity.
  std::vector<double> objectives;
  std::vector<LayerBounds> bounds;
};

// Certified iff every objective with c = e_label - e_j is positive.
CertificationReport certify(const MlpModel& model, const Vector& x, int label,
                            const PerturbationBudget& budget,
                            const OmegaTransform& omega);

}  // namespace nuadv

#endif  // NUADV_CERTLP_H_
