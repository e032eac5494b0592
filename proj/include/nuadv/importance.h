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

// Per-feature importance scores used to shape diagonal constraint sets.

#ifndef NUADV_IMPORTANCE_H_
#define NUADV_IMPORTANCE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nuadv/data.h"
#include "nuadv/net.h"

namespace nuadv {

struct ImportanceVector {
  std::vector<std::string> feature_names;
  Vector values;
};

// |corr(feature_i, label)| for every feature.
// Throws ConstantFeature or ConstantLabel.
ImportanceVector pearson_importance(const Dataset& data);

struct ShapleyOptions {
  int permutations = 200;
  std::uint64_t seed = 0;
  // Rows explained; a seeded sample is drawn when the dataset is larger.
  std::size_t max_samples = 200;
};

// Monte-Carlo permutation Shapley values of the positive-class score
// (logit[1] - logit[0]) against a baseline at the dataset feature mean.
// Entry i is the mean over explained rows of |phi_i|.
ImportanceVector shapley_importance(const MlpModel& model, const Dataset& data,
                                    const ShapleyOptions& options);

// The score explained by shapley_importance.
double positive_score(const MlpModel& model, const Vector& x);

// Two-column CSV "feature_name,importance" with a header row.
void write_importance_csv(const ImportanceVector& importance,
                          const std::string& path);
ImportanceVector read_importance_csv(const std::string& path);

}  // namespace nuadv

#endif  // NUADV_IMPORTANCE_H_
