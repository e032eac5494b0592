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

// The SGD loop behind train_clean, with hooks for adversarial training.

#ifndef NUADV_TRAIN_LOOP_H_
#define NUADV_TRAIN_LOOP_H_

#include <functional>

#include "nuadv/net.h"

namespace nuadv {

struct TrainHooks {
  // Called before each epoch's shuffle.
  std::function<void(int epoch)> on_epoch;
  // Replaces sample `index` with the returned input, given the model as it
  // stands at the start of the sample's mini-batch.
  std::function<Vector(const MlpModel& current, std::size_t index,
                       const Vector& x)>
      transform;
};

// The training RNG (shuffling and dropout) is seeded from cfg.seed alone, so
// hooks that do not consume it leave the clean trajectory unchanged.
TrainResult train_sgd(const MlpModel& init, const Dataset& data,
                      const TrainConfig& cfg, const TrainHooks& hooks);

}  // namespace nuadv

#endif  // NUADV_TRAIN_LOOP_H_
