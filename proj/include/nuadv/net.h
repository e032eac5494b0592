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

// Dense feedforward ReLU classifier with a softmax cross-entropy head.
//
// Layer i computes z_{i+1} = W_i h_i + b_i; hidden layers apply ReLU and,
// while training, inverted dropout. The last layer produces logits.

#ifndef NUADV_NET_H_
#define NUADV_NET_H_

#include <cstdint>
#include <random>
#include <vector>

#include "nuadv/data.h"
#include "nuadv/numerics.h"

namespace nuadv {

using Rng = std::mt19937_64;

struct MlpModel {
  std::vector<std::size_t> layer_dims;  // [d, h1, ..., num_classes]
  std::vector<Matrix> weights;          // weights[i] is dims[i+1] x dims[i]
  std::vector<Vector> biases;
  double dropout_rate = 0.0;

  std::size_t input_dim() const { return layer_dims.front(); }
  std::size_t num_classes() const { return layer_dims.back(); }
  std::size_t num_layers() const { return weights.size(); }

  // Throws std::invalid_argument if shapes, dropout rate or values are off.
  void validate() const;
};

// Zero weights and biases.
MlpModel make_zero_model(const std::vector<std::size_t>& layer_dims,
                         double dropout_rate = 0.0);

// He-uniform weights U(-sqrt(6/fan_in), sqrt(6/fan_in)), zero biases.
MlpModel make_he_uniform_model(const std::vector<std::size_t>& layer_dims,
                               double dropout_rate, std::uint64_t seed);

// Evaluation mode by default; train(rng) samples dropout masks from rng.
class ForwardMode {
 public:
  static ForwardMode eval() { return ForwardMode(nullptr); }
  static ForwardMode train(Rng& rng) { return ForwardMode(&rng); }
  bool training() const { return rng_ != nullptr; }
  Rng* rng() const { return rng_; }

 private:
  explicit ForwardMode(Rng* rng) : rng_(rng) {}
  Rng* rng_;
};

struct ForwardResult {
  Vector logits;
  Vector probs;
};

ForwardResult forward(const MlpModel& model, const Vector& x,
                      ForwardMode mode = ForwardMode::eval());

int predict(const MlpModel& model, const Vector& x);

// Numerically stable softmax.
Vector softmax(const Vector& logits);

struct Gradients {
  double loss = 0.0;
  std::vector<Matrix> weight_grads;
  std::vector<Vector> bias_grads;
  Vector input_grad;
};

// Cross-entropy loss -log p[y] and its exact gradients for the realized
// dropout mask. Throws DimensionMismatch on a bad input length and
// std::invalid_argument for an out-of-range class.
Gradients loss_and_grads(const MlpModel& model, const Vector& x, int y,
                         ForwardMode mode = ForwardMode::eval());

// Loss and input gradient only (evaluation mode); the attack inner loop.
double loss_and_input_grad(const MlpModel& model, const Vector& x, int y,
                           Vector* input_grad);

struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
  bool dropout_enabled = true;

  void validate() const;
};

struct TrainResult {
  MlpModel model;
  std::vector<double> epoch_loss;  // mean training loss per epoch
};

// Plain mini-batch SGD on the cross-entropy loss. Deterministic per seed.
TrainResult train_clean(const MlpModel& init, const Dataset& data,
                        const TrainConfig& cfg);

double accuracy(const MlpModel& model, const Dataset& data);

}  // namespace nuadv

#endif  // NUADV_NET_H_
