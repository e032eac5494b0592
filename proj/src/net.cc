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

#include "nuadv/net.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nuadv/error.h"
#include "nuadv/train_loop.h"

namespace nuadv {

namespace {

// Activations kept for the backward pass.
struct Trace {
  std::vector<Vector> inputs;     // input to layer i (x for i = 0)
  std::vector<Vector> pre;        // pre-activation of hidden layer i
  std::vector<Vector> dropout;    // per-unit multiplier (0 or 1/(1-rate))
  Vector logits;
};

void run_forward(const MlpModel& model, const Vector& x, ForwardMode mode,
                 Trace* trace) {
  if (static_cast<std::size_t>(x.size()) != model.input_dim()) {
    throw DimensionMismatch("model input", model.input_dim(), x.size());
  }
  const std::size_t layers = model.num_layers();
  trace->inputs.resize(layers);
  trace->pre.resize(layers - 1);
  trace->dropout.resize(layers - 1);
  trace->inputs[0] = x;
  const bool drop = mode.training() && model.dropout_rate > 0.0;
  std::bernoulli_distribution keep(1.0 - model.dropout_rate);
  const double scale = drop ? 1.0 / (1.0 - model.dropout_rate) : 1.0;
  for (std::size_t i = 0; i + 1 < layers; ++i) {
    trace->pre[i] = model.weights[i] * trace->inputs[i] + model.biases[i];
    Vector h = trace->pre[i].cwiseMax(0.0);
    if (drop) {
      Vector mask(h.size());
      for (Eigen::Index j = 0; j < h.size(); ++j) {
        mask(j) = keep(*mode.rng()) ? scale : 0.0;
      }
      h.array() *= mask.array();
      trace->dropout[i] = std::move(mask);
    } else {
      trace->dropout[i] = Vector::Ones(h.size());
    }
    trace->inputs[i + 1] = std::move(h);
  }
  trace->logits =
      model.weights[layers - 1] * trace->inputs[layers - 1] + model.biases[layers - 1];
}

double cross_entropy(const Vector& logits, int y) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return lse - logits(y);
}

void check_class(const MlpModel& model, int y) {
  if (y < 0 || static_cast<std::size_t>(y) >= model.num_classes()) {
    throw std::invalid_argument("class " + std::to_string(y) +
                                " out of range");
  }
}

}  // namespace

void MlpModel::validate() const {
  if (layer_dims.size() < 2) {
    throw std::invalid_argument("model needs at least one layer");
  }
  if (weights.size() != layer_dims.size() - 1 ||
      biases.size() != layer_dims.size() - 1) {
    throw std::invalid_argument("layer count does not match layer_dims");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (static_cast<std::size_t>(weights[i].rows()) != layer_dims[i + 1] ||
        static_cast<std::size_t>(weights[i].cols()) != layer_dims[i] ||
        static_cast<std::size_t>(biases[i].size()) != layer_dims[i + 1]) {
      throw std::invalid_argument("layer " + std::to_string(i) +
                                  " shape does not match layer_dims");
    }
    if (!weights[i].allFinite() || !biases[i].allFinite()) {
      throw std::invalid_argument("non-finite parameter in layer " +
                                  std::to_string(i));
    }
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw std::invalid_argument("dropout rate must lie in [0, 1)");
  }
}

MlpModel make_zero_model(const std::vector<std::size_t>& layer_dims,
                         double dropout_rate) {
  MlpModel m;
  m.layer_dims = layer_dims;
  m.dropout_rate = dropout_rate;
  for (std::size_t i = 0; i + 1 < layer_dims.size(); ++i) {
    m.weights.push_back(Matrix::Zero(layer_dims[i + 1], layer_dims[i]));
    m.biases.push_back(Vector::Zero(layer_dims[i + 1]));
  }
  m.validate();
  return m;
}

MlpModel make_he_uniform_model(const std::vector<std::size_t>& layer_dims,
                               double dropout_rate, std::uint64_t seed) {
  MlpModel m = make_zero_model(layer_dims, dropout_rate);
  Rng rng(seed);
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer_dims[i]));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix& w = m.weights[i];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
  }
  return m;
}

Vector softmax(const Vector& logits) {
  const Vector e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

ForwardResult forward(const MlpModel& model, const Vector& x,
                      ForwardMode mode) {
  Trace trace;
  run_forward(model, x, mode, &trace);
  ForwardResult out;
  out.probs = softmax(trace.logits);
  out.logits = std::move(trace.logits);
  return out;
}

int predict(const MlpModel& model, const Vector& x) {
  Eigen::Index best = 0;
  forward(model, x).logits.maxCoeff(&best);
  return static_cast<int>(best);
}

Gradients loss_and_grads(const MlpModel& model, const Vector& x, int y,
                         ForwardMode mode) {
  check_class(model, y);
  Trace trace;
  run_forward(model, x, mode, &trace);
  const std::size_t layers = model.num_layers();
  Gradients g;
  g.loss = cross_entropy(trace.logits, y);
  g.weight_grads.resize(layers);
  g.bias_grads.resize(layers);

  Vector delta = softmax(trace.logits);
  delta(y) -= 1.0;
  for (std::size_t i = layers; i-- > 0;) {
    g.weight_grads[i] = delta * trace.inputs[i].transpose();
    g.bias_grads[i] = delta;
    Vector back = model.weights[i].transpose() * delta;
    if (i == 0) {
      g.input_grad = std::move(back);
      break;
    }
    const Vector& pre = trace.pre[i - 1];
    for (Eigen::Index j = 0; j < back.size(); ++j) {
      back(j) = pre(j) > 0.0 ? back(j) * trace.dropout[i - 1](j) : 0.0;
    }
    delta = std::move(back);
  }
  return g;
}

double loss_and_input_grad(const MlpModel& model, const Vector& x, int y,
                           Vector* input_grad) {
  check_class(model, y);
  Trace trace;
  run_forward(model, x, ForwardMode::eval(), &trace);
  Vector delta = softmax(trace.logits);
  delta(y) -= 1.0;
  for (std::size_t i = model.num_layers(); i-- > 0;) {
    Vector back = model.weights[i].transpose() * delta;
    if (i == 0) {
      *input_grad = std::move(back);
      break;
    }
    const Vector& pre = trace.pre[i - 1];
    for (Eigen::Index j = 0; j < back.size(); ++j) {
      if (!(pre(j) > 0.0)) back(j) = 0.0;
    }
    delta = std::move(back);
  }
  return cross_entropy(trace.logits, y);
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
}

TrainResult train_sgd(const MlpModel& init, const Dataset& data,
                      const TrainConfig& cfg, const TrainHooks& hooks) {
  cfg.validate();
  init.validate();
  if (data.dim() != init.input_dim()) {
    throw DimensionMismatch("training data", init.input_dim(), data.dim());
  }
  TrainResult result{init, {}};
  MlpModel& model = result.model;
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);

  std::vector<Matrix> gw(model.num_layers());
  std::vector<Vector> gb(model.num_layers());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (hooks.on_epoch) hooks.on_epoch(epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      for (std::size_t i = 0; i < model.num_layers(); ++i) {
        gw[i].setZero(model.weights[i].rows(), model.weights[i].cols());
        gb[i].setZero(model.biases[i].size());
      }
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t idx = order[k];
        Vector x = data.row(idx);
        if (hooks.transform) x = hooks.transform(model, idx, x);
        const ForwardMode mode =
            cfg.dropout_enabled ? ForwardMode::train(rng) : ForwardMode::eval();
        const Gradients g = loss_and_grads(model, x, data.labels[idx], mode);
        epoch_loss += g.loss;
        for (std::size_t i = 0; i < model.num_layers(); ++i) {
          gw[i] += g.weight_grads[i];
          gb[i] += g.bias_grads[i];
        }
      }
      const double step = cfg.learning_rate / static_cast<double>(end - start);
      for (std::size_t i = 0; i < model.num_layers(); ++i) {
        model.weights[i] -= step * gw[i];
        model.biases[i] -= step * gb[i];
      }
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  return result;
}

TrainResult train_clean(const MlpModel& init, const Dataset& data,
                        const TrainConfig& cfg) {
  return train_sgd(init, data, cfg, TrainHooks{});
}

double accuracy(const MlpModel& model, const Dataset& data) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(model, data.row(i)) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace nuadv
