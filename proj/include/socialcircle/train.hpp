// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Mini-batch Adam training on the mean squared displacement loss.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "socialcircle/errors.hpp"
#include "socialcircle/model.hpp"
#include "socialcircle/trajectory.hpp"

namespace socialcircle {

/// Desk-scale defaults. The large-scale reference setting is learning rate
/// 1e-4, 600 epochs and batch size 1500.
struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 200;
  int batch_size = 64;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Invoke the checkpoint hook every this many epochs; 0 disables it.
  int checkpoint_every = 0;

  void validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be >= 0");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (checkpoint_every < 0) throw ConfigError("checkpoint interval must be >= 0");
  }
};

struct AdamMoments {
  std::vector<double> m;
  std::vector<double> v;
};

struct AdamState {
  long step = 0;
  std::map<std::string, AdamMoments> moments;
};

/// One bias-corrected Adam update of `param` in place. `step` counts from 1.
inline void adam_step(std::span<double> param, std::span<const double> grad, AdamMoments& moments, long step,
                      const TrainConfig& config) {
  if (grad.size() != param.size()) throw ShapeError("adam_step: gradient and parameter sizes differ");
  if (moments.m.size() != param.size()) {
    moments.m.assign(param.size(), 0.0);
    moments.v.assign(param.size(), 0.0);
  }
  const double correction1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
  const double correction2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    moments.m[i] = config.beta1 * moments.m[i] + (1.0 - config.beta1) * grad[i];
    moments.v[i] = config.beta2 * moments.v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
    const double m_hat = moments.m[i] / correction1;
    const double v_hat = moments.v[i] / correction2;
    param[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

/// Applies Adam to every parameter using its accumulated gradient; parameters
/// without a gradient are treated as having zero gradient.
inline void adam_step(ParameterStore& params, AdamState& state, const TrainConfig& config) {
  ++state.step;
  for (auto& [name, tensor] : params.tensors()) {
    std::vector<double> zeros;
    std::span<const double> grad = tensor.grad();
    if (!tensor.has_grad()) {
      zeros.assign(tensor.numel(), 0.0);
      grad = zeros;
    }
    adam_step(tensor.mutable_data(), grad, state.moments[name], state.step, config);
  }
}

struct TrainResult {
  ParameterStore params;
  /// Mean per-case loss of each epoch, measured before that batch's update.
  std::vector<double> loss_curve;
};

/// Called with the 1-based epoch index and current parameters.
using CheckpointHook = std::function<void(int epoch, const ParameterStore&)>;

inline TrainResult train(const std::vector<PredictionCase>& dataset, const ModelConfig& model_config,
                         const TrainConfig& train_config, const CheckpointHook& on_checkpoint = {}) {
  model_config.validate();
  train_config.validate();
  if (dataset.empty()) throw DataError("train: empty dataset");

  std::vector<PredictionCase> cases;
  std::vector<Tensor> targets;
  cases.reserve(dataset.size());
  for (const auto& raw : dataset) {
    if (!raw.target_future) throw DataError("train: case '" + raw.case_id + "' has no ground-truth future");
    auto [c, _] = prepare_case(raw, model_config.partition.neighbor_cap);
    targets.push_back(polyline_tensor(*c.target_future));
    cases.push_back(std::move(c));
  }

  TrainResult result{ParameterStore::initialize(model_config, train_config.seed), {}};
  AdamState adam;
  std::mt19937_64 noise_rng(derive_case_seed(train_config.seed, "noise"));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(static_cast<std::size_t>(model_config.noise_dim));
  std::vector<std::size_t> order(cases.size());
  std::vector<double> case_loss(cases.size());
  const auto batch = static_cast<std::size_t>(train_config.batch_size);

  for (int epoch = 1; epoch <= train_config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 shuffle_rng(derive_case_seed(train_config.seed, "epoch-" + std::to_string(epoch)));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    for (std::size_t begin = 0; begin < order.size(); begin += batch) {
      const std::size_t end = std::min(order.size(), begin + batch);
      const double weight = 1.0 / static_cast<double>(end - begin);
      result.params.zero_grad();
      for (std::size_t b = begin; b < end; ++b) {
        const std::size_t i = order[b];
        for (auto& v : noise) v = gauss(noise_rng);
        const Tensor loss = mean_squared_error(forward(cases[i], result.params, model_config, noise).prediction, targets[i]);
        case_loss[i] = loss.item();
        if (!std::isfinite(case_loss[i])) throw NumericalAbort(epoch, case_loss[i]);
        scale(loss, weight).backward();
      }
      adam_step(result.params, adam, train_config);
    }

    // Summed in case order so the value does not depend on the shuffle.
    const double mean = std::accumulate(case_loss.begin(), case_loss.end(), 0.0) / static_cast<double>(cases.size());
    result.loss_curve.push_back(mean);
    if (on_checkpoint && train_config.checkpoint_every > 0 && epoch % train_config.checkpoint_every == 0)
      on_checkpoint(epoch, result.params);
  }
  result.params.zero_grad();
  return result;
}

}  // namespace socialcircle
