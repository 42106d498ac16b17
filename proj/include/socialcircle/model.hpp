// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Transformer trajectory forecaster with an optional SocialCircle branch.
//
//   observed (t_h x 2) --linear + sinusoid--> trajectory embedding (t_h x d)
//   meta (N x factors) --2-layer MLP--> partition features (N x d_sc)
//                      --zero pad-->    (t_h x d_sc)
//   [trajectory | social] --affine + relu--> fused (t_h x d)
//   fused --encoder layers--> flatten [+ noise] --head--> t_f x 2 displacements
//
// Predictions are displacements added to the last observed position.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "socialcircle/circle.hpp"
#include "socialcircle/errors.hpp"
#include "socialcircle/tensor.hpp"
#include "socialcircle/trajectory.hpp"

namespace socialcircle {

struct ModelConfig {
  int d = 64;
  int d_sc = 64;
  int n_layers = 2;
  int n_heads = 4;
  int d_ff = 128;
  int t_h = 8;
  int t_f = 12;
  bool use_socialcircle = true;
  int noise_dim = 0;
  PartitionConfig partition;
  /// Inference-only: factors outside this set are zeroed in the meta matrix.
  std::optional<FactorSet> factor_mask;

  void validate() const {
    if (d < 1 || d_sc < 1 || d_ff < 1) throw ConfigError("d, d_sc and d_ff must be >= 1");
    if (n_heads < 1 || d % n_heads != 0) throw ConfigError("d must be divisible by n_heads");
    if (n_layers < 0) throw ConfigError("n_layers must be >= 0");
    if (t_h < 1 || t_f < 1) throw ConfigError("t_h and t_f must be >= 1");
    if (noise_dim < 0) throw ConfigError("noise_dim must be >= 0");
    if (partition.t_h != t_h) throw ConfigError("partition t_h differs from model t_h");
    partition.validate();
    if (factor_mask && !factor_mask->subset_of(partition.factors))
      throw ConfigError("factor override '" + factor_mask->letters() + "' is not a subset of the model factors '" +
                        partition.factors.letters() + "'");
  }
};

/// Named trainable tensors. Copies share storage; use `clone` for an
/// independent set.
class ParameterStore {
 public:
  static ParameterStore initialize(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    std::mt19937_64 rng(seed);
    ParameterStore store;
    const auto d = static_cast<std::size_t>(config.d);
    const auto d_sc = static_cast<std::size_t>(config.d_sc);
    const auto d_ff = static_cast<std::size_t>(config.d_ff);
    const auto n_factors = config.partition.factors.size();

    auto weight = [&](const std::string& name, std::size_t in, std::size_t out) {
      store.set(name, Tensor::xavier(in, out, rng));
    };
    auto bias = [&](const std::string& name, std::size_t n) { store.set(name, Tensor::zeros({n}, true)); };
    auto gain = [&](const std::string& name, std::size_t n) {
      store.set(name, Tensor::from({n}, std::vector<double>(n, 1.0), true));
    };

    weight("traj_embed.w", 2, d);
    bias("traj_embed.b", d);
    if (config.use_socialcircle) {
      weight("sc_embed.w1", n_factors, d_sc);
      bias("sc_embed.b1", d_sc);
      weight("sc_embed.w2", d_sc, d_sc);
      bias("sc_embed.b2", d_sc);
      weight("fuse.w", d + d_sc, d);
      bias("fuse.b", d);
    }
    for (int l = 0; l < config.n_layers; ++l) {
      const std::string p = "layer" + std::to_string(l) + ".";
      for (const char* m : {"q", "k", "v", "o"}) weight(p + "attn.w" + m, d, d);
      // No key bias: it shifts each score row by a constant, which softmax drops.
      for (const char* m : {"q", "v", "o"}) bias(p + "attn.b" + m, d);
      gain(p + "ln1.gamma", d);
      bias(p + "ln1.beta", d);
      weight(p + "ff.w1", d, d_ff);
      bias(p + "ff.b1", d_ff);
      weight(p + "ff.w2", d_ff, d);
      bias(p + "ff.b2", d);
      gain(p + "ln2.gamma", d);
      bias(p + "ln2.beta", d);
    }
    weight("head.w", static_cast<std::size_t>(config.t_h) * d + static_cast<std::size_t>(config.noise_dim),
           static_cast<std::size_t>(config.t_f) * 2);
    bias("head.b", static_cast<std::size_t>(config.t_f) * 2);
    return store;
  }

  const Tensor& get(const std::string& name) const {
    auto it = tensors_.find(name);
    if (it == tensors_.end()) throw ConfigError("missing parameter '" + name + "'");
    return it->second;
  }
  bool contains(const std::string& name) const { return tensors_.count(name) > 0; }
  void set(const std::string& name, Tensor t) { tensors_[name] = std::move(t); }

  const std::map<std::string, Tensor>& tensors() const { return tensors_; }
  std::map<std::string, Tensor>& tensors() { return tensors_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& [_, t] : tensors_) n += t.numel();
    return n;
  }

  ParameterStore clone() const {
    ParameterStore out;
    for (const auto& [name, t] : tensors_) out.set(name, t.detach(true));
    return out;
  }

  void zero_grad() {
    for (auto& [_, t] : tensors_) t.zero_grad();
  }

 private:
  std::map<std::string, Tensor> tensors_;
};

// ---------------------------------------------------------------------------
// Building blocks

inline Tensor polyline_tensor(const Polyline& line) {
  std::vector<double> data;
  data.reserve(line.size() * 2);
  for (auto p : line) {
    data.push_back(p.x);
    data.push_back(p.y);
  }
  return Tensor::from({line.size(), 2}, std::move(data));
}

inline Polyline tensor_polyline(const Tensor& t) {
  Polyline out;
  for (std::size_t r = 0; r < t.rows(); ++r) out.push_back({t.at(r, 0), t.at(r, 1)});
  return out;
}

inline Tensor positional_encoding(std::size_t steps, std::size_t width) {
  std::vector<double> pe(steps * width);
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t j = 0; j < width; ++j) {
      const double rate = std::pow(10000.0, -static_cast<double>(j - j % 2) / static_cast<double>(width));
      pe[t * width + j] = j % 2 == 0 ? std::sin(static_cast<double>(t) * rate) : std::cos(static_cast<double>(t) * rate);
    }
  return Tensor::from({steps, width}, std::move(pe));
}

inline Tensor affine(const Tensor& x, const ParameterStore& p, const std::string& w, const std::string& b) {
  return add(matmul(x, p.get(w)), p.get(b));
}

/// Linear 2 -> d embedding of the observed window plus a sinusoidal position code.
inline Tensor embed_trajectory(const Tensor& observed, const ParameterStore& p, const ModelConfig& config) {
  const Tensor projected = affine(observed, p, "traj_embed.w", "traj_embed.b");
  return add(projected, positional_encoding(observed.rows(), static_cast<std::size_t>(config.d)));
}

struct SocialEmbedding {
  /// g_embed output per partition, N x d_sc.
  Tensor partition_rows;
  /// partition_rows extended with zero rows to t_h x d_sc.
  Tensor padded;
};

inline SocialEmbedding embed_socialcircle(const MetaMatrix& meta, const ParameterStore& p, const ModelConfig& config) {
  const Tensor hidden = relu(affine(meta.to_tensor(), p, "sc_embed.w1", "sc_embed.b1"));
  Tensor rows = affine(hidden, p, "sc_embed.w2", "sc_embed.b2");
  Tensor padded = zero_pad(rows, config.t_h);
  return {std::move(rows), std::move(padded)};
}

/// relu([trajectory | social] * W_fuse + b_fuse).
inline Tensor fuse(const Tensor& trajectory, const Tensor& social, const ParameterStore& p) {
  return relu(affine(concat(trajectory, social), p, "fuse.w", "fuse.b"));
}

inline Tensor self_attention(const Tensor& x, const ParameterStore& p, const std::string& prefix, int n_heads) {
  const Tensor q = affine(x, p, prefix + "attn.wq", prefix + "attn.bq");
  const Tensor k = matmul(x, p.get(prefix + "attn.wk"));
  const Tensor v = affine(x, p, prefix + "attn.wv", prefix + "attn.bv");
  const std::size_t head_width = x.cols() / static_cast<std::size_t>(n_heads);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_width));
  Tensor merged;
  for (std::size_t h = 0; h < static_cast<std::size_t>(n_heads); ++h) {
    const std::size_t lo = h * head_width, hi = lo + head_width;
    const Tensor scores = scale(matmul(slice_cols(q, lo, hi), transpose(slice_cols(k, lo, hi))), inv_sqrt);
    Tensor head = matmul(softmax(scores), slice_cols(v, lo, hi));
    merged = merged.defined() ? concat(merged, head) : head;
  }
  return affine(merged, p, prefix + "attn.wo", prefix + "attn.bo");
}

/// Post-norm encoder layer: attention and feedforward, each with a residual.
inline Tensor encoder_layer(const Tensor& x, const ParameterStore& p, int layer, int n_heads) {
  const std::string prefix = "layer" + std::to_string(layer) + ".";
  const Tensor attended =
      layer_norm(add(x, self_attention(x, p, prefix, n_heads)), p.get(prefix + "ln1.gamma"), p.get(prefix + "ln1.beta"));
  const Tensor hidden = relu(affine(attended, p, prefix + "ff.w1", prefix + "ff.b1"));
  const Tensor ff = affine(hidden, p, prefix + "ff.w2", prefix + "ff.b2");
  return layer_norm(add(attended, ff), p.get(prefix + "ln2.gamma"), p.get(prefix + "ln2.beta"));
}

// ---------------------------------------------------------------------------
// Forward pass

struct ForwardResult {
  /// t_f x 2, in the case's (normalized) frame.
  Tensor prediction;
  /// N x d_sc partition features; undefined in plain mode.
  Tensor partition_rows;
  std::optional<MetaMatrix> meta;
};

inline MetaMatrix model_meta(const PredictionCase& c, const ModelConfig& config) {
  MetaMatrix meta = compute_meta(c, config.partition);
  if (config.factor_mask)
    for (std::size_t f = 0; f < meta.n_factors(); ++f)
      if (!config.factor_mask->contains(meta.factors[f]))
        for (std::size_t n = 0; n < meta.n_partitions; ++n) meta.at(n, f) = 0.0;
  return meta;
}

/// One forecast for a normalized, neighbor-capped case. `noise` must hold
/// `noise_dim` values or be empty (treated as zeros).
inline ForwardResult forward(const PredictionCase& c, const ParameterStore& p, const ModelConfig& config,
                             std::span<const double> noise = {}) {
  if (c.t_h() != static_cast<std::size_t>(config.t_h))
    throw DataError("forward: case '" + c.case_id + "' has " + std::to_string(c.t_h()) + " observed steps, model expects " +
                    std::to_string(config.t_h));
  ForwardResult result;
  Tensor x = embed_trajectory(polyline_tensor(c.target_observed), p, config);
  if (config.use_socialcircle) {
    result.meta = model_meta(c, config);
    SocialEmbedding social = embed_socialcircle(*result.meta, p, config);
    result.partition_rows = social.partition_rows;
    x = fuse(x, social.padded, p);
  }
  for (int l = 0; l < config.n_layers; ++l) x = encoder_layer(x, p, l, config.n_heads);

  Tensor flat = reshape(x, {1, x.numel()});
  if (config.noise_dim > 0) {
    std::vector<double> values(static_cast<std::size_t>(config.noise_dim), 0.0);
    if (!noise.empty()) {
      if (noise.size() != values.size()) throw ShapeError("forward: noise vector has wrong length");
      std::copy(noise.begin(), noise.end(), values.begin());
    }
    const std::size_t width = values.size();
    flat = concat(flat, Tensor::from({1, width}, std::move(values)));
  }
  const Tensor displacement = reshape(affine(flat, p, "head.w", "head.b"), {static_cast<std::size_t>(config.t_f), 2});
  const Vec2 last = c.last_observed();
  result.prediction = add(displacement, Tensor::from({2}, {last.x, last.y}));
  return result;
}

// ---------------------------------------------------------------------------
// Sampling

struct PredictionOutput {
  /// K forecasts in the normalized frame.
  std::vector<Polyline> samples;
  std::optional<AttentionProfile> attention;
  std::optional<MetaMatrix> meta;
  /// K forecasts in the scene frame, when a transform was supplied.
  std::optional<std::vector<Polyline>> denormalized;
};

/// Seed for one case, stable across runs and platforms.
inline std::uint64_t derive_case_seed(std::uint64_t seed, std::string_view case_id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : case_id) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  // splitmix64 finaliser over the combined value.
  std::uint64_t z = h ^ (seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// K forecasts with independent noise drawn in sequence from `seed`, so the
/// first K' samples of a K-sample call equal a K'-sample call.
inline PredictionOutput sample_K(const PredictionCase& c, const ParameterStore& p, const ModelConfig& config, int K,
                                 std::uint64_t seed, const NormalizationTransform* transform = nullptr) {
  if (K < 1) throw ConfigError("K must be >= 1");
  NoGradGuard no_grad;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PredictionOutput out;
  std::vector<double> noise(static_cast<std::size_t>(config.noise_dim));
  for (int k = 0; k < K; ++k) {
    for (auto& v : noise) v = gauss(rng);
    ForwardResult r = forward(c, p, config, noise);
    if (k == 0 && config.use_socialcircle) {
      out.attention = attention_scores(r.partition_rows);
      out.meta = r.meta;
    }
    out.samples.push_back(tensor_polyline(r.prediction));
  }
  if (transform) {
    out.denormalized.emplace();
    for (const auto& s : out.samples) out.denormalized->push_back(transform->invert(s));
  }
  return out;
}

}  // namespace socialcircle
