// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Checkpoint manifest: a JSON document holding the model configuration and,
// per parameter, its name, shape and values as base64 of little-endian
// IEEE-754 binary64. A SHA-256 over the canonical dump of everything except
// the checksum field guards the content.

#pragma once

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "socialcircle/errors.hpp"
#include "socialcircle/model.hpp"

namespace socialcircle {

inline constexpr int kCheckpointFormatVersion = 1;
inline constexpr const char* kCheckpointFormat = "socialcircle-checkpoint";

struct Checkpoint {
  ModelConfig config;
  ParameterStore params;
  std::string checksum;
};

inline nlohmann::json config_to_json(const ModelConfig& c) {
  return {{"d", c.d},
          {"d_sc", c.d_sc},
          {"n_layers", c.n_layers},
          {"n_heads", c.n_heads},
          {"d_ff", c.d_ff},
          {"t_h", c.t_h},
          {"t_f", c.t_f},
          {"use_socialcircle", c.use_socialcircle},
          {"noise_dim", c.noise_dim},
          {"n_partitions", c.partition.n_partitions},
          {"factors", c.partition.factors.letters()},
          {"neighbor_cap", c.partition.neighbor_cap},
          {"dt", c.partition.dt}};
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.d = j.at("d").get<int>();
    c.d_sc = j.at("d_sc").get<int>();
    c.n_layers = j.at("n_layers").get<int>();
    c.n_heads = j.at("n_heads").get<int>();
    c.d_ff = j.at("d_ff").get<int>();
    c.t_h = j.at("t_h").get<int>();
    c.t_f = j.at("t_f").get<int>();
    c.use_socialcircle = j.at("use_socialcircle").get<bool>();
    c.noise_dim = j.at("noise_dim").get<int>();
    c.partition.n_partitions = j.at("n_partitions").get<int>();
    c.partition.factors = FactorSet::parse(j.at("factors").get<std::string>());
    c.partition.neighbor_cap = j.at("neighbor_cap").get<int>();
    c.partition.dt = j.at("dt").get<double>();
    c.partition.t_h = c.t_h;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace detail {

inline std::string encode_doubles(std::span<const double> values) {
  std::vector<unsigned char> bytes;
  bytes.reserve(values.size() * 8);
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<unsigned char>(bits >> (8 * b)));
  }
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

inline std::vector<double> decode_doubles(const std::string& text, std::size_t expected) {
  if (text.size() % 4 != 0) throw DataError("checkpoint: malformed base64 blob");
  std::vector<unsigned char> bytes(3 * text.size() / 4);
  const int n = EVP_DecodeBlock(bytes.data(), reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0) throw DataError("checkpoint: malformed base64 blob");
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
  const std::size_t length = static_cast<std::size_t>(n) - padding;
  if (length != expected * 8) throw DataError("checkpoint: blob length does not match shape");
  std::vector<double> values(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[i * 8 + static_cast<std::size_t>(b)]) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
  return values;
}

inline std::string sha256_hex(const std::string& text) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  unsigned int length = 0;
  EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace detail

inline nlohmann::json checkpoint_to_json(const ModelConfig& config, const ParameterStore& params) {
  nlohmann::json doc;
  doc["format"] = kCheckpointFormat;
  doc["format_version"] = kCheckpointFormatVersion;
  doc["config"] = config_to_json(config);
  doc["parameters"] = nlohmann::json::array();
  for (const auto& [name, t] : params.tensors())
    doc["parameters"].push_back({{"name", name}, {"shape", t.shape()}, {"data", detail::encode_doubles(t.data())}});
  doc["checksum"] = detail::sha256_hex(doc.dump());
  return doc;
}

inline Checkpoint checkpoint_from_json(nlohmann::json doc) {
  if (!doc.is_object() || doc.value("format", "") != kCheckpointFormat) throw DataError("checkpoint: not a checkpoint manifest");
  if (doc.value("format_version", -1) != kCheckpointFormatVersion)
    throw DataError("checkpoint: unsupported format version " + doc.value("format_version", nlohmann::json()).dump());
  if (!doc.contains("checksum") || !doc["checksum"].is_string()) throw DataError("checkpoint: missing checksum");
  const std::string stored = doc["checksum"].get<std::string>();
  doc.erase("checksum");
  if (detail::sha256_hex(doc.dump()) != stored) throw DataError("checkpoint: checksum mismatch");

  Checkpoint out;
  out.config = config_from_json(doc.at("config"));
  out.checksum = stored;
  try {
    for (const auto& entry : doc.at("parameters")) {
      const auto shape = entry.at("shape").get<Shape>();
      auto values = detail::decode_doubles(entry.at("data").get<std::string>(), shape_numel(shape));
      out.params.set(entry.at("name").get<std::string>(), Tensor::from(shape, std::move(values), true));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint parameters: ") + e.what());
  }
  const ParameterStore reference = ParameterStore::initialize(out.config, 0);
  for (const auto& [name, t] : reference.tensors())
    if (!out.params.contains(name) || out.params.get(name).shape() != t.shape())
      throw DataError("checkpoint: parameter '" + name + "' missing or misshapen");
  if (out.params.tensors().size() != reference.tensors().size())
    throw DataError("checkpoint: unexpected parameters for this configuration");
  return out;
}

inline void save_checkpoint(const std::string& path, const ModelConfig& config, const ParameterStore& params) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint '" + path + "'");
  out << checkpoint_to_json(config, params).dump(1) << '\n';
  if (!out) throw DataError("failed writing checkpoint '" + path + "'");
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint '" + path + "': " + e.what());
  }
  return checkpoint_from_json(std::move(doc));
}

}  // namespace socialcircle
