// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "socialcircle/checkpoint.hpp"

using namespace socialcircle;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "socialcircle_checkpoint_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Checkpoint, Base64RoundTripKeepsBits) {
  const std::vector<double> values{0.0, -0.0, 1.0 / 3.0, std::numeric_limits<double>::denorm_min(),
                                   std::numeric_limits<double>::max(), -1e-300, 0.1};
  for (std::size_t n = 0; n <= values.size(); ++n) {
    const std::span<const double> head(values.data(), n);
    const auto back = detail::decode_doubles(detail::encode_doubles(head), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i]), std::bit_cast<std::uint64_t>(values[i]));
  }
  EXPECT_THROW(detail::decode_doubles(detail::encode_doubles(values), 3), DataError);
  EXPECT_THROW(detail::decode_doubles("abc", 1), DataError);
}

TEST(Checkpoint, Sha256KnownVector) {
  EXPECT_EQ(detail::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Checkpoint, FileRoundTripIsBitwise) {
  ModelConfig config;
  config.noise_dim = 4;
  config.partition.n_partitions = 4;
  config.partition.factors = FactorSet::parse("vdrm");
  const ParameterStore params = ParameterStore::initialize(config, 17);
  const fs::path path = temp_file("round_trip.json");
  save_checkpoint(path.string(), config, params);
  const Checkpoint loaded = load_checkpoint(path.string());

  EXPECT_EQ(loaded.config.noise_dim, 4);
  EXPECT_EQ(loaded.config.partition.n_partitions, 4);
  EXPECT_EQ(loaded.config.partition.factors.letters(), "vdrm");
  EXPECT_EQ(loaded.params.tensors().size(), params.tensors().size());
  for (const auto& [name, t] : params.tensors()) {
    const auto a = t.data(), b = loaded.params.get(name).data();
    ASSERT_EQ(a.size(), b.size());
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << name;
  }

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto [c, transform] = prepare_case(oracle::random_case(rng, 5), 50);
    EXPECT_EQ(sample_K(c, params, config, 3, 1).samples, sample_K(c, loaded.params, loaded.config, 3, 1).samples);
  }
}

TEST(Checkpoint, TamperedContentFailsChecksum) {
  const ModelConfig config;
  auto doc = checkpoint_to_json(config, ParameterStore::initialize(config, 1));
  auto tampered = doc;
  tampered["config"]["neighbor_cap"] = 49;
  EXPECT_THROW(checkpoint_from_json(tampered), DataError);
  tampered = doc;
  std::string blob = tampered["parameters"][0]["data"];
  blob[0] = blob[0] == 'A' ? 'B' : 'A';
  tampered["parameters"][0]["data"] = blob;
  EXPECT_THROW(checkpoint_from_json(tampered), DataError);
  EXPECT_NO_THROW(checkpoint_from_json(doc));
}

TEST(Checkpoint, WrongVersionOrFormatRejected) {
  const ModelConfig config;
  auto doc = checkpoint_to_json(config, ParameterStore::initialize(config, 1));
  doc["format_version"] = 2;
  EXPECT_THROW(checkpoint_from_json(doc), DataError);
  EXPECT_THROW(checkpoint_from_json(nlohmann::json::array()), DataError);
  EXPECT_THROW(load_checkpoint(temp_file("missing.json").string()), DataError);
  std::ofstream(temp_file("garbage.json")) << "{not json";
  EXPECT_THROW(load_checkpoint(temp_file("garbage.json").string()), DataError);
}

TEST(Checkpoint, ConfigJsonRoundTrip) {
  ModelConfig config;
  config.use_socialcircle = false;
  config.partition.dt = 0.1;
  config.d_ff = 32;
  const ModelConfig back = config_from_json(config_to_json(config));
  EXPECT_EQ(config_to_json(back), config_to_json(config));
  EXPECT_THROW(config_from_json({{"d", 8}}), DataError);
}
