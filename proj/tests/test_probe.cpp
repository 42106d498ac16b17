// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include "oracles.hpp"
#include "socialcircle/server.hpp"
#include "socialcircle/synthetic.hpp"

using namespace socialcircle;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "socialcircle_probe_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_checkpoint(const std::string& name, const ModelConfig& config, std::uint64_t seed) {
  const std::string path = (scratch_dir() / name).string();
  save_checkpoint(path, config, ParameterStore::initialize(config, seed));
  return path;
}

std::vector<PredictionCase> scene_cases() {
  return build_windows(synthetic::avoidance_scene(4, 2), 8, 12, 1, "avoid");
}

class ProbeServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    config_.noise_dim = 16;
    checkpoint_ = write_checkpoint("model.json", config_, 5);
  }

  json predict_ok(ProbeService& service, const json& body) {
    const auto r = service.predict(body.dump());
    EXPECT_EQ(r.status, 200) << r.body;
    return json::parse(r.body);
  }

  ModelConfig config_;
  std::string checkpoint_;
};

}  // namespace

TEST_F(ProbeServiceTest, ErrorStatuses) {
  ProbeService service(scene_cases());
  const std::string id = service.cases().front().case_id;
  EXPECT_EQ(service.predict(json{{"case_id", id}}.dump()).status, 409);
  EXPECT_EQ(service.case_geometry("nope").status, 404);
  service.load_model(checkpoint_);
  EXPECT_EQ(service.predict(json{{"case_id", "nope"}}.dump()).status, 404);
  EXPECT_EQ(service.predict("{not json").status, 400);

  auto field_of = [&](const json& body) {
    const auto r = service.predict(body.dump());
    EXPECT_EQ(r.status, 400) << body.dump();
    return json::parse(r.body).value("field", std::string());
  };
  EXPECT_EQ(field_of({{"case_id", id}, {"K", 0}}), "K");
  EXPECT_EQ(field_of({{"case_id", id}, {"K", 1.5}}), "K");
  EXPECT_EQ(field_of({{"case_id", id}, {"seed", -1}}), "seed");
  EXPECT_EQ(field_of({{"case_id", id}, {"n_partitions", 9}}), "n_partitions");
  EXPECT_EQ(field_of({{"case_id", id}, {"n_partitions", 0}}), "n_partitions");
  EXPECT_EQ(field_of({{"case_id", id}, {"factors", "vdm"}}), "factors");
  EXPECT_EQ(field_of({{"case_id", id}, {"factors", "q"}}), "factors");
  EXPECT_EQ(field_of({{"case_id", 7}}), "case_id");
  EXPECT_EQ(field_of({{"case_id", id}, {"manual_neighbors", {{{"start", {0, 0}}}}}}), "manual_neighbors[0]");
  EXPECT_EQ(field_of({{"case_id", id}, {"manual_neighbors", {{{"start", {0, "x"}}, {"end", {1, 1}}}}}}),
            "manual_neighbors[0].start");
  EXPECT_EQ(service.load(R"({"path": "/does/not/exist.json"})").status, 400);
  EXPECT_EQ(service.load("[]").status, 400);
}

TEST_F(ProbeServiceTest, BaselineMatchesModelPipeline) {
  ProbeService service(scene_cases());
  service.load_model(checkpoint_);
  for (const auto& raw : service.cases()) {
    const json r = predict_ok(service, {{"case_id", raw.case_id}, {"K", 3}, {"seed", 4}});
    auto [c, transform] = prepare_case(raw, config_.partition.neighbor_cap);
    const auto out = sample_K(c, service.snapshot()->params, config_, 3, derive_case_seed(4, raw.case_id), &transform);
    ASSERT_EQ(r["predictions"].size(), 3u);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t t = 0; t < 12; ++t) {
        EXPECT_EQ(r["predictions"][k][t][0].get<double>(), (*out.denormalized)[k][t].x);
        EXPECT_EQ(r["predictions"][k][t][1].get<double>(), (*out.denormalized)[k][t].y);
      }
    EXPECT_EQ(r["observed"].size(), 8u);
    EXPECT_EQ(r["ground_truth"].size(), 12u);
    EXPECT_EQ(r["checkpoint"], service.snapshot()->checksum);
  }
}

TEST_F(ProbeServiceTest, ManualNeighborChangesOnlyItsPartition) {
  ProbeService service(scene_cases());
  service.load_model(checkpoint_);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-4, 4);
  for (const auto& raw : service.cases()) {
    const Vec2 me = raw.last_observed();
    const Vec2 start = me + Vec2{u(rng), u(rng)}, end = me + Vec2{u(rng), u(rng)};
    const json base = predict_ok(service, {{"case_id", raw.case_id}});
    const json probed = predict_ok(
        service, {{"case_id", raw.case_id}, {"manual_neighbors", {{{"start", {start.x, start.y}}, {"end", {end.x, end.y}}}}}});
    const int affected = oracle::linear_scan_partition(oracle::bearing(me, end), 8) - 1;
    for (int n = 0; n < 8; ++n) {
      if (n == affected) {
        EXPECT_NE(base["meta"]["values"][n], probed["meta"]["values"][n]);
        EXPECT_EQ(base["meta"]["counts"][n].get<int>() + 1, probed["meta"]["counts"][n].get<int>());
      } else {
        EXPECT_EQ(base["meta"]["values"][n], probed["meta"]["values"][n]) << "partition " << n;
      }
    }
    bool tagged = false;
    for (const auto& n : probed["neighbors"])
      if (n["manual"].get<bool>()) {
        tagged = true;
        EXPECT_EQ(n["observed"].size(), 8u);
        EXPECT_NEAR(n["observed"][7][0].get<double>(), end.x, 1e-9);
      }
    EXPECT_TRUE(tagged);
  }
}

TEST_F(ProbeServiceTest, PartitionOverride) {
  ProbeService service(scene_cases());
  service.load_model(checkpoint_);
  const std::string id = service.cases().front().case_id;
  const json four = predict_ok(service, {{"case_id", id}, {"n_partitions", 4}});
  const json eight = predict_ok(service, {{"case_id", id}, {"n_partitions", 8}});
  EXPECT_EQ(four["partition_boundaries"].size(), 4u);
  EXPECT_EQ(eight["partition_boundaries"].size(), 8u);
  EXPECT_EQ(four["attention"]["raw"].size(), 4u);
  EXPECT_DOUBLE_EQ(four["partition_boundaries"][1][0].get<double>(), std::numbers::pi / 2);
  const json masked = predict_ok(service, {{"case_id", id}, {"factors", "vd"}});
  EXPECT_EQ(masked["factors"], "vd");
  for (const auto& row : masked["meta"]["values"]) EXPECT_EQ(row[2].get<double>(), 0.0);
}

TEST_F(ProbeServiceTest, DeterministicBodies) {
  ProbeService service(scene_cases());
  service.load_model(checkpoint_);
  const json body{{"case_id", service.cases()[1].case_id},
                  {"K", 5},
                  {"seed", 12},
                  {"manual_neighbors", {{{"start", {1.0, 2.0}}, {"end", {0.5, 0.5}}}}}};
  EXPECT_EQ(service.predict(body.dump()).body, service.predict(body.dump()).body);
}

TEST_F(ProbeServiceTest, AttentionMatchesPartitionRows) {
  ProbeService service(scene_cases());
  service.load_model(checkpoint_);
  for (const auto& raw : service.cases()) {
    const json r = predict_ok(service, {{"case_id", raw.case_id}});
    auto [c, transform] = prepare_case(raw, 50);
    const ForwardResult f = forward(c, service.snapshot()->params, config_);
    const AttentionProfile expected = attention_scores(f.partition_rows);
    double total = 0.0;
    for (std::size_t n = 0; n < 8; ++n) {
      EXPECT_EQ(r["attention"]["raw"][n].get<double>(), expected.raw[n]);
      total += r["attention"]["normalized"][n].get<double>();
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST_F(ProbeServiceTest, PlainModelHasNullAttention) {
  ModelConfig plain;
  plain.use_socialcircle = false;
  ProbeService service(scene_cases());
  service.load_model(write_checkpoint("plain.json", plain, 1));
  const json r = predict_ok(service, {{"case_id", service.cases().front().case_id}});
  EXPECT_TRUE(r["attention"].is_null());
  EXPECT_TRUE(r["meta"].is_null());
}

TEST_F(ProbeServiceTest, SwapKeepsOldSnapshotAlive) {
  ProbeService service(scene_cases());
  service.load_model(checkpoint_);
  const auto held = service.snapshot();
  const std::string other = write_checkpoint("other.json", config_, 6);
  const auto r = service.load(json{{"path", other}}.dump());
  ASSERT_EQ(r.status, 200);
  EXPECT_NE(service.snapshot()->checksum, held->checksum);
  EXPECT_EQ(held->path, checkpoint_);
  EXPECT_EQ(json::parse(service.model_info().body)["path"], other);
}

TEST_F(ProbeServiceTest, ScenesAndCases) {
  ProbeService service(scene_cases());
  const json scenes = json::parse(service.scenes().body);
  ASSERT_EQ(scenes["scenes"].size(), 1u);
  EXPECT_EQ(scenes["scenes"][0]["cases"].size(), 4u);
  const json geometry = json::parse(service.case_geometry(service.cases()[0].case_id).body);
  EXPECT_EQ(geometry["observed"].size(), 8u);
  EXPECT_EQ(geometry["neighbors"].size(), 1u);
  EXPECT_FALSE(json::parse(service.model_info().body)["loaded"].get<bool>());
}

TEST_F(ProbeServiceTest, PlotDataLines) {
  ProbeService service(scene_cases());
  service.load_model(checkpoint_);
  const json r = predict_ok(service, {{"case_id", service.cases()[0].case_id},
                                      {"K", 2},
                                      {"manual_neighbors", {{{"start", {0, 0}}, {"end", {7, 0}}}}}});
  const std::string text = plot_data(r);
  EXPECT_EQ(text.rfind("observed:", 0), 0u);
  EXPECT_NE(text.find("\nmanual:manual-1: 0,0 1,0 2,0"), std::string::npos);
  EXPECT_NE(text.find("\nprediction:1:"), std::string::npos);
}

TEST_F(ProbeServiceTest, HttpRoundTrip) {
  ProbeService service(scene_cases());
  httplib::Server server;
  register_routes(server, service);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  const std::string id = service.cases()[0].case_id;
  auto predict = client.Post("/predict", json{{"case_id", id}}.dump(), "application/json");
  ASSERT_TRUE(predict);
  EXPECT_EQ(predict->status, 409);
  EXPECT_EQ(predict->get_header_value("Access-Control-Allow-Origin"), "*");

  auto load = client.Post("/model/load", json{{"path", checkpoint_}}.dump(), "application/json");
  ASSERT_TRUE(load);
  EXPECT_EQ(load->status, 200);
  EXPECT_TRUE(json::parse(load->body)["loaded"].get<bool>());

  auto scenes = client.Get("/scenes");
  ASSERT_TRUE(scenes);
  EXPECT_EQ(scenes->status, 200);

  auto geometry = client.Get("/cases/" + httplib::detail::encode_url(id));
  ASSERT_TRUE(geometry);
  EXPECT_EQ(geometry->status, 200);
  EXPECT_EQ(json::parse(geometry->body)["case_id"], id);
  auto missing = client.Get("/cases/nope");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  const json body{{"case_id", id}, {"K", 2}, {"seed", 3}};
  predict = client.Post("/predict", body.dump(), "application/json");
  ASSERT_TRUE(predict);
  EXPECT_EQ(predict->status, 200);
  EXPECT_EQ(predict->body, service.predict(body.dump()).body);

  auto preflight = client.Options("/predict");
  ASSERT_TRUE(preflight);
  EXPECT_EQ(preflight->status, 204);
  EXPECT_NE(preflight->get_header_value("Access-Control-Allow-Methods").find("POST"), std::string::npos);

  auto info = client.Get("/model");
  ASSERT_TRUE(info);
  EXPECT_EQ(json::parse(info->body)["checksum"], service.snapshot()->checksum);

  server.stop();
  worker.join();
}

TEST_F(ProbeServiceTest, ConcurrentRequestsDuringSwap) {
  ProbeService service(scene_cases());
  service.load_model(checkpoint_);
  const std::string other = write_checkpoint("swap.json", config_, 9);
  const json body{{"case_id", service.cases()[0].case_id}, {"K", 2}};
  const std::string a = service.predict(body.dump()).body;
  service.load_model(other);
  const std::string b = service.predict(body.dump()).body;
  service.load_model(checkpoint_);

  std::atomic<bool> stop{false};
  std::atomic<int> mismatches{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 3; ++t)
    readers.emplace_back([&] {
      while (!stop) {
        const std::string r = service.predict(body.dump()).body;
        if (r != a && r != b) ++mismatches;
      }
    });
  for (int i = 0; i < 10; ++i) service.load_model(i % 2 ? checkpoint_ : other);
  stop = true;
  for (auto& t : readers) t.join();
  EXPECT_EQ(mismatches.load(), 0);
}
