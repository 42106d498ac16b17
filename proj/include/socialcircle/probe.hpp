// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// What-if probing: predictions for a case after adding manual neighbors, with
// the per-partition attention profile and meta matrix. `ProbeService` holds
// the case set and an atomically swappable model snapshot and answers the
// HTTP API's requests as (status, JSON body) pairs.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "socialcircle/checkpoint.hpp"
#include "socialcircle/circle.hpp"
#include "socialcircle/model.hpp"
#include "socialcircle/trajectory.hpp"

namespace socialcircle {

using nlohmann::json;

struct LoadedModel {
  ModelConfig config;
  ParameterStore params;
  std::string checksum;
  std::string path;

  static LoadedModel from_file(const std::string& path) {
    Checkpoint ckpt = load_checkpoint(path);
    return {std::move(ckpt.config), std::move(ckpt.params), std::move(ckpt.checksum), path};
  }
};

/// A request field that failed validation.
class RequestError : public std::invalid_argument {
 public:
  RequestError(std::string field, const std::string& what) : std::invalid_argument(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ManualNeighbor {
  Vec2 start;
  Vec2 end;
};

struct ProbeRequest {
  std::string case_id;
  std::vector<ManualNeighbor> manual_neighbors;
  int K = 1;
  std::uint64_t seed = 0;
  std::optional<int> n_partitions;
  std::optional<FactorSet> factors;

  static ProbeRequest from_json(const json& body) {
    if (!body.is_object()) throw RequestError("body", "request body must be a JSON object");
    ProbeRequest req;
    auto point = [](const json& j, const std::string& field) {
      if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw RequestError(field, field + " must be a [x, y] pair of numbers");
      const Vec2 p{j[0].get<double>(), j[1].get<double>()};
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw RequestError(field, field + " must be finite");
      return p;
    };
    if (!body.contains("case_id") || !body["case_id"].is_string())
      throw RequestError("case_id", "case_id must be a string");
    req.case_id = body["case_id"].get<std::string>();
    if (body.contains("manual_neighbors")) {
      const auto& list = body["manual_neighbors"];
      if (!list.is_array()) throw RequestError("manual_neighbors", "manual_neighbors must be an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string field = "manual_neighbors[" + std::to_string(i) + "]";
        if (!list[i].is_object() || !list[i].contains("start") || !list[i].contains("end"))
          throw RequestError(field, field + " must have start and end");
        req.manual_neighbors.push_back({point(list[i]["start"], field + ".start"), point(list[i]["end"], field + ".end")});
      }
    }
    if (body.contains("K")) {
      if (!body["K"].is_number_integer() || body["K"].get<long long>() < 1 || body["K"].get<long long>() > 1000)
        throw RequestError("K", "K must be an integer in [1, 1000]");
      req.K = body["K"].get<int>();
    }
    if (body.contains("seed")) {
      if (!body["seed"].is_number_unsigned()) throw RequestError("seed", "seed must be a non-negative integer");
      req.seed = body["seed"].get<std::uint64_t>();
    }
    if (body.contains("n_partitions") && !body["n_partitions"].is_null()) {
      if (!body["n_partitions"].is_number_integer()) throw RequestError("n_partitions", "n_partitions must be an integer");
      req.n_partitions = body["n_partitions"].get<int>();
    }
    if (body.contains("factors") && !body["factors"].is_null()) {
      if (!body["factors"].is_string()) throw RequestError("factors", "factors must be a string over vdrm");
      try {
        req.factors = FactorSet::parse(body["factors"].get<std::string>());
      } catch (const ConfigError& e) {
        throw RequestError("factors", e.what());
      }
    }
    return req;
  }
};

inline json polyline_json(const Polyline& line) {
  json out = json::array();
  for (auto p : line) out.push_back({p.x, p.y});
  return out;
}

inline json meta_json(const MetaMatrix& meta) {
  json factors = json::array();
  for (auto f : meta.factors) factors.push_back(factor_name(f));
  json rows = json::array();
  for (std::size_t n = 0; n < meta.n_partitions; ++n) {
    json row = json::array();
    for (std::size_t f = 0; f < meta.n_factors(); ++f) row.push_back(meta.at(n, f));
    rows.push_back(std::move(row));
  }
  return {{"factors", factors}, {"values", rows}, {"counts", meta.counts}};
}

/// Model configuration with a request's partition and factor overrides
/// applied; throws RequestError when the result is invalid.
inline ModelConfig probe_config(const ModelConfig& base, const ProbeRequest& req) {
  ModelConfig config = base;
  if (req.n_partitions) config.partition.n_partitions = *req.n_partitions;
  if (req.factors) config.factor_mask = req.factors;
  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw RequestError(req.factors && !req.factors->subset_of(base.partition.factors) ? "factors" : "n_partitions", e.what());
  }
  return config;
}

/// Runs one probe on a raw (scene-frame) case. Pure in (model, request).
inline json run_probe(const PredictionCase& raw, const LoadedModel& model, const ProbeRequest& req) {
  const ModelConfig config = probe_config(model.config, req);
  const int cap = config.partition.neighbor_cap;
  PredictionCase probed = raw;
  for (const auto& m : req.manual_neighbors) probed = inject_manual_neighbor(probed, m.start, m.end, cap);
  auto [c, transform] = prepare_case(probed, cap);
  const PredictionOutput out = sample_K(c, model.params, config, req.K, derive_case_seed(req.seed, raw.case_id), &transform);

  json neighbors = json::array();
  for (const auto& n : c.neighbors)
    neighbors.push_back({{"agent_id", n.agent_id}, {"manual", n.manual}, {"observed", polyline_json(transform.invert(n.observed))}});
  json predictions = json::array();
  for (const auto& s : *out.denormalized) predictions.push_back(polyline_json(s));
  json boundaries = json::array();
  for (auto [lo, hi] : partition_boundaries(config.partition.n_partitions)) boundaries.push_back({lo, hi});

  json response{{"case_id", raw.case_id},
                {"scene_id", raw.scene_id},
                {"unit", to_string(raw.unit)},
                {"K", req.K},
                {"seed", req.seed},
                {"checkpoint", model.checksum},
                {"use_socialcircle", config.use_socialcircle},
                {"n_partitions", config.partition.n_partitions},
                {"factors", (config.factor_mask ? *config.factor_mask : config.partition.factors).letters()},
                {"observed", polyline_json(raw.target_observed)},
                {"ground_truth", raw.target_future ? polyline_json(*raw.target_future) : json(nullptr)},
                {"neighbors", neighbors},
                {"predictions", predictions},
                {"partition_boundaries", boundaries}};
  if (out.attention)
    response["attention"] = {{"raw", out.attention->raw}, {"normalized", out.attention->normalized}};
  else
    response["attention"] = nullptr;
  response["meta"] = out.meta ? meta_json(*out.meta) : json(nullptr);
  return response;
}

/// Plot-data lines `label: x0,y0 x1,y1 ...` for a probe response.
inline std::string plot_data(const json& response) {
  std::ostringstream out;
  out.precision(17);
  auto line = [&](const std::string& label, const json& poly) {
    out << label << ':';
    for (const auto& p : poly) out << ' ' << p[0].get<double>() << ',' << p[1].get<double>();
    out << '\n';
  };
  line("observed", response["observed"]);
  if (!response["ground_truth"].is_null()) line("ground_truth", response["ground_truth"]);
  for (const auto& n : response["neighbors"])
    line(std::string(n["manual"].get<bool>() ? "manual" : "neighbor") + ":" + n["agent_id"].get<std::string>(), n["observed"]);
  for (std::size_t k = 0; k < response["predictions"].size(); ++k)
    line("prediction:" + std::to_string(k), response["predictions"][k]);
  return out.str();
}

inline json case_json(const PredictionCase& c) {
  json neighbors = json::array();
  for (const auto& n : c.neighbors)
    neighbors.push_back({{"agent_id", n.agent_id}, {"manual", n.manual}, {"observed", polyline_json(n.observed)}});
  return {{"case_id", c.case_id},
          {"scene_id", c.scene_id},
          {"unit", to_string(c.unit)},
          {"t_h", c.t_h()},
          {"observed", polyline_json(c.target_observed)},
          {"ground_truth", c.target_future ? polyline_json(*c.target_future) : json(nullptr)},
          {"neighbors", neighbors}};
}

class ProbeService {
 public:
  struct Response {
    int status = 200;
    std::string body;
  };

  explicit ProbeService(std::vector<PredictionCase> cases) : cases_(std::move(cases)) {
    for (std::size_t i = 0; i < cases_.size(); ++i) by_id_.emplace(cases_[i].case_id, i);
  }

  /// Loads a checkpoint and swaps it in; in-flight requests keep their snapshot.
  void load_model(const std::string& path) {
    auto next = std::make_shared<const LoadedModel>(LoadedModel::from_file(path));
    std::lock_guard lock(mutex_);
    model_ = std::move(next);
  }

  std::shared_ptr<const LoadedModel> snapshot() const {
    std::lock_guard lock(mutex_);
    return model_;
  }

  const std::vector<PredictionCase>& cases() const { return cases_; }

  Response scenes() const {
    std::map<std::string, json> grouped;
    for (const auto& c : cases_) {
      auto& entry = grouped[c.scene_id];
      if (entry.is_null()) entry = json::array();
      entry.push_back(c.case_id);
    }
    json list = json::array();
    for (auto& [scene, ids] : grouped) list.push_back({{"scene_id", scene}, {"cases", std::move(ids)}});
    return ok({{"scenes", list}});
  }

  Response case_geometry(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return error(404, "unknown case '" + id + "'", "case_id");
    return ok(case_json(cases_[it->second]));
  }

  Response predict(const std::string& body) const {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded()) return error(400, "request body is not valid JSON", "body");
    try {
      const ProbeRequest req = ProbeRequest::from_json(parsed);
      auto it = by_id_.find(req.case_id);
      if (it == by_id_.end()) return error(404, "unknown case '" + req.case_id + "'", "case_id");
      const auto model = snapshot();
      if (!model) return error(409, "no model loaded", "");
      return ok(run_probe(cases_[it->second], *model, req));
    } catch (const RequestError& e) {
      return error(400, e.what(), e.field());
    } catch (const std::exception& e) {
      return error(400, e.what(), "");
    }
  }

  Response model_info() const {
    const auto model = snapshot();
    if (!model) return ok({{"loaded", false}});
    return ok({{"loaded", true},
               {"path", model->path},
               {"checksum", model->checksum},
               {"parameters", model->params.parameter_count()},
               {"config", config_to_json(model->config)}});
  }

  Response load(const std::string& body) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("path") || !parsed["path"].is_string())
      return error(400, "body must be {\"path\": string}", "path");
    try {
      load_model(parsed["path"].get<std::string>());
    } catch (const std::exception& e) {
      return error(400, e.what(), "path");
    }
    return model_info();
  }

 private:
  static Response ok(const json& body) { return {200, body.dump()}; }
  static Response error(int status, const std::string& message, const std::string& field) {
    json body{{"error", message}};
    if (!field.empty()) body["field"] = field;
    return {status, body.dump()};
  }

  std::vector<PredictionCase> cases_;
  std::map<std::string, std::size_t> by_id_;
  mutable std::mutex mutex_;
  std::shared_ptr<const LoadedModel> model_;
};

}  // namespace socialcircle
