// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line entry points: train, eval, probe, serve, synth.
//
// Every subcommand accepts `--config FILE`, a flat `key = value` file whose
// keys are long flag names without the leading dashes. Flags given on the
// command line override the file.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 numerical abort.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "socialcircle/checkpoint.hpp"
#include "socialcircle/metrics.hpp"
#include "socialcircle/probe.hpp"
#include "socialcircle/server.hpp"
#include "socialcircle/synthetic.hpp"
#include "socialcircle/train.hpp"

namespace socialcircle::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kData = 2, kNumerical = 3 };

namespace fs = std::filesystem;

/// Reads a flat `key = value` (or `key value`) file into `--key=value` arguments.
inline std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    auto split = line.find('=');
    if (split == std::string::npos) split = line.find_first_of(" \t");
    if (split == std::string::npos) throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = line.substr(0, split);
    std::string value = line.substr(split + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    const auto vstart = value.find_first_not_of(" \t");
    value = vstart == std::string::npos ? "" : value.substr(vstart);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

inline std::vector<PredictionCase> load_cases(const std::vector<std::string>& paths, int t_h, int t_f, int stride,
                                              UnitTag unit) {
  std::vector<PredictionCase> cases;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open trajectory file '" + path + "'");
    std::vector<AgentTrack> tracks;
    try {
      tracks = parse_trajectory_file(in, unit);
    } catch (const ParseError& e) {
      throw DataError(path + ": " + e.what());
    }
    auto scene = build_windows(tracks, t_h, t_f, stride, fs::path(path).stem().string());
    cases.insert(cases.end(), std::make_move_iterator(scene.begin()), std::make_move_iterator(scene.end()));
  }
  return cases;
}

inline std::pair<Vec2, Vec2> parse_manual_spec(const std::string& spec) {
  auto fail = [&]() -> std::pair<Vec2, Vec2> {
    throw ConfigError("malformed --manual '" + spec + "' (expected x0,y0:x1,y1)");
  };
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return fail();
  auto point = [&](const std::string& text) -> std::optional<Vec2> {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return std::nullopt;
    auto x = detail::parse_real(text.substr(0, comma));
    auto y = detail::parse_real(text.substr(comma + 1));
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) return std::nullopt;
    return Vec2{*x, *y};
  };
  auto start = point(spec.substr(0, colon));
  auto end = point(spec.substr(colon + 1));
  if (!start || !end) return fail();
  return {*start, *end};
}

struct DataOptions {
  std::vector<std::string> paths;
  int stride = 1;
  std::string unit = "meters";
};

struct RunOptions {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
};

inline void add_run_options(CLI::App* sub, RunOptions& run, bool out_required = true) {
  sub->add_option("--config", run.config, "Flat key = value file; command-line flags override it");
  auto* out = sub->add_option("--out", run.out, "Output directory (created if absent)");
  if (out_required) out->required();
  sub->add_option("--seed", run.seed, "Master seed")->capture_default_str();
}

inline void add_data_options(CLI::App* sub, DataOptions& data, bool required = true) {
  auto* opt = sub->add_option("--data", data.paths, "Trajectory text file(s): frame agent_id x y")
                  ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  if (required) opt->required();
  sub->add_option("--stride", data.stride, "Window stride in steps")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--unit", data.unit, "Coordinate unit tag")->capture_default_str()->check(CLI::IsMember({"meters", "pixels"}));
}

/// Prepares the output directory and echoes the run manifest into it.
inline void write_manifest(const CLI::App& sub, const RunOptions& run, const std::vector<std::string>& data) {
  fs::create_directories(run.out);
  std::ofstream out(fs::path(run.out) / "manifest.txt");
  if (!out) throw DataError("cannot write manifest in '" + run.out + "'");
  out << "subcommand = " << sub.get_name() << '\n' << "config = \"" << run.config << "\"\n"
      << "seed = " << run.seed << '\n' << "output = \"" << run.out << "\"\n" << "data = [";
  for (std::size_t i = 0; i < data.size(); ++i) out << (i ? ", " : "") << '"' << data[i] << '"';
  out << "]\n# effective options\n" << sub.config_to_str(true, false);
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

inline int run(int argc, const char* const* argv, std::ostream& stdout_ = std::cout, std::ostream& stderr_ = std::cerr) {
  // Splice config-file entries in front of the subcommand's own flags.
  std::vector<std::string> args(argv, argv + argc);
  try {
    for (std::size_t i = 2; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (path.empty()) continue;
      auto injected = config_file_args(path);
      args.insert(args.begin() + 2, injected.begin(), injected.end());
      break;
    }
  } catch (const DataError& e) {
    stderr_ << "error: " << e.what() << '\n';
    return kData;
  } catch (const ConfigError& e) {
    stderr_ << "error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"SocialCircle trajectory-prediction lab", "socialcircle"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // Model and training flags (train).
  ModelConfig model;
  TrainConfig training;
  std::string factors = "vdr";
  bool no_sc = false;
  RunOptions run_opts;
  DataOptions data_opts;

  auto* train_cmd = app.add_subcommand("train", "Train a forecaster; writes checkpoint.json and loss_curve.txt");
  add_run_options(train_cmd, run_opts);
  add_data_options(train_cmd, data_opts);
  train_cmd->add_option("--t-h", model.t_h, "Observed steps")->capture_default_str();
  train_cmd->add_option("--t-f", model.t_f, "Predicted steps")->capture_default_str();
  train_cmd->add_option("--n-partitions", model.partition.n_partitions, "Angular partitions")->capture_default_str();
  train_cmd->add_option("--factors", factors, "Meta factors, subset of vdrm")->capture_default_str();
  train_cmd->add_option("--neighbor-cap", model.partition.neighbor_cap, "Nearest neighbors kept")->capture_default_str();
  train_cmd->add_option("--dt", model.partition.dt, "Seconds per step")->capture_default_str();
  train_cmd->add_flag("--no-socialcircle", no_sc, "Train the plain transformer");
  train_cmd->add_option("--d", model.d, "Feature width")->capture_default_str();
  train_cmd->add_option("--d-sc", model.d_sc, "SocialCircle feature width")->capture_default_str();
  train_cmd->add_option("--d-ff", model.d_ff, "Feedforward width")->capture_default_str();
  train_cmd->add_option("--layers", model.n_layers, "Encoder layers")->capture_default_str();
  train_cmd->add_option("--heads", model.n_heads, "Attention heads")->capture_default_str();
  train_cmd->add_option("--noise-dim", model.noise_dim, "Noise width for multimodal sampling")->capture_default_str();
  train_cmd->add_option("--epochs", training.epochs, "Training epochs")->capture_default_str();
  train_cmd->add_option("--lr", training.learning_rate, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--batch-size", training.batch_size, "Mini-batch size")->capture_default_str();
  train_cmd->add_option("--checkpoint-every", training.checkpoint_every, "Extra checkpoint interval in epochs (0 = off)")
      ->capture_default_str();

  // eval / probe / serve share a checkpoint.
  std::string checkpoint_path;
  int K = 20;
  auto* eval_cmd = app.add_subcommand("eval", "Best-of-K ADE/FDE; writes report.txt and per_case.tsv");
  add_run_options(eval_cmd, run_opts);
  add_data_options(eval_cmd, data_opts);
  eval_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint manifest")->required();
  eval_cmd->add_option("--k", K, "Samples per case")->capture_default_str()->check(CLI::PositiveNumber);

  std::string case_id;
  std::vector<std::string> manual_specs;
  std::optional<int> override_partitions;
  std::optional<std::string> override_factors;
  std::string plot_path;
  int probe_k = 1;
  auto* probe_cmd = app.add_subcommand("probe", "Predict one case with manual neighbors; writes probe.json");
  add_run_options(probe_cmd, run_opts);
  add_data_options(probe_cmd, data_opts);
  probe_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint manifest")->required();
  probe_cmd->add_option("--case", case_id, "Case id (default: first case)");
  probe_cmd->add_option("--manual", manual_specs, "Manual neighbor x0,y0:x1,y1 (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  probe_cmd->add_option("--k", probe_k, "Samples")->capture_default_str()->check(CLI::PositiveNumber);
  probe_cmd->add_option("--n-partitions", override_partitions, "Partition-count override");
  probe_cmd->add_option("--factors", override_factors, "Factor override, subset of the model's factors");
  probe_cmd->add_option("--plot", plot_path, "Also write plot-data polylines to this file");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the probe HTTP service");
  add_run_options(serve_cmd, run_opts, false);
  add_data_options(serve_cmd, data_opts);
  serve_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint loaded at startup");
  serve_cmd->add_option("--t-h", model.t_h, "Observed steps when no checkpoint is given")->capture_default_str();
  serve_cmd->add_option("--t-f", model.t_f, "Predicted steps when no checkpoint is given")->capture_default_str();
  serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", port, "Bind port")->capture_default_str();

  std::string kind = "linear";
  int synth_n = 10;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic trajectory file");
  synth_cmd->add_option("--kind", kind, "linear or avoidance")->capture_default_str()->check(CLI::IsMember({"linear", "avoidance"}));
  synth_cmd->add_option("--n", synth_n, "Agents (linear) or segments (avoidance)")->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", run_opts.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--out", run_opts.out, "Output trajectory file")->required();
  for (auto* sub : {train_cmd, eval_cmd, probe_cmd, serve_cmd, synth_cmd}) sub->allow_extras(false);

  std::vector<const char*> cargv;
  for (const auto& a : args) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      stdout_ << app.help();
      return kSuccess;
    }
    stderr_ << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const UnitTag unit = parse_unit(data_opts.unit);
    if (*train_cmd) {
      model.partition.factors = FactorSet::parse(factors);
      model.partition.t_h = model.t_h;
      model.use_socialcircle = !no_sc;
      training.seed = run_opts.seed;
      model.validate();
      training.validate();
      const auto cases = load_cases(data_opts.paths, model.t_h, model.t_f, data_opts.stride, unit);
      if (cases.empty()) throw DataError("no prediction cases in the given data");
      write_manifest(*train_cmd, run_opts, data_opts.paths);
      const fs::path out(run_opts.out);
      auto result = train(cases, model, training, [&](int epoch, const ParameterStore& p) {
        save_checkpoint((out / ("checkpoint_epoch" + std::to_string(epoch) + ".json")).string(), model, p);
      });
      save_checkpoint((out / "checkpoint.json").string(), model, result.params);
      std::ostringstream curve;
      curve.precision(17);
      for (std::size_t e = 0; e < result.loss_curve.size(); ++e) curve << e + 1 << ' ' << result.loss_curve[e] << '\n';
      write_text(out / "loss_curve.txt", curve.str());
      stdout_ << "trained " << cases.size() << " cases, final loss " << result.loss_curve.back() << '\n';
      return kSuccess;
    }

    if (*eval_cmd) {
      const Checkpoint ckpt = load_checkpoint(checkpoint_path);
      const auto cases = load_cases(data_opts.paths, ckpt.config.t_h, ckpt.config.t_f, data_opts.stride, unit);
      const EvalReport report = evaluate(ckpt.config, ckpt.params, cases, K, run_opts.seed);
      write_manifest(*eval_cmd, run_opts, data_opts.paths);
      std::ostringstream text, table;
      write_report(text, report);
      write_per_case_table(table, report);
      write_text(fs::path(run_opts.out) / "report.txt", text.str());
      write_text(fs::path(run_opts.out) / "per_case.tsv", table.str());
      stdout_ << text.str();
      return kSuccess;
    }

    if (*probe_cmd) {
      const LoadedModel loaded = LoadedModel::from_file(checkpoint_path);
      const auto cases = load_cases(data_opts.paths, loaded.config.t_h, loaded.config.t_f, data_opts.stride, unit);
      if (cases.empty()) throw DataError("no prediction cases in the given data");
      const PredictionCase* chosen = &cases.front();
      if (!case_id.empty()) {
        chosen = nullptr;
        for (const auto& c : cases)
          if (c.case_id == case_id) chosen = &c;
        if (!chosen) throw DataError("unknown case '" + case_id + "'");
      }
      ProbeRequest req;
      req.case_id = chosen->case_id;
      req.K = probe_k;
      req.seed = run_opts.seed;
      req.n_partitions = override_partitions;
      if (override_factors) req.factors = FactorSet::parse(*override_factors);
      for (const auto& spec : manual_specs) {
        auto [start, end] = parse_manual_spec(spec);
        req.manual_neighbors.push_back({start, end});
      }
      json response;
      try {
        response = run_probe(*chosen, loaded, req);
      } catch (const RequestError& e) {
        throw ConfigError(e.what());
      }
      write_manifest(*probe_cmd, run_opts, data_opts.paths);
      write_text(fs::path(run_opts.out) / "probe.json", response.dump(1) + "\n");
      if (!plot_path.empty()) write_text(plot_path, plot_data(response));
      return kSuccess;
    }

    if (*serve_cmd) {
      int t_h = model.t_h, t_f = model.t_f;
      std::optional<LoadedModel> initial;
      if (!checkpoint_path.empty()) {
        initial = LoadedModel::from_file(checkpoint_path);
        t_h = initial->config.t_h;
        t_f = initial->config.t_f;
      }
      ProbeService service(load_cases(data_opts.paths, t_h, t_f, data_opts.stride, unit));
      if (!checkpoint_path.empty()) service.load_model(checkpoint_path);
      if (!run_opts.out.empty()) write_manifest(*serve_cmd, run_opts, data_opts.paths);
      stdout_ << "serving " << service.cases().size() << " cases on http://" << host << ':' << port << std::endl;
      if (!serve(service, host, port)) throw DataError("cannot bind " + host + ":" + std::to_string(port));
      return kSuccess;
    }

    if (*synth_cmd) {
      const auto tracks = kind == "linear" ? synthetic::linear_motion_scene(synth_n, run_opts.seed)
                                           : synthetic::avoidance_scene(synth_n, run_opts.seed);
      std::ostringstream text;
      text << "# synthetic " << kind << " scene, seed " << run_opts.seed << '\n';
      write_trajectory_file(text, tracks);
      write_text(run_opts.out, text.str());
      return kSuccess;
    }
  } catch (const NumericalAbort& e) {
    stderr_ << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const ConfigError& e) {
    stderr_ << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    stderr_ << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace socialcircle::cli
