// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Displacement metrics and best-of-K evaluation.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "socialcircle/errors.hpp"
#include "socialcircle/model.hpp"
#include "socialcircle/trajectory.hpp"

namespace socialcircle {

namespace detail {
inline void check_comparable(const Polyline& pred, const Polyline& gt, const char* op) {
  if (pred.size() != gt.size() || pred.empty())
    throw ShapeError(std::string(op) + ": prediction has " + std::to_string(pred.size()) + " steps, ground truth " +
                     std::to_string(gt.size()));
}
}  // namespace detail

/// Mean Euclidean displacement over all future steps.
inline double ade(const Polyline& pred, const Polyline& gt) {
  detail::check_comparable(pred, gt, "ade");
  double total = 0.0;
  for (std::size_t t = 0; t < pred.size(); ++t) total += norm(pred[t] - gt[t]);
  return total / static_cast<double>(pred.size());
}

/// Euclidean displacement at the final step.
inline double fde(const Polyline& pred, const Polyline& gt) {
  detail::check_comparable(pred, gt, "fde");
  return norm(pred.back() - gt.back());
}

struct MinOverK {
  double min_ade = 0.0;
  double min_fde = 0.0;
};

/// Independent minima of ADE and FDE across samples.
inline MinOverK min_over_k(const std::vector<Polyline>& samples, const Polyline& gt) {
  if (samples.empty()) throw ConfigError("min_over_k: K must be >= 1");
  MinOverK best{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& s : samples) {
    best.min_ade = std::min(best.min_ade, ade(s, gt));
    best.min_fde = std::min(best.min_fde, fde(s, gt));
  }
  return best;
}

struct CaseMetrics {
  std::string case_id;
  double min_ade = 0.0;
  double min_fde = 0.0;
};

struct EvalReport {
  double min_ade_k = 0.0;
  double min_fde_k = 0.0;
  int K = 1;
  std::size_t n_cases = 0;
  UnitTag unit = UnitTag::meters;
  std::vector<CaseMetrics> per_case;
};

/// Produces K samples for a raw case in its scene frame.
using Predictor = std::function<std::vector<Polyline>(const PredictionCase& raw, int K, std::uint64_t seed)>;

inline EvalReport evaluate(const Predictor& predictor, const std::vector<PredictionCase>& testset, int K,
                           std::uint64_t seed) {
  if (testset.empty()) throw DataError("evaluate: empty test set");
  if (K < 1) throw ConfigError("evaluate: K must be >= 1");
  EvalReport report;
  report.K = K;
  report.n_cases = testset.size();
  report.unit = testset.front().unit;
  double ade_sum = 0.0, fde_sum = 0.0;
  for (const auto& c : testset) {
    if (!c.target_future) throw DataError("evaluate: case '" + c.case_id + "' has no ground-truth future");
    const auto samples = predictor(c, K, derive_case_seed(seed, c.case_id));
    const auto best = min_over_k(samples, *c.target_future);
    report.per_case.push_back({c.case_id, best.min_ade, best.min_fde});
    ade_sum += best.min_ade;
    fde_sum += best.min_fde;
  }
  report.min_ade_k = ade_sum / static_cast<double>(testset.size());
  report.min_fde_k = fde_sum / static_cast<double>(testset.size());
  return report;
}

/// Predictor backed by the transformer forecaster.
inline Predictor model_predictor(const ModelConfig& config, const ParameterStore& params) {
  return [config, params](const PredictionCase& raw, int K, std::uint64_t seed) {
    auto [c, transform] = prepare_case(raw, config.partition.neighbor_cap);
    return *sample_K(c, params, config, K, seed, &transform).denormalized;
  };
}

inline EvalReport evaluate(const ModelConfig& config, const ParameterStore& params,
                           const std::vector<PredictionCase>& testset, int K, std::uint64_t seed) {
  return evaluate(model_predictor(config, params), testset, K, seed);
}

inline void write_report(std::ostream& out, const EvalReport& report) {
  out << std::setprecision(17);
  out << "min_ade_k = " << report.min_ade_k << '\n'
      << "min_fde_k = " << report.min_fde_k << '\n'
      << "k = " << report.K << '\n'
      << "n_cases = " << report.n_cases << '\n'
      << "unit = " << to_string(report.unit) << '\n';
}

inline void write_per_case_table(std::ostream& out, const EvalReport& report) {
  out << std::setprecision(17) << "case_id\tmin_ade\tmin_fde\n";
  for (const auto& row : report.per_case) out << row.case_id << '\t' << row.min_ade << '\t' << row.min_fde << '\n';
}

}  // namespace socialcircle
