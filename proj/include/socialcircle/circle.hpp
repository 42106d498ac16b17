// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Angle-based social context representation.
//
// Neighbors of a target agent are binned into N half-open angular partitions
// [2(n-1)pi/N, 2n*pi/N) by their bearing from the target at the last observed
// step. Each partition is summarised by a small "meta" vector of per-neighbor
// factors averaged over its members. The target itself always sits in
// partition 1 as a self-neighbor.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "socialcircle/errors.hpp"
#include "socialcircle/tensor.hpp"
#include "socialcircle/trajectory.hpp"

namespace socialcircle {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Factor { velocity = 0, distance = 1, direction = 2, movement_direction = 3 };

inline constexpr std::array<Factor, 4> kAllFactors = {Factor::velocity, Factor::distance, Factor::direction,
                                                      Factor::movement_direction};

inline std::string_view factor_name(Factor f) {
  switch (f) {
    case Factor::velocity: return "velocity";
    case Factor::distance: return "distance";
    case Factor::direction: return "direction";
    case Factor::movement_direction: return "movement_direction";
  }
  return "";
}

/// Ordered set of meta factors, written as a subset of the letters "vdrm".
class FactorSet {
 public:
  FactorSet() = default;

  static FactorSet parse(std::string_view letters) {
    FactorSet set;
    for (char ch : letters) {
      switch (ch) {
        case 'v': case 'V': set.insert(Factor::velocity); break;
        case 'd': case 'D': set.insert(Factor::distance); break;
        case 'r': case 'R': set.insert(Factor::direction); break;
        case 'm': case 'M': set.insert(Factor::movement_direction); break;
        default: throw ConfigError("unknown factor letter '" + std::string(1, ch) + "' (expected a subset of vdrm)");
      }
    }
    if (set.empty()) throw ConfigError("factor set must not be empty");
    return set;
  }

  static FactorSet vdr() { return parse("vdr"); }

  void insert(Factor f) { bits_ |= bit(f); }
  bool contains(Factor f) const { return bits_ & bit(f); }
  bool empty() const { return bits_ == 0; }
  bool subset_of(const FactorSet& other) const { return (bits_ & ~other.bits_) == 0; }

  /// Enabled factors in canonical order; this is the column order of MetaMatrix.
  std::vector<Factor> ordered() const {
    std::vector<Factor> out;
    for (auto f : kAllFactors)
      if (contains(f)) out.push_back(f);
    return out;
  }
  std::size_t size() const { return ordered().size(); }

  std::string letters() const {
    static constexpr std::string_view kLetters = "vdrm";
    std::string out;
    for (auto f : ordered()) out += kLetters[static_cast<std::size_t>(f)];
    return out;
  }

  friend bool operator==(const FactorSet&, const FactorSet&) = default;

 private:
  static unsigned bit(Factor f) { return 1u << static_cast<unsigned>(f); }
  unsigned bits_ = 0;
};

struct PartitionConfig {
  int n_partitions = 8;
  FactorSet factors = FactorSet::vdr();
  int neighbor_cap = 50;
  int t_h = 8;
  /// Seconds between consecutive observed steps.
  double dt = 0.4;

  void validate() const {
    if (t_h < 1) throw ConfigError("t_h must be >= 1");
    if (n_partitions < 1 || n_partitions > t_h)
      throw ConfigError("n_partitions must satisfy 1 <= n_partitions <= t_h (got " + std::to_string(n_partitions) +
                        " with t_h " + std::to_string(t_h) + ")");
    if (factors.empty()) throw ConfigError("factor set must not be empty");
    if (neighbor_cap < 0) throw ConfigError("neighbor_cap must be >= 0");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  }
};

struct MetaMatrix {
  std::size_t n_partitions = 0;
  std::vector<Factor> factors;
  /// Row-major n_partitions x factors.size().
  std::vector<double> values;
  /// Members per partition, self-neighbor included.
  std::vector<std::size_t> counts;

  std::size_t n_factors() const { return factors.size(); }
  double at(std::size_t partition, std::size_t factor) const { return values[partition * n_factors() + factor]; }
  double& at(std::size_t partition, std::size_t factor) { return values[partition * n_factors() + factor]; }

  Tensor to_tensor() const { return Tensor::from({n_partitions, n_factors()}, values); }
};

struct AttentionProfile {
  std::vector<double> raw;
  std::vector<double> normalized;
};

// ---------------------------------------------------------------------------

/// Bearing of `neighbor` seen from `target`, in [0, 2pi). Coincident points
/// have bearing 0.
inline double relative_angle(Vec2 target, Vec2 neighbor) {
  const Vec2 d = neighbor - target;
  if (d.x == 0.0 && d.y == 0.0) return 0.0;
  double angle = std::atan2(d.y, d.x);
  if (angle < 0.0) angle += kTwoPi;
  // -tiny + 2pi rounds up to 2pi; keep it inside the last partition.
  if (angle >= kTwoPi) angle = std::nextafter(kTwoPi, 0.0);
  return angle;
}

/// Lower edge of partition `index` (0-based); index == n gives 2pi.
inline double partition_edge(std::size_t index, int n_partitions) {
  return kTwoPi * static_cast<double>(index) / static_cast<double>(n_partitions);
}

/// 1-based partition containing `angle`.
inline int assign_partition(double angle, int n_partitions) {
  if (n_partitions < 1) throw ConfigError("n_partitions must be >= 1");
  if (!(angle >= 0.0 && angle < kTwoPi))
    throw DomainError("assign_partition: angle " + std::to_string(angle) + " outside [0, 2pi)");
  const auto n = static_cast<std::size_t>(n_partitions);
  auto index = std::min(static_cast<std::size_t>(angle / kTwoPi * static_cast<double>(n)), n - 1);
  // Snap to the exact edges so boundary angles agree with interval tests.
  while (index > 0 && angle < partition_edge(index, n_partitions)) --index;
  while (index + 1 < n && angle >= partition_edge(index + 1, n_partitions)) ++index;
  return static_cast<int>(index) + 1;
}

/// Angle pairs [lower, upper) for each partition.
inline std::vector<std::pair<double, double>> partition_boundaries(int n_partitions) {
  std::vector<std::pair<double, double>> out;
  for (int n = 0; n < n_partitions; ++n)
    out.emplace_back(partition_edge(static_cast<std::size_t>(n), n_partitions),
                     partition_edge(static_cast<std::size_t>(n + 1), n_partitions));
  return out;
}

namespace detail {

inline double factor_value(Factor f, const Polyline& member, Vec2 target_last, double elapsed, bool self) {
  const Vec2 displacement = member.back() - member.front();
  switch (f) {
    case Factor::velocity: return elapsed > 0.0 ? norm(displacement) / elapsed : 0.0;
    case Factor::distance: return self ? 0.0 : norm(member.back() - target_last);
    case Factor::direction: return self ? 0.0 : relative_angle(target_last, member.back());
    case Factor::movement_direction: return relative_angle(Vec2{}, displacement);
  }
  return 0.0;
}

}  // namespace detail

/// Per-partition mean meta factors of a case's neighbors plus the
/// self-neighbor in partition 1.
inline MetaMatrix compute_meta(const PredictionCase& c, const PartitionConfig& config) {
  config.validate();
  if (c.t_h() != static_cast<std::size_t>(config.t_h))
    throw ConfigError("compute_meta: case has " + std::to_string(c.t_h()) + " observed steps, config expects " +
                      std::to_string(config.t_h));

  MetaMatrix meta;
  meta.n_partitions = static_cast<std::size_t>(config.n_partitions);
  meta.factors = config.factors.ordered();
  meta.values.assign(meta.n_partitions * meta.n_factors(), 0.0);
  meta.counts.assign(meta.n_partitions, 0);

  const Vec2 target_last = c.last_observed();
  const double elapsed = static_cast<double>(config.t_h - 1) * config.dt;

  auto accumulate = [&](std::size_t partition, const Polyline& member, bool self) {
    ++meta.counts[partition];
    for (std::size_t f = 0; f < meta.n_factors(); ++f)
      meta.at(partition, f) += detail::factor_value(meta.factors[f], member, target_last, elapsed, self);
  };

  accumulate(0, c.target_observed, true);
  for (const auto& n : c.neighbors) {
    if (n.observed.size() != c.t_h())
      throw DataError("compute_meta: neighbor '" + n.agent_id + "' window length differs from t_h");
    const int partition = assign_partition(relative_angle(target_last, n.observed.back()), config.n_partitions);
    accumulate(static_cast<std::size_t>(partition - 1), n.observed, false);
  }

  for (std::size_t p = 0; p < meta.n_partitions; ++p)
    if (meta.counts[p] > 0)
      for (std::size_t f = 0; f < meta.n_factors(); ++f) meta.at(p, f) /= static_cast<double>(meta.counts[p]);
  return meta;
}

/// Extends an N x w matrix to t_h rows with exact zeros.
inline Tensor zero_pad(const Tensor& rows, int t_h) {
  if (t_h < 1 || rows.rows() > static_cast<std::size_t>(t_h))
    throw ConfigError("zero_pad: " + std::to_string(rows.rows()) + " partition rows exceed t_h " + std::to_string(t_h));
  return pad_rows(rows, static_cast<std::size_t>(t_h));
}

/// Squared-sum magnitude of every partition's feature row, and its share of
/// the total over the scene.
inline AttentionProfile attention_scores(const Tensor& partition_rows) {
  const std::size_t rows = partition_rows.rows(), cols = partition_rows.cols();
  AttentionProfile profile;
  profile.raw.assign(rows, 0.0);
  profile.normalized.assign(rows, 0.0);
  auto data = partition_rows.data();
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < cols; ++j) profile.raw[r] += data[r * cols + j] * data[r * cols + j];
    total += profile.raw[r];
  }
  if (total > 0.0)
    for (std::size_t r = 0; r < rows; ++r) profile.normalized[r] = profile.raw[r] / total;
  return profile;
}

/// Linear interpolation from `start` to `end` over `t_h` steps.
inline Polyline interpolate_manual_track(Vec2 start, Vec2 end, std::size_t t_h) {
  Polyline line;
  line.reserve(t_h);
  for (std::size_t k = 0; k < t_h; ++k) {
    const double s = t_h > 1 ? static_cast<double>(k) / static_cast<double>(t_h - 1) : 0.0;
    line.push_back(start + s * (end - start));
  }
  return line;
}

/// Adds a synthetic neighbor walking in a straight line from `start` to `end`
/// over the observed window, then re-applies the neighbor cap.
inline PredictionCase inject_manual_neighbor(const PredictionCase& c, Vec2 start, Vec2 end, int cap = 50) {
  if (!std::isfinite(start.x) || !std::isfinite(start.y) || !std::isfinite(end.x) || !std::isfinite(end.y))
    throw DomainError("inject_manual_neighbor: non-finite endpoint");
  PredictionCase out = c;
  std::size_t ordinal = 0;
  std::size_t manual_count = 0;
  for (const auto& n : c.neighbors) {
    ordinal = std::max(ordinal, n.ordinal + 1);
    manual_count += n.manual ? 1 : 0;
  }
  // Manual neighbors rank after every real agent on distance ties.
  ordinal = std::max(ordinal, std::size_t{1} << 40) + manual_count;
  out.neighbors.push_back(
      Neighbor{"manual-" + std::to_string(manual_count + 1), ordinal, true, interpolate_manual_track(start, end, c.t_h())});
  return select_neighbors(out, cap);
}

}  // namespace socialcircle
