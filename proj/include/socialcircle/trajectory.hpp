// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Trajectory ingestion and prediction-case construction.
//
// Input files hold one sample per line: `frame agent_id x y`, separated by
// runs of spaces or tabs, with '#' comment lines. Consecutive distinct frames
// in a scene are treated as consecutive model steps; no resampling happens
// here.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

#include "socialcircle/errors.hpp"

namespace socialcircle {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

using Polyline = std::vector<Vec2>;

enum class UnitTag { meters, pixels };

inline std::string to_string(UnitTag unit) { return unit == UnitTag::meters ? "meters" : "pixels"; }

inline UnitTag parse_unit(std::string_view text) {
  if (text == "meters") return UnitTag::meters;
  if (text == "pixels") return UnitTag::pixels;
  throw ConfigError("unknown unit '" + std::string(text) + "' (expected meters or pixels)");
}

struct Sample {
  long frame = 0;
  Vec2 position;
};

struct AgentTrack {
  std::string agent_id;
  std::vector<Sample> samples;
  UnitTag unit = UnitTag::meters;
};

struct Neighbor {
  std::string agent_id;
  /// Position of the agent in its scene's track list; manual neighbors are
  /// numbered after every real agent.
  std::size_t ordinal = 0;
  bool manual = false;
  Polyline observed;
};

struct PredictionCase {
  Polyline target_observed;
  std::optional<Polyline> target_future;
  std::vector<Neighbor> neighbors;
  std::string scene_id;
  std::string case_id;
  UnitTag unit = UnitTag::meters;

  std::size_t t_h() const { return target_observed.size(); }
  Vec2 last_observed() const { return target_observed.back(); }
};

/// Offset that moves a case's last observed target position to the origin.
struct NormalizationTransform {
  Vec2 offset;

  Vec2 apply(Vec2 p) const { return p - offset; }
  Vec2 invert(Vec2 p) const { return p + offset; }
  Polyline apply(const Polyline& line) const { return map(line, -1.0); }
  Polyline invert(const Polyline& line) const { return map(line, 1.0); }

 private:
  Polyline map(const Polyline& line, double sign) const {
    Polyline out;
    out.reserve(line.size());
    for (auto p : line) out.push_back(p + sign * offset);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::optional<double> parse_real(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

}  // namespace detail

/// Reads `frame agent_id x y` lines into one track per agent, in order of
/// first appearance, with samples sorted by frame.
inline std::vector<AgentTrack> parse_trajectory_file(std::istream& in, UnitTag unit = UnitTag::meters) {
  std::vector<AgentTrack> tracks;
  std::unordered_map<std::string, std::size_t> index;
  std::unordered_map<std::string, std::vector<std::size_t>> lines_of;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string frame_tok, id_tok, x_tok, y_tok;
    if (!(fields >> frame_tok >> id_tok >> x_tok >> y_tok))
      throw ParseError(line_no, "expected at least 4 fields: frame agent_id x y");

    const auto frame = detail::parse_real(frame_tok);
    if (!frame || !std::isfinite(*frame) || *frame != std::floor(*frame))
      throw ParseError(line_no, "frame '" + frame_tok + "' is not an integer");
    const auto x = detail::parse_real(x_tok);
    const auto y = detail::parse_real(y_tok);
    if (!x || !y) throw ParseError(line_no, "coordinates '" + x_tok + " " + y_tok + "' are not numbers");
    if (!std::isfinite(*x) || !std::isfinite(*y)) throw ParseError(line_no, "non-finite coordinate");

    auto [it, inserted] = index.try_emplace(id_tok, tracks.size());
    if (inserted) tracks.push_back(AgentTrack{id_tok, {}, unit});
    tracks[it->second].samples.push_back(Sample{static_cast<long>(*frame), Vec2{*x, *y}});
    lines_of[id_tok].push_back(line_no);
  }

  for (auto& track : tracks) {
    const auto& lines = lines_of[track.agent_id];
    std::vector<std::size_t> order(track.samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return track.samples[a].frame < track.samples[b].frame; });
    std::vector<Sample> sorted;
    sorted.reserve(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k > 0 && track.samples[order[k]].frame == sorted.back().frame)
        throw ParseError(lines[order[k]], "duplicate frame " + std::to_string(sorted.back().frame) + " for agent '" +
                                              track.agent_id + "'");
      sorted.push_back(track.samples[order[k]]);
    }
    track.samples = std::move(sorted);
  }
  return tracks;
}

inline std::vector<AgentTrack> parse_trajectory_text(const std::string& text, UnitTag unit = UnitTag::meters) {
  std::istringstream in(text);
  return parse_trajectory_file(in, unit);
}

/// Writes tracks back in the `frame agent_id x y` text format.
inline void write_trajectory_file(std::ostream& out, const std::vector<AgentTrack>& tracks) {
  std::vector<std::pair<long, std::pair<std::size_t, std::size_t>>> rows;
  for (std::size_t a = 0; a < tracks.size(); ++a)
    for (std::size_t k = 0; k < tracks[a].samples.size(); ++k) rows.push_back({tracks[a].samples[k].frame, {a, k}});
  std::stable_sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  const auto precision = out.precision(17);
  for (const auto& [frame, ref] : rows) {
    const auto& s = tracks[ref.first].samples[ref.second];
    out << frame << '\t' << tracks[ref.first].agent_id << '\t' << s.position.x << '\t' << s.position.y << '\n';
  }
  out.precision(precision);
}

// ---------------------------------------------------------------------------
// Windowing

/// Cuts every track into prediction cases of `t_h` observed and `t_f` future
/// steps. Window starts lie on the scene's frame timeline at multiples of
/// `stride`. Neighbors are the other agents present at every observed step.
inline std::vector<PredictionCase> build_windows(const std::vector<AgentTrack>& tracks, int t_h, int t_f,
                                                 int stride = 1, const std::string& scene_id = "scene") {
  if (t_h < 1 || t_f < 1 || stride < 1) throw ConfigError("build_windows: t_h, t_f and stride must be >= 1");

  std::vector<long> timeline;
  for (const auto& track : tracks)
    for (const auto& s : track.samples) timeline.push_back(s.frame);
  std::sort(timeline.begin(), timeline.end());
  timeline.erase(std::unique(timeline.begin(), timeline.end()), timeline.end());
  const std::size_t steps = timeline.size();

  // presence[a][t] = sample index of agent a at timeline step t.
  std::vector<std::vector<std::optional<std::size_t>>> presence(tracks.size(), std::vector<std::optional<std::size_t>>(steps));
  for (std::size_t a = 0; a < tracks.size(); ++a)
    for (std::size_t k = 0; k < tracks[a].samples.size(); ++k) {
      const auto t = std::lower_bound(timeline.begin(), timeline.end(), tracks[a].samples[k].frame) - timeline.begin();
      presence[a][static_cast<std::size_t>(t)] = k;
    }

  auto present_over = [&](std::size_t a, std::size_t begin, std::size_t len) {
    for (std::size_t t = begin; t < begin + len; ++t)
      if (!presence[a][t]) return false;
    return true;
  };
  auto positions = [&](std::size_t a, std::size_t begin, std::size_t len) {
    Polyline line;
    line.reserve(len);
    for (std::size_t t = begin; t < begin + len; ++t) line.push_back(tracks[a].samples[*presence[a][t]].position);
    return line;
  };

  const std::size_t obs = static_cast<std::size_t>(t_h), fut = static_cast<std::size_t>(t_f);
  std::vector<PredictionCase> cases;
  if (steps < obs + fut) return cases;
  for (std::size_t a = 0; a < tracks.size(); ++a) {
    for (std::size_t start = 0; start + obs + fut <= steps; start += static_cast<std::size_t>(stride)) {
      if (!present_over(a, start, obs + fut)) continue;
      PredictionCase c;
      c.scene_id = scene_id;
      c.case_id = scene_id + ":" + tracks[a].agent_id + ":" + std::to_string(timeline[start]);
      c.unit = tracks[a].unit;
      c.target_observed = positions(a, start, obs);
      c.target_future = positions(a, start + obs, fut);
      for (std::size_t b = 0; b < tracks.size(); ++b) {
        if (b == a || !present_over(b, start, obs)) continue;
        c.neighbors.push_back(Neighbor{tracks[b].agent_id, b, false, positions(b, start, obs)});
      }
      cases.push_back(std::move(c));
    }
  }
  return cases;
}

// ---------------------------------------------------------------------------
// Case transforms

/// Translates the case so the target's last observed position is the origin.
inline std::pair<PredictionCase, NormalizationTransform> normalize_case(const PredictionCase& c) {
  NormalizationTransform transform{c.last_observed()};
  PredictionCase out = c;
  out.target_observed = transform.apply(c.target_observed);
  if (c.target_future) out.target_future = transform.apply(*c.target_future);
  for (auto& n : out.neighbors) n.observed = transform.apply(n.observed);
  return {std::move(out), transform};
}

/// Keeps the `cap` neighbors closest to the target at the last observed step,
/// breaking distance ties by agent ordinal.
inline PredictionCase select_neighbors(const PredictionCase& c, int cap = 50) {
  if (cap < 0) throw ConfigError("select_neighbors: cap must be >= 0");
  PredictionCase out = c;
  const Vec2 target = c.last_observed();
  std::vector<std::pair<double, const Neighbor*>> ranked;
  ranked.reserve(c.neighbors.size());
  for (const auto& n : c.neighbors) ranked.emplace_back(norm(n.observed.back() - target), &n);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->ordinal < b.second->ordinal;
  });
  const std::size_t keep = std::min(ranked.size(), static_cast<std::size_t>(cap));
  out.neighbors.clear();
  for (std::size_t i = 0; i < keep; ++i) out.neighbors.push_back(*ranked[i].second);
  return out;
}

/// Normalized, neighbor-capped copy of a case plus the transform back to the
/// scene frame.
inline std::pair<PredictionCase, NormalizationTransform> prepare_case(const PredictionCase& c, int cap) {
  return normalize_case(select_neighbors(c, cap));
}

}  // namespace socialcircle
