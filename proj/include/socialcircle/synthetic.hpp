// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic scenes for smoke tests and small controlled experiments. Each
// generated segment occupies its own block of frames, so agents from
// different segments are never co-present.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "socialcircle/trajectory.hpp"

namespace socialcircle::synthetic {

inline constexpr long kSegmentFrames = 100;

/// `n_agents` agents walking in straight lines at constant speed, each for
/// exactly `steps` samples of `dt` seconds.
inline std::vector<AgentTrack> linear_motion_scene(int n_agents, std::uint64_t seed, int steps = 20, double dt = 0.4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> origin(-5.0, 5.0), heading(0.0, 2.0 * std::numbers::pi), speed(0.5, 1.5);
  std::vector<AgentTrack> tracks;
  for (int i = 0; i < n_agents; ++i) {
    const Vec2 start{origin(rng), origin(rng)};
    const double h = heading(rng), v = speed(rng) * dt;
    const Vec2 step{v * std::cos(h), v * std::sin(h)};
    AgentTrack track{"a" + std::to_string(i), {}, UnitTag::meters};
    for (int k = 0; k < steps; ++k)
      track.samples.push_back({i * kSegmentFrames + k, start + static_cast<double>(k) * step});
    tracks.push_back(std::move(track));
  }
  return tracks;
}

/// Segments in which a target walks along +x while a neighbor converges on
/// its path from the front-left or front-right. Over the future window the
/// target sidesteps away from the neighbor's side, more strongly when the
/// neighbor is close. The target's own history carries no hint of the side.
inline std::vector<AgentTrack> avoidance_scene(int n_segments, std::uint64_t seed, int t_h = 8, int t_f = 12,
                                               double dt = 0.4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  constexpr double kDeg = std::numbers::pi / 180.0;

  std::vector<AgentTrack> tracks;
  for (int i = 0; i < n_segments; ++i) {
    const Vec2 origin{between(-10.0, 10.0), between(-10.0, 10.0)};
    const double step = between(1.0, 1.4) * dt;
    const double side = unit(rng) < 0.5 ? 1.0 : -1.0;
    const double bearing = side * between(25.0, 70.0) * kDeg;
    const double range = between(1.5, 3.0);
    const double neighbor_step = between(0.8, 1.4) * dt;
    const double sidestep = 0.4 + 0.9 * (3.5 - range) / 2.0;

    const Vec2 neighbor_last{range * std::cos(bearing), range * std::sin(bearing)};
    const Vec2 aim{5.0 * step, 0.0};
    const Vec2 to_aim = aim - neighbor_last;
    const Vec2 heading = (1.0 / norm(to_aim)) * to_aim;

    const long base = i * kSegmentFrames;
    AgentTrack target{"t" + std::to_string(i), {}, UnitTag::meters};
    AgentTrack neighbor{"n" + std::to_string(i), {}, UnitTag::meters};
    for (int k = 0; k < t_h; ++k) {
      const double back = static_cast<double>(t_h - 1 - k);
      target.samples.push_back({base + k, origin + Vec2{-back * step, 0.0}});
      neighbor.samples.push_back({base + k, origin + neighbor_last - (back * neighbor_step) * heading});
    }
    for (int k = 1; k <= t_f; ++k) {
      const double progress = static_cast<double>(k) / static_cast<double>(t_f);
      const double lateral = -side * sidestep * 0.5 * (1.0 - std::cos(std::numbers::pi * progress));
      target.samples.push_back({base + t_h - 1 + k, origin + Vec2{k * step, lateral}});
    }
    tracks.push_back(std::move(target));
    tracks.push_back(std::move(neighbor));
  }
  return tracks;
}

}  // namespace socialcircle::synthetic
