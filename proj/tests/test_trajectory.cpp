// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "socialcircle/trajectory.hpp"

using namespace socialcircle;

namespace {

AgentTrack track(const std::string& id, long first, int n, Vec2 start = {}, Vec2 step = {1.0, 0.0}) {
  AgentTrack t{id, {}, UnitTag::meters};
  for (int k = 0; k < n; ++k) t.samples.push_back({first + k, start + static_cast<double>(k) * step});
  return t;
}

PredictionCase case_with_neighbors(const std::vector<Vec2>& finals) {
  PredictionCase c;
  c.target_observed = Polyline(8, Vec2{0.0, 0.0});
  for (std::size_t j = 0; j < finals.size(); ++j)
    c.neighbors.push_back({"n" + std::to_string(j), j, false, Polyline(8, finals[j])});
  return c;
}

}  // namespace

TEST(Parse, TwoSamplesOneAgent) {
  const auto tracks = parse_trajectory_text("0 1 0.0 0.0\n10 1 1.0 0.0");
  ASSERT_EQ(tracks.size(), 1u);
  EXPECT_EQ(tracks[0].agent_id, "1");
  ASSERT_EQ(tracks[0].samples.size(), 2u);
  EXPECT_EQ(tracks[0].samples[1].frame, 10);
  EXPECT_EQ(tracks[0].samples[1].position, (Vec2{1.0, 0.0}));
}

TEST(Parse, EmptyInput) { EXPECT_TRUE(parse_trajectory_text("").empty()); }

TEST(Parse, NanCoordinateRejectedWithLine) {
  try {
    parse_trajectory_text("0 1 0.0 nan");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Parse, CommentsTabsAndSorting) {
  const auto tracks = parse_trajectory_text("# header\n20\t7\t2.0\t0.5\n\n10  7   1.0 0.25\n  # indented comment\n10 8 3 4\n");
  ASSERT_EQ(tracks.size(), 2u);
  EXPECT_EQ(tracks[0].samples.front().frame, 10);
  EXPECT_EQ(tracks[0].samples.back().position, (Vec2{2.0, 0.5}));
  EXPECT_EQ(tracks[1].agent_id, "8");
}

TEST(Parse, MalformedLinesCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_trajectory_text(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("0 1 0 0\n1 1 0\n"), 2u);
  EXPECT_EQ(line_of("0 1 0 0\n# c\n1 1 x 0\n"), 3u);
  EXPECT_EQ(line_of("0.5 1 0 0\n"), 1u);
  EXPECT_EQ(line_of("0 1 0 0\n0 1 1 1\n"), 2u);
  EXPECT_EQ(line_of("0 1 inf 0\n"), 1u);
}

TEST(Parse, EthStyleFloatFrames) {
  const auto tracks = parse_trajectory_text("780.0\t1.0\t8.46\t3.59\n790.0\t1.0\t9.57\t3.79\n");
  ASSERT_EQ(tracks.size(), 1u);
  EXPECT_EQ(tracks[0].samples[1].frame, 790);
}

TEST(Windows, ExactLengthAgentGivesOneCase) {
  const auto cases = build_windows({track("a", 0, 20)}, 8, 12, 1);
  ASSERT_EQ(cases.size(), 1u);
  EXPECT_TRUE(cases[0].neighbors.empty());
  EXPECT_EQ(cases[0].target_observed.size(), 8u);
  EXPECT_EQ(cases[0].target_future->size(), 12u);
  EXPECT_EQ(cases[0].target_future->front(), (Vec2{8.0, 0.0}));
}

TEST(Windows, CoPresentPairGivesTwoCasesWithOneNeighborEach) {
  const auto cases = build_windows({track("a", 0, 20), track("b", 0, 20, {0, 5})}, 8, 12, 1);
  ASSERT_EQ(cases.size(), 2u);
  for (const auto& c : cases) EXPECT_EQ(c.neighbors.size(), 1u);
}

TEST(Windows, ShortAgentGivesNoCase) { EXPECT_TRUE(build_windows({track("a", 0, 19)}, 8, 12, 1).empty()); }

TEST(Windows, PartialNeighborsDropped) {
  // b is present for only 5 of the 8 observed steps.
  const auto cases = build_windows({track("a", 0, 20), track("b", 3, 10)}, 8, 12, 1);
  ASSERT_EQ(cases.size(), 1u);
  EXPECT_TRUE(cases[0].neighbors.empty());
}

TEST(Windows, StrideSkipsStarts) {
  EXPECT_EQ(build_windows({track("a", 0, 30)}, 8, 12, 1).size(), 11u);
  EXPECT_EQ(build_windows({track("a", 0, 30)}, 8, 12, 5).size(), 3u);
}

TEST(Windows, CountMatchesRunLengthFormulaWithGaps) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<AgentTrack> tracks;
    long expected = 0;
    const int agents = 1 + static_cast<int>(rng() % 5);
    for (int a = 0; a < agents; ++a) {
      AgentTrack t{"a" + std::to_string(a), {}, UnitTag::meters};
      long frame = 0;
      while (frame < 120) {
        const long run = static_cast<long>(rng() % 40);
        for (long k = 0; k < run && frame < 120; ++k, ++frame) t.samples.push_back({frame, {0.0, 0.0}});
        frame += 1 + static_cast<long>(rng() % 3);
      }
      // Runs of consecutive frames.
      std::size_t i = 0;
      while (i < t.samples.size()) {
        std::size_t j = i + 1;
        while (j < t.samples.size() && t.samples[j].frame == t.samples[j - 1].frame + 1) ++j;
        expected += std::max(0L, static_cast<long>(j - i) - 20 + 1);
        i = j;
      }
      if (!t.samples.empty()) tracks.push_back(std::move(t));
    }
    // An always-present filler agent keeps every frame on the timeline so
    // timeline gaps coincide with per-agent gaps.
    AgentTrack filler{"filler", {}, UnitTag::meters};
    for (long f = 0; f < 125; ++f) filler.samples.push_back({f, {100.0, 100.0}});
    expected += 125 - 20 + 1;
    tracks.push_back(filler);
    EXPECT_EQ(static_cast<long>(build_windows(tracks, 8, 12, 1).size()), expected);
  }
}

TEST(Windows, InvalidParameters) {
  EXPECT_THROW(build_windows({}, 0, 12, 1), ConfigError);
  EXPECT_THROW(build_windows({}, 8, 12, 0), ConfigError);
}

TEST(Normalize, ShiftsToOrigin) {
  PredictionCase c;
  c.target_observed = {{1, 1}, {3, 4}};
  c.target_future = Polyline{{4, 5}};
  c.neighbors.push_back({"n", 1, false, {{0, 0}, {5, 4}}});
  auto [n, transform] = normalize_case(c);
  EXPECT_EQ(transform.offset, (Vec2{3, 4}));
  EXPECT_EQ(n.target_observed.back(), (Vec2{0, 0}));
  EXPECT_EQ(n.target_observed.front(), (Vec2{-2, -3}));
  EXPECT_EQ(n.target_future->front(), (Vec2{1, 1}));
  EXPECT_EQ(n.neighbors[0].observed.back(), (Vec2{2, 0}));
}

TEST(Normalize, OriginIsIdentity) {
  PredictionCase c;
  c.target_observed = {{1, 1}, {0, 0}};
  auto [n, transform] = normalize_case(c);
  EXPECT_EQ(transform.offset, (Vec2{0, 0}));
  EXPECT_EQ(n.target_observed, c.target_observed);
}

TEST(Normalize, RoundTripWithinTolerance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const PredictionCase c = oracle::random_case(rng, 3);
    auto [n, transform] = normalize_case(c);
    const Polyline back = transform.invert(*n.target_future);
    for (std::size_t t = 0; t < back.size(); ++t) {
      EXPECT_NEAR(back[t].x, (*c.target_future)[t].x, 1e-9);
      EXPECT_NEAR(back[t].y, (*c.target_future)[t].y, 1e-9);
    }
  }
}

TEST(Normalize, TranslatedSceneNormalizesIdentically) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const PredictionCase c = oracle::random_case(rng, 4);
    const Vec2 delta{shift(rng), shift(rng)};
    PredictionCase moved = c;
    for (auto& p : moved.target_observed) p = p + delta;
    for (auto& p : *moved.target_future) p = p + delta;
    for (auto& n : moved.neighbors)
      for (auto& p : n.observed) p = p + delta;
    const auto a = normalize_case(c).first;
    const auto b = normalize_case(moved).first;
    for (std::size_t t = 0; t < a.target_observed.size(); ++t) {
      EXPECT_NEAR(a.target_observed[t].x, b.target_observed[t].x, 1e-9);
      EXPECT_NEAR(a.target_observed[t].y, b.target_observed[t].y, 1e-9);
    }
    for (std::size_t j = 0; j < a.neighbors.size(); ++j)
      for (std::size_t t = 0; t < 8; ++t) {
        EXPECT_NEAR(a.neighbors[j].observed[t].x, b.neighbors[j].observed[t].x, 1e-9);
        EXPECT_NEAR(a.neighbors[j].observed[t].y, b.neighbors[j].observed[t].y, 1e-9);
      }
  }
}

TEST(SelectNeighbors, UnderCapKeepsAll) {
  EXPECT_EQ(select_neighbors(case_with_neighbors({{1, 0}, {2, 0}, {3, 0}}), 50).neighbors.size(), 3u);
}

TEST(SelectNeighbors, CapZeroDropsAll) {
  EXPECT_TRUE(select_neighbors(case_with_neighbors({{1, 0}, {2, 0}}), 0).neighbors.empty());
}

TEST(SelectNeighbors, SixtyToFiftyMatchesSortOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * oracle::kPi);
  std::vector<double> radii(60);
  for (int j = 0; j < 60; ++j) radii[j] = 0.5 + 0.1 * j;
  std::shuffle(radii.begin(), radii.end(), rng);
  std::vector<Vec2> finals;
  for (double r : radii) {
    const double a = angle(rng);
    finals.push_back({r * std::cos(a), r * std::sin(a)});
  }
  const auto kept = select_neighbors(case_with_neighbors(finals), 50);

  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  sorted.resize(50);
  std::vector<double> got;
  for (const auto& n : kept.neighbors) got.push_back(std::hypot(n.observed.back().x, n.observed.back().y));
  std::sort(got.begin(), got.end());
  ASSERT_EQ(got.size(), 50u);
  for (int j = 0; j < 50; ++j) EXPECT_NEAR(got[j], sorted[j], 1e-12);
}

TEST(SelectNeighbors, TieBreakByOrdinal) {
  auto c = case_with_neighbors({{0, 2}, {2, 0}, {-2, 0}});
  const auto kept = select_neighbors(c, 2);
  ASSERT_EQ(kept.neighbors.size(), 2u);
  EXPECT_EQ(kept.neighbors[0].ordinal, 0u);
  EXPECT_EQ(kept.neighbors[1].ordinal, 1u);
}

TEST(SelectNeighbors, IdempotentAndPermutationInsensitive) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    PredictionCase c = oracle::random_case(rng, 30);
    // Force some exact ties.
    c.neighbors[3].observed = c.neighbors[4].observed;
    const auto once = select_neighbors(c, 10);
    const auto twice = select_neighbors(once, 10);
    PredictionCase shuffled = c;
    std::shuffle(shuffled.neighbors.begin(), shuffled.neighbors.end(), rng);
    const auto from_shuffled = select_neighbors(shuffled, 10);
    ASSERT_EQ(once.neighbors.size(), 10u);
    for (std::size_t j = 0; j < 10; ++j) {
      EXPECT_EQ(once.neighbors[j].ordinal, twice.neighbors[j].ordinal);
      EXPECT_EQ(once.neighbors[j].ordinal, from_shuffled.neighbors[j].ordinal);
    }
  }
}
