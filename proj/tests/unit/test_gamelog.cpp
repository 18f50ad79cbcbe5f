// Copyright 2026 The chairsense Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <chairsense/error.hpp>
#include <chairsense/gamelog.hpp>
#include <gtest/gtest.h>

#include <random>

#include "oracles/shootout_oracle.hpp"
#include "support/helpers.hpp"

using namespace chairsense;
using namespace chairsense::gamelog;

namespace {

std::shared_ptr<const ingest::TelemetryStream> stream_of_seconds(double seconds, double rate = 100.0) {
  return std::make_shared<const ingest::TelemetryStream>(
      testing_support::random_stream("p1", static_cast<std::size_t>(seconds * rate), 1, rate));
}

PlayerMeta meta_for(bool label) { return {"p1", label, 24.0, 1}; }

}  // namespace

TEST(EventLog, ParsesAndSorts) {
  const auto events = parse_event_log("1.5,shot\n2.0,kill");
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0], (GameEvent{1.5, EventKind::Shot}));
  EXPECT_EQ(events[1], (GameEvent{2.0, EventKind::Kill}));

  const auto sorted = parse_event_log("# header\n5,death\n\n1,shot\n5,kill\n");
  ASSERT_EQ(sorted.size(), 3u);
  EXPECT_EQ(sorted[0].kind, EventKind::Shot);
  EXPECT_EQ(sorted[1].kind, EventKind::Death);  // stable for equal times
  EXPECT_EQ(sorted[2].kind, EventKind::Kill);
}

TEST(EventLog, EmptyInput) { EXPECT_TRUE(parse_event_log("").empty()); }

TEST(EventLog, UnknownKindReportsLine) {
  try {
    parse_event_log("3.0,frag");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_event_log("1,shot\nabc,kill\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(EventLog, FormatRoundTrip) {
  const std::vector<GameEvent> events{{0.1, EventKind::Shot}, {0.30000000000000004, EventKind::Kill},
                                      {7.25, EventKind::Death}};
  EXPECT_EQ(parse_event_log(format_event_log(events)), events);
}

TEST(Shootouts, MinimalRun) {
  const std::vector<double> shots{0, 1, 2};
  EXPECT_EQ(detect_shootouts(shots), (std::vector<ShootoutInterval>{{0, 2, 3}}));
}

TEST(Shootouts, ShortRunIgnored) {
  const std::vector<double> shots{0, 1, 5, 6, 7.5};
  EXPECT_EQ(detect_shootouts(shots), (std::vector<ShootoutInterval>{{5, 7.5, 3}}));
}

TEST(Shootouts, GapsAtThresholdBreakRuns) {
  const std::vector<double> shots{0, 4, 8};
  EXPECT_TRUE(detect_shootouts(shots).empty());
  const std::vector<double> exact{0, 3, 6};
  EXPECT_TRUE(detect_shootouts(exact).empty());
  EXPECT_TRUE(detect_shootouts(std::vector<double>{}).empty());
}

TEST(Shootouts, MatchesBruteForceRuns) {
  std::mt19937_64 rng(2024);
  std::exponential_distribution<double> gap(0.6);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> shots;
    double t = 0;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      t += gap(rng);
      shots.push_back(t);
    }
    const auto runs = oracle::shootout_runs(shots, 3, 3.0);
    const auto got = detect_shootouts(shots);
    ASSERT_EQ(got.size(), runs.size()) << "trial " << trial;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      EXPECT_EQ(got[r].start, shots[runs[r].first]);
      EXPECT_EQ(got[r].end, shots[runs[r].second]);
      EXPECT_EQ(got[r].shot_count, static_cast<int>(runs[r].second - runs[r].first + 1));
    }
  }
}

TEST(Kdr, BoundingRules) {
  auto events = [](int kills, int deaths) {
    std::vector<GameEvent> ev;
    for (int i = 0; i < kills; ++i) ev.push_back({static_cast<double>(i), EventKind::Kill});
    for (int i = 0; i < deaths; ++i) ev.push_back({static_cast<double>(i) + 0.5, EventKind::Death});
    return ev;
  };
  EXPECT_DOUBLE_EQ(session_kdr(events(5, 0)), 10.0);
  EXPECT_DOUBLE_EQ(session_kdr(events(3, 2)), 1.5);
  EXPECT_DOUBLE_EQ(session_kdr(events(0, 0)), 0.0);
  EXPECT_DOUBLE_EQ(session_kdr(events(40, 2)), 10.0);
  EXPECT_DOUBLE_EQ(session_kdr(events(0, 0), KdrPolicy{10.0, 1.0}), 1.0);
}

TEST(Sessions, ThirtyFiveMinutesCapsAtTen) {
  const auto sessions = segment_sessions(stream_of_seconds(35 * 60), {}, {}, meta_for(true));
  ASSERT_EQ(sessions.size(), 10u);
  for (std::size_t k = 0; k < sessions.size(); ++k) {
    EXPECT_DOUBLE_EQ(sessions[k].start, 180.0 * static_cast<double>(k));
    EXPECT_EQ(sessions[k].sample_count, 18000u);
    EXPECT_TRUE(sessions[k].label);
  }
}

TEST(Sessions, ShortStreams) {
  EXPECT_EQ(segment_sessions(stream_of_seconds(200), {}, {}, meta_for(false)).size(), 1u);
  EXPECT_EQ(segment_sessions(stream_of_seconds(100), {}, {}, meta_for(false)).size(), 0u);
  EXPECT_EQ(segment_sessions(stream_of_seconds(180), {}, {}, meta_for(false)).size(), 1u);
  EXPECT_EQ(segment_sessions(stream_of_seconds(1500), {}, {}, meta_for(false)).size(), 8u);
}

TEST(Sessions, DisjointPrefixAndClippedEvents) {
  const std::vector<GameEvent> events{{10, EventKind::Kill}, {179.99, EventKind::Death}, {180, EventKind::Kill},
                                      {200, EventKind::Death}, {365, EventKind::Kill}};
  const auto stream = stream_of_seconds(400);
  const auto sessions = segment_sessions(stream, events, {}, meta_for(true));
  ASSERT_EQ(sessions.size(), 2u);
  EXPECT_EQ(sessions[0].events.size(), 2u);
  EXPECT_DOUBLE_EQ(sessions[0].kdr, 1.0);
  EXPECT_EQ(sessions[1].events.size(), 2u);
  EXPECT_EQ(sessions[0].first_sample + sessions[0].sample_count, sessions[1].first_sample);
  for (const auto& s : sessions)
    for (const auto& ev : s.events) {
      EXPECT_GE(ev.t, s.start);
      EXPECT_LT(ev.t, s.end());
    }
}

TEST(Sessions, StraddlingShootoutIsClipped) {
  const std::vector<GameEvent> events{{178, EventKind::Shot}, {179.5, EventKind::Shot}, {181, EventKind::Shot},
                                      {182, EventKind::Shot}};
  const auto shots = event_times(events, EventKind::Shot);
  const auto shootouts = detect_shootouts(shots);
  ASSERT_EQ(shootouts.size(), 1u);
  const auto sessions = segment_sessions(stream_of_seconds(400), events, shootouts, meta_for(true));
  ASSERT_EQ(sessions.size(), 2u);
  ASSERT_EQ(sessions[0].shootouts.size(), 1u);
  EXPECT_EQ(sessions[0].shootouts[0], (ShootoutInterval{178, 180, 2}));
  ASSERT_EQ(sessions[1].shootouts.size(), 1u);
  EXPECT_EQ(sessions[1].shootouts[0], (ShootoutInterval{180, 182, 2}));
}

TEST(PlayerMeta, ParsesArrayObjectAndLines) {
  const auto arr = parse_player_meta(
      R"([{"player_id":"a","exp_gt_1000h":true,"age":30,"gender":1},{"player_id":"b","exp_gt_1000h":false,"age":21,"gender":0}])");
  ASSERT_EQ(arr.size(), 2u);
  EXPECT_EQ(arr[0], (PlayerMeta{"a", true, 30, 1}));
  const auto one = parse_player_meta(R"({"player_id":"c","exp_gt_1000h":false,"age":19,"gender":0})");
  ASSERT_EQ(one.size(), 1u);
  const auto lines = parse_player_meta(
      "{\"player_id\":\"d\",\"exp_gt_1000h\":true,\"age\":40,\"gender\":1}\n"
      "{\"player_id\":\"e\",\"exp_gt_1000h\":false,\"age\":41,\"gender\":0}\n");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(parse_player_meta(serialize_player_meta(arr)), arr);
  EXPECT_THROW(parse_player_meta(R"([{"player_id":"x","exp_gt_1000h":true,"age":0,"gender":1}])"), ValidationError);
}
