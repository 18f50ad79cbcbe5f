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
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chairsense/telemetry.hpp"

namespace chairsense::gamelog {

enum class EventKind : std::uint8_t { Kill, Death, Shot };

std::string_view to_string(EventKind kind) noexcept;

struct GameEvent {
  double t = 0.0;  ///< seconds, same clock as the player's telemetry
  EventKind kind = EventKind::Shot;

  bool operator==(const GameEvent&) const = default;
};

/// Canonical event log: one `t,kind` per line, kind in {kill, death, shot};
/// blank lines and lines starting with '#' are ignored. Result is stably
/// sorted by time. Throws ParseError with the 1-based line number.
std::vector<GameEvent> parse_event_log(std::string_view text);
std::string format_event_log(std::span<const GameEvent> events);

/// Times of all events of one kind, in input order.
std::vector<double> event_times(std::span<const GameEvent> events, EventKind kind);

/// A firefight: a maximal run of closely spaced shots, spanning [start, end].
struct ShootoutInterval {
  double start = 0.0;  ///< first shot
  double end = 0.0;    ///< last shot
  int shot_count = 0;

  bool operator==(const ShootoutInterval&) const = default;
};

/// Maximal runs of consecutive shots with gaps strictly below `max_gap`
/// and at least `min_shots` shots. `shots` must be ascending.
std::vector<ShootoutInterval> detect_shootouts(std::span<const double> shots, int min_shots = 3,
                                               double max_gap = 3.0);

struct PlayerMeta {
  std::string player_id;
  bool exp_gt_1000h = false;  ///< classification target
  double age = 0.0;
  int gender = 0;  ///< 0 woman, 1 man

  bool operator==(const PlayerMeta&) const = default;
};

/// Accepts a JSON array of player objects, a single object, or one object per line.
std::vector<PlayerMeta> parse_player_meta(std::string_view text);
std::string serialize_player_meta(std::span<const PlayerMeta> players);

struct KdrPolicy {
  double cap = 10.0;             ///< value used when the player never died
  double no_activity_value = 0;  ///< kills == deaths == 0
};

/// kills / deaths, bounded by `policy.cap`.
double session_kdr(std::span<const GameEvent> events, const KdrPolicy& policy = {});

struct SessionOptions {
  double session_length = 180.0;
  std::size_t max_sessions = 10;
};

/// A fixed-length labeled slice of one player's telemetry. Samples are a view
/// into the shared, immutable source stream.
struct Session {
  std::string player_id;
  std::size_t index = 0;  ///< position within the player's sessions
  double start = 0.0;
  double duration = 180.0;
  std::shared_ptr<const ingest::TelemetryStream> source;
  std::size_t first_sample = 0;
  std::size_t sample_count = 0;
  std::vector<GameEvent> events;                ///< clipped to [start, start + duration)
  std::vector<ShootoutInterval> shootouts;      ///< clipped likewise
  double kdr = 0.0;
  bool label = false;
  double age = 0.0;
  int gender = 0;

  double end() const noexcept { return start + duration; }
  double nominal_rate() const noexcept { return source ? source->nominal_rate : 100.0; }
  std::span<const ingest::SensorSample> samples() const noexcept {
    if (!source) return {};
    return std::span<const ingest::SensorSample>(source->samples)
        .subspan(first_sample, sample_count);
  }
};

/// Cuts consecutive, non-overlapping windows of `session_length` seconds
/// starting at the first sample. A window is emitted only when the stream
/// covers it completely (the last sample is taken to cover one sampling
/// period). Shootouts straddling a boundary are clipped and kept if the
/// clipped part still holds a shot; their shot_count is then the number of
/// shots inside the window.
std::vector<Session> segment_sessions(std::shared_ptr<const ingest::TelemetryStream> stream,
                                      std::span<const GameEvent> events,
                                      std::span<const ShootoutInterval> shootouts,
                                      const PlayerMeta& meta, const SessionOptions& options = {},
                                      const KdrPolicy& kdr_policy = {});

/// Shootout detection on the player's shots followed by segment_sessions.
std::vector<Session> build_sessions(std::shared_ptr<const ingest::TelemetryStream> stream,
                                    std::span<const GameEvent> events, const PlayerMeta& meta,
                                    const SessionOptions& options = {}, const KdrPolicy& kdr_policy = {});

}  // namespace chairsense::gamelog
