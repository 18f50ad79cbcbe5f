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
#include "chairsense/gamelog.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "chairsense/error.hpp"
#include "text.hpp"

namespace chairsense::gamelog {

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::Kill:
      return "kill";
    case EventKind::Death:
      return "death";
    case EventKind::Shot:
      return "shot";
  }
  return "?";
}

std::vector<GameEvent> parse_event_log(std::string_view text) {
  std::vector<GameEvent> events;
  std::size_t lineno = 0;
  for (std::string_view raw : text::split(text, '\n')) {
    ++lineno;
    const std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = text::split(line, ',');
    if (fields.size() != 2) throw ParseError("expected 't,kind'", lineno);
    const auto t = text::parse_double(fields[0]);
    if (!t || !std::isfinite(*t) || *t < 0.0) {
      throw ParseError("invalid time '" + std::string(text::trim(fields[0])) + "'", lineno);
    }
    const std::string_view kind = text::trim(fields[1]);
    GameEvent ev{*t, EventKind::Shot};
    if (kind == "kill") {
      ev.kind = EventKind::Kill;
    } else if (kind == "death") {
      ev.kind = EventKind::Death;
    } else if (kind != "shot") {
      throw ParseError("unknown event kind '" + std::string(kind) + "'", lineno);
    }
    events.push_back(ev);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const GameEvent& a, const GameEvent& b) { return a.t < b.t; });
  return events;
}

std::string format_event_log(std::span<const GameEvent> events) {
  std::string out = "# t,kind\n";
  for (const auto& ev : events) {
    out += text::format_double(ev.t);
    out += ',';
    out += to_string(ev.kind);
    out += '\n';
  }
  return out;
}

std::vector<double> event_times(std::span<const GameEvent> events, EventKind kind) {
  std::vector<double> out;
  for (const auto& ev : events) {
    if (ev.kind == kind) out.push_back(ev.t);
  }
  return out;
}

std::vector<ShootoutInterval> detect_shootouts(std::span<const double> shots, int min_shots,
                                               double max_gap) {
  std::vector<ShootoutInterval> out;
  std::size_t run_start = 0;
  for (std::size_t i = 1; i <= shots.size(); ++i) {
    const bool breaks = i == shots.size() || !(shots[i] - shots[i - 1] < max_gap);
    if (!breaks) continue;
    const auto len = static_cast<int>(i - run_start);
    if (len >= min_shots) out.push_back({shots[run_start], shots[i - 1], len});
    run_start = i;
  }
  return out;
}

namespace {

PlayerMeta meta_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("player metadata entry must be an object");
  PlayerMeta m;
  try {
    m.player_id = j.at("player_id").get<std::string>();
    m.exp_gt_1000h = j.at("exp_gt_1000h").get<bool>();
    m.age = j.at("age").get<double>();
    m.gender = j.at("gender").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("player metadata: ") + e.what());
  }
  if (m.player_id.empty()) throw ValidationError("player metadata: empty player_id");
  if (!(m.age > 0.0)) throw ValidationError("player metadata: age must be positive");
  if (m.gender != 0 && m.gender != 1) throw ValidationError("player metadata: gender must be 0 or 1");
  return m;
}

}  // namespace

std::vector<PlayerMeta> parse_player_meta(std::string_view input) {
  std::vector<PlayerMeta> out;
  auto parse = [](std::string_view s, std::size_t line) {
    try {
      return nlohmann::json::parse(s.begin(), s.end());
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("player metadata: ") + e.what(), line);
    }
  };
  const std::string_view trimmed = text::trim(input);
  if (trimmed.empty()) return out;
  if (trimmed.front() == '[') {
    const auto doc = parse(trimmed, 0);
    for (const auto& j : doc) out.push_back(meta_from_json(j));
    return out;
  }
  // A single (possibly pretty-printed) object, otherwise JSON lines.
  try {
    out.push_back(meta_from_json(parse(trimmed, 0)));
    return out;
  } catch (const ParseError&) {
  }
  std::size_t lineno = 0;
  for (std::string_view raw : text::split(trimmed, '\n')) {
    ++lineno;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    out.push_back(meta_from_json(parse(line, lineno)));
  }
  return out;
}

std::string serialize_player_meta(std::span<const PlayerMeta> players) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : players) {
    arr.push_back({{"player_id", m.player_id},
                   {"exp_gt_1000h", m.exp_gt_1000h},
                   {"age", m.age},
                   {"gender", m.gender}});
  }
  return arr.dump(2) + "\n";
}

double session_kdr(std::span<const GameEvent> events, const KdrPolicy& policy) {
  std::size_t kills = 0;
  std::size_t deaths = 0;
  for (const auto& ev : events) {
    if (ev.kind == EventKind::Kill) ++kills;
    if (ev.kind == EventKind::Death) ++deaths;
  }
  if (deaths == 0) return kills == 0 ? policy.no_activity_value : policy.cap;
  return std::min(static_cast<double>(kills) / static_cast<double>(deaths), policy.cap);
}

std::vector<Session> segment_sessions(std::shared_ptr<const ingest::TelemetryStream> stream,
                                      std::span<const GameEvent> events,
                                      std::span<const ShootoutInterval> shootouts,
                                      const PlayerMeta& meta, const SessionOptions& options,
                                      const KdrPolicy& kdr_policy) {
  if (!stream) throw ValidationError("segment_sessions: null stream");
  if (!(options.session_length > 0.0)) throw ValidationError("session_length must be positive");
  if (!(stream->nominal_rate > 0.0)) throw ValidationError("nominal_rate must be positive");
  std::vector<Session> out;
  const auto& samples = stream->samples;
  if (samples.empty()) return out;

  const double origin = samples.front().t;
  const double covered_until = samples.back().t + 1.0 / stream->nominal_rate;
  constexpr double kCoverageSlack = 1e-6;
  auto by_time = [](const ingest::SensorSample& s, double t) { return s.t < t; };

  for (std::size_t k = 0; k < options.max_sessions; ++k) {
    const double a = origin + static_cast<double>(k) * options.session_length;
    const double b = a + options.session_length;
    if (covered_until + kCoverageSlack < b) break;

    Session s;
    s.player_id = stream->player_id;
    s.index = k;
    s.start = a;
    s.duration = options.session_length;
    const auto lo = std::lower_bound(samples.begin(), samples.end(), a, by_time);
    const auto hi = std::lower_bound(lo, samples.end(), b, by_time);
    s.first_sample = static_cast<std::size_t>(lo - samples.begin());
    s.sample_count = static_cast<std::size_t>(hi - lo);
    s.source = stream;

    for (const auto& ev : events) {
      if (ev.t >= a && ev.t < b) s.events.push_back(ev);
    }
    for (const auto& iv : shootouts) {
      if (iv.end < a || iv.start >= b) continue;
      const double cs = std::max(iv.start, a);
      const double ce = std::min(iv.end, b);
      if (iv.start >= a && iv.end < b) {
        s.shootouts.push_back(iv);
        continue;
      }
      int shots = 0;
      for (const auto& ev : s.events) {
        if (ev.kind == EventKind::Shot && ev.t >= cs && ev.t <= ce) ++shots;
      }
      const int endpoints = (iv.start >= a ? 1 : 0) + (iv.end < b ? 1 : 0);
      shots = std::max(shots, endpoints);
      if (shots >= 1) s.shootouts.push_back({cs, ce, shots});
    }
    s.kdr = session_kdr(s.events, kdr_policy);
    s.label = meta.exp_gt_1000h;
    s.age = meta.age;
    s.gender = meta.gender;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Session> build_sessions(std::shared_ptr<const ingest::TelemetryStream> stream,
                                    std::span<const GameEvent> events, const PlayerMeta& meta,
                                    const SessionOptions& options, const KdrPolicy& kdr_policy) {
  const std::vector<double> shots = event_times(events, EventKind::Shot);
  const std::vector<ShootoutInterval> shootouts = detect_shootouts(shots);
  return segment_sessions(std::move(stream), events, shootouts, meta, options, kdr_policy);
}

}  // namespace chairsense::gamelog
