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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chairsense/gamelog.hpp"
#include "chairsense/telemetry.hpp"

namespace chairsense::synth {

/// Per-channel weights in kMotionChannels order (acc x, y, z, gyro x, y, z).
using ChannelGains = std::array<double, 6>;

/// Behavior of one skill class. Burst amplitudes are multiples of the
/// channel's noise floor; the values are synthetic, not measured.
struct ClassProfile {
  ChannelGains noise_floor{0.01, 0.01, 0.01, 0.5, 0.5, 0.5};  ///< acc in g, gyro in deg/s

  double engagements_per_round = 1.6;
  double extra_shots_mean = 3.0;  ///< shots per engagement beyond the minimum of 3
  double kill_prob = 0.4;         ///< per engagement
  double death_prob = 0.3;        ///< per engagement; ends the player's round

  double death_burst_prob = 0.5;
  ChannelGains death_gain{0.3, 0.3, 0.0, 1.0, 1.0, 0.3};
  double kill_burst_prob = 0.4;
  ChannelGains kill_gain{0.5, 0.5, 0.0, 0.5, 0.5, 0.5};
  double shootout_burst_rate = 0.25;  ///< bursts per second of engagement
  ChannelGains shootout_gain{0.3, 1.0, 0.0, 0.3, 0.3, 1.0};
  double spontaneous_rate = 0.03;  ///< bursts per second, anywhere
  ChannelGains spontaneous_gain{1.0, 1.0, 0.2, 0.3, 0.3, 0.3};
  double burst_amplitude = 25.0;

  double lean_back_per_minute = 0.5;
  double lean_back_mean_duration = 20.0;  ///< seconds
};

struct CohortConfig {
  std::uint64_t seed = 20260101;
  std::size_t n_players = 19;
  /// Players with index % 2 == 1 are high-skill until n_high are assigned.
  std::size_t n_high = 9;
  /// Stream length per player in seconds; players past the end use `duration`.
  std::vector<double> durations;
  double duration = 2100.0;
  double sample_rate = 100.0;

  double round_length = 40.0;  ///< mean; each round varies by +-20 %
  int rounds_per_game = 12;
  double intermission = 20.0;  ///< seconds between games

  double burst_tau = 0.3;           ///< envelope decay constant, seconds
  double trigger_delay_max = 0.5;   ///< event-triggered bursts start in [0, this] s
  double burst_min_frequency = 2.0;  ///< Hz
  double burst_max_frequency = 6.0;
  double lean_back_step = 0.08;     ///< drop of acc_z in g

  /// Log-normal spread of per-player multipliers on rates and probabilities.
  double player_jitter = 0.25;
  /// Log-normal spread of per-player multipliers on noise floors.
  double noise_jitter = 0.08;
  double male_fraction = 0.8;
  double min_age = 18.0;
  double max_age = 35.0;

  ClassProfile low;
  ClassProfile high;
};

/// The reference cohort: 19 players, 9 long and 10 shorter streams, low-skill
/// players reacting to deaths and firefights, high-skill players wiggling more
/// and fidgeting more between events.
CohortConfig default_config();
/// Same as `base` with the high class given the low class's behavior.
CohortConfig null_config(CohortConfig base = default_config());
/// No events, bursts or lean-back: noise only.
CohortConfig quiet_config(CohortConfig base = default_config());

/// Throws ValidationError naming the offending field.
void validate(const CohortConfig& config);

/// Every field; unknown keys are rejected, absent keys keep `base` values.
std::string config_to_json(const CohortConfig& config);
CohortConfig config_from_json(std::string_view json_text, const CohortConfig& base = default_config());

struct PlayerTruth {
  std::string player_id;
  bool high_skill = false;
  double duration = 0.0;
  ClassProfile profile;  ///< after per-player jitter
  std::size_t death_bursts = 0;
  std::size_t kill_bursts = 0;
  std::size_t shootout_bursts = 0;
  std::size_t spontaneous_bursts = 0;
  std::size_t lean_back_episodes = 0;
};

struct SyntheticPlayer {
  ingest::TelemetryStream stream;
  std::vector<gamelog::GameEvent> events;
  gamelog::PlayerMeta meta;
  PlayerTruth truth;
};

struct SyntheticCohort {
  CohortConfig config;
  std::vector<SyntheticPlayer> players;
};

std::string player_id(std::size_t index);
bool is_high_skill(const CohortConfig& config, std::size_t index);
double player_duration(const CohortConfig& config, std::size_t index);

/// Depends only on (config, index); players can be generated independently.
SyntheticPlayer generate_player(const CohortConfig& config, std::size_t index);
SyntheticCohort generate_cohort(const CohortConfig& config, unsigned threads = 1);

std::string truth_to_json(std::span<const PlayerTruth> truth);

/// Directory layout written by simulate_to_directory and read by the CLI.
struct DataLayout {
  std::filesystem::path root;

  std::filesystem::path store() const { return root / "store"; }
  std::filesystem::path events_dir() const { return root / "events"; }
  std::filesystem::path events(std::string_view player) const {
    return events_dir() / (std::string(player) + ".csv");
  }
  std::filesystem::path players() const { return root / "players.json"; }
  std::filesystem::path truth() const { return root / "ground_truth.json"; }
  std::filesystem::path config() const { return root / "cohort_config.json"; }
  std::filesystem::path telemetry_jsonl() const { return root / "telemetry.jsonl"; }
};

struct SimulateOptions {
  bool write_store = true;
  bool write_jsonl = false;
  double batch_seconds = 1.0;
};

struct SimulateSummary {
  std::size_t players = 0;
  std::size_t samples = 0;
  std::size_t events = 0;
};

/// Generates one player at a time (bounded memory) and writes telemetry,
/// event logs, metadata, ground truth and the config echo.
SimulateSummary simulate_to_directory(const CohortConfig& config, const std::filesystem::path& root,
                                      const SimulateOptions& options = {});

}  // namespace chairsense::synth
