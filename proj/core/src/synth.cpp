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
#include "chairsense/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

#include "chairsense/error.hpp"
#include "chairsense/models.hpp"
#include "chairsense/stream_store.hpp"
#include "text.hpp"

namespace chairsense::synth {

using gamelog::EventKind;
using gamelog::GameEvent;
using json = nlohmann::json;

namespace {

// Field visitors shared by serialization, parsing and validation.
template <typename P, typename F>
void visit_profile(P& p, F&& f) {
  f("noise_floor", p.noise_floor);
  f("engagements_per_round", p.engagements_per_round);
  f("extra_shots_mean", p.extra_shots_mean);
  f("kill_prob", p.kill_prob);
  f("death_prob", p.death_prob);
  f("death_burst_prob", p.death_burst_prob);
  f("death_gain", p.death_gain);
  f("kill_burst_prob", p.kill_burst_prob);
  f("kill_gain", p.kill_gain);
  f("shootout_burst_rate", p.shootout_burst_rate);
  f("shootout_gain", p.shootout_gain);
  f("spontaneous_rate", p.spontaneous_rate);
  f("spontaneous_gain", p.spontaneous_gain);
  f("burst_amplitude", p.burst_amplitude);
  f("lean_back_per_minute", p.lean_back_per_minute);
  f("lean_back_mean_duration", p.lean_back_mean_duration);
}

template <typename C, typename F>
void visit_config(C& c, F&& f) {
  f("seed", c.seed);
  f("n_players", c.n_players);
  f("n_high", c.n_high);
  f("durations", c.durations);
  f("duration", c.duration);
  f("sample_rate", c.sample_rate);
  f("round_length", c.round_length);
  f("rounds_per_game", c.rounds_per_game);
  f("intermission", c.intermission);
  f("burst_tau", c.burst_tau);
  f("trigger_delay_max", c.trigger_delay_max);
  f("burst_min_frequency", c.burst_min_frequency);
  f("burst_max_frequency", c.burst_max_frequency);
  f("lean_back_step", c.lean_back_step);
  f("player_jitter", c.player_jitter);
  f("noise_jitter", c.noise_jitter);
  f("male_fraction", c.male_fraction);
  f("min_age", c.min_age);
  f("max_age", c.max_age);
}

json profile_json(const ClassProfile& p) {
  json j = json::object();
  visit_profile(p, [&](const char* name, const auto& v) { j[name] = v; });
  return j;
}

void profile_from_json(const json& j, ClassProfile& p, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  std::size_t known = 0;
  visit_profile(p, [&](const char* name, auto& v) {
    if (!j.contains(name)) return;
    ++known;
    try {
      j.at(name).get_to(v);
    } catch (const json::exception&) {
      throw ValidationError(where + "." + name + " has the wrong type");
    }
  });
  if (known != j.size()) {
    for (const auto& [key, _] : j.items()) {
      bool found = false;
      visit_profile(p, [&](const char* name, const auto&) { found = found || key == name; });
      if (!found) throw ValidationError("unknown key " + where + "." + key);
    }
  }
}

void check_rate(double v, const std::string& name) {
  if (!std::isfinite(v) || v < 0.0) throw ValidationError(name + " must be a finite value >= 0");
}

void check_prob(double v, const std::string& name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(name + " must be in [0, 1]");
}

void validate_profile(const ClassProfile& p, const std::string& where) {
  for (std::size_t c = 0; c < 6; ++c) {
    const std::string ch = std::string(ingest::channel_name(ingest::kMotionChannels[c]));
    if (!(p.noise_floor[c] > 0.0) || !std::isfinite(p.noise_floor[c]))
      throw ValidationError(where + ".noise_floor[" + ch + "] must be positive");
    check_rate(p.death_gain[c], where + ".death_gain[" + ch + "]");
    check_rate(p.kill_gain[c], where + ".kill_gain[" + ch + "]");
    check_rate(p.shootout_gain[c], where + ".shootout_gain[" + ch + "]");
    check_rate(p.spontaneous_gain[c], where + ".spontaneous_gain[" + ch + "]");
  }
  check_rate(p.engagements_per_round, where + ".engagements_per_round");
  check_rate(p.extra_shots_mean, where + ".extra_shots_mean");
  check_prob(p.kill_prob, where + ".kill_prob");
  check_prob(p.death_prob, where + ".death_prob");
  check_prob(p.death_burst_prob, where + ".death_burst_prob");
  check_prob(p.kill_burst_prob, where + ".kill_burst_prob");
  check_rate(p.shootout_burst_rate, where + ".shootout_burst_rate");
  check_rate(p.spontaneous_rate, where + ".spontaneous_rate");
  check_rate(p.burst_amplitude, where + ".burst_amplitude");
  check_rate(p.lean_back_per_minute, where + ".lean_back_per_minute");
  if (!(p.lean_back_mean_duration > 0.0)) throw ValidationError(where + ".lean_back_mean_duration must be positive");
}

struct Burst {
  double t0 = 0.0;
  ChannelGains gain{};
  double amplitude = 0.0;
  double frequency = 0.0;
  std::array<double, 6> phase{};
};

struct Episode {
  double begin = 0.0;
  double end = 0.0;
};

double jitter(std::mt19937_64& rng, double spread) {
  if (spread == 0.0) return 1.0;
  return std::exp(std::normal_distribution<double>(0.0, spread)(rng));
}

std::size_t poisson(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0;
  return static_cast<std::size_t>(std::poisson_distribution<long long>(mean)(rng));
}

double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

bool bernoulli(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

ClassProfile jittered(const ClassProfile& base, const CohortConfig& cfg, std::mt19937_64& rng) {
  ClassProfile p = base;
  for (double& s : p.noise_floor) s *= jitter(rng, cfg.noise_jitter);
  const double spread = cfg.player_jitter;
  p.engagements_per_round *= jitter(rng, spread);
  p.extra_shots_mean *= jitter(rng, spread);
  p.kill_prob = std::min(1.0, p.kill_prob * jitter(rng, spread));
  p.death_prob = std::min(1.0 - p.kill_prob, p.death_prob * jitter(rng, spread));
  p.death_burst_prob = std::min(1.0, p.death_burst_prob * jitter(rng, spread));
  p.kill_burst_prob = std::min(1.0, p.kill_burst_prob * jitter(rng, spread));
  p.shootout_burst_rate *= jitter(rng, spread);
  p.spontaneous_rate *= jitter(rng, spread);
  p.lean_back_per_minute *= jitter(rng, spread);
  return p;
}

class PlayerBuilder {
 public:
  PlayerBuilder(const CohortConfig& cfg, const ClassProfile& profile, double duration, std::mt19937_64& rng,
                PlayerTruth& truth)
      : cfg_(cfg), p_(profile), duration_(duration), rng_(rng), truth_(truth) {}

  void simulate_games() {
    double t = 0.5;
    while (t < duration_) {
      for (int r = 0; r < cfg_.rounds_per_game && t < duration_; ++r) {
        const double len = cfg_.round_length * uniform(rng_, 0.8, 1.2);
        simulate_round(t, std::min(t + len, duration_));
        t += len;
      }
      t += cfg_.intermission;
    }
    std::stable_sort(events_.begin(), events_.end(),
                     [](const GameEvent& a, const GameEvent& b) { return a.t < b.t; });
  }

  void add_spontaneous() {
    const std::size_t n = poisson(rng_, p_.spontaneous_rate * duration_);
    for (std::size_t i = 0; i < n; ++i) add_burst(uniform(rng_, 0.0, duration_), p_.spontaneous_gain);
    truth_.spontaneous_bursts = n;
  }

  void add_lean_back() {
    const std::size_t n = poisson(rng_, p_.lean_back_per_minute * duration_ / 60.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double begin = uniform(rng_, 0.0, duration_);
      const double len = std::exponential_distribution<double>(1.0 / p_.lean_back_mean_duration)(rng_);
      episodes_.push_back({begin, std::min(duration_, begin + len)});
    }
    truth_.lean_back_episodes = n;
  }

  std::vector<GameEvent> take_events() { return std::move(events_); }
  const std::vector<Burst>& bursts() const { return bursts_; }
  const std::vector<Episode>& episodes() const { return episodes_; }

 private:
  void simulate_round(double a, double b) {
    if (b - a < 6.0) return;
    const std::size_t n = poisson(rng_, p_.engagements_per_round);
    std::vector<double> starts(n);
    for (double& s : starts) s = uniform(rng_, a + 2.0, b - 3.0);
    std::sort(starts.begin(), starts.end());
    double free_from = a;
    for (double s : starts) {
      s = std::max(s, free_from + 0.5);
      if (s >= b) break;
      const std::size_t shots = 3 + poisson(rng_, p_.extra_shots_mean);
      double tt = s;
      double last = s;
      for (std::size_t k = 0; k < shots && tt < b; ++k) {
        events_.push_back({tt, EventKind::Shot});
        last = tt;
        tt += uniform(rng_, 0.15, 1.5);
      }
      const std::size_t firefight = poisson(rng_, p_.shootout_burst_rate * (last - s + 0.5));
      for (std::size_t k = 0; k < firefight; ++k) add_burst(uniform(rng_, s, last + 0.5), p_.shootout_gain);
      truth_.shootout_bursts += firefight;

      const double outcome_t = last + uniform(rng_, 0.05, 0.4);
      free_from = outcome_t;
      if (outcome_t >= b) break;
      const double u = uniform(rng_, 0.0, 1.0);
      if (u < p_.kill_prob) {
        events_.push_back({outcome_t, EventKind::Kill});
        if (bernoulli(rng_, p_.kill_burst_prob)) {
          add_burst(outcome_t + uniform(rng_, 0.0, cfg_.trigger_delay_max), p_.kill_gain);
          ++truth_.kill_bursts;
        }
      } else if (u < p_.kill_prob + p_.death_prob) {
        events_.push_back({outcome_t, EventKind::Death});
        if (bernoulli(rng_, p_.death_burst_prob)) {
          add_burst(outcome_t + uniform(rng_, 0.0, cfg_.trigger_delay_max), p_.death_gain);
          ++truth_.death_bursts;
        }
        break;  // dead until the next round
      }
    }
  }

  void add_burst(double t0, const ChannelGains& gain) {
    Burst b;
    b.t0 = t0;
    b.gain = gain;
    b.amplitude = p_.burst_amplitude;
    b.frequency = uniform(rng_, cfg_.burst_min_frequency, cfg_.burst_max_frequency);
    for (double& ph : b.phase) ph = uniform(rng_, 0.0, 2.0 * std::numbers::pi);
    bursts_.push_back(b);
  }

  const CohortConfig& cfg_;
  const ClassProfile& p_;
  double duration_;
  std::mt19937_64& rng_;
  PlayerTruth& truth_;
  std::vector<GameEvent> events_;
  std::vector<Burst> bursts_;
  std::vector<Episode> episodes_;
};

void render(ingest::TelemetryStream& stream, const CohortConfig& cfg, const ClassProfile& p, double duration,
            const std::vector<Burst>& bursts, const std::vector<Episode>& episodes, std::mt19937_64& rng) {
  const double rate = cfg.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  std::vector<std::array<double, 6>> motion(n);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (auto& row : motion)
    for (std::size_t c = 0; c < 6; ++c) row[c] = p.noise_floor[c] * unit(rng);

  const double support = 6.0 * cfg.burst_tau;
  for (const Burst& b : bursts) {
    const auto first = static_cast<std::size_t>(std::ceil(b.t0 * rate));
    const auto last = std::min(n, static_cast<std::size_t>(std::ceil((b.t0 + support) * rate)));
    for (std::size_t i = first; i < last; ++i) {
      const double dt = static_cast<double>(i) / rate - b.t0;
      const double envelope = b.amplitude * std::exp(-dt / cfg.burst_tau);
      const double arg = 2.0 * std::numbers::pi * b.frequency * dt;
      for (std::size_t c = 0; c < 6; ++c) {
        if (b.gain[c] == 0.0) continue;
        motion[i][c] += b.gain[c] * p.noise_floor[c] * envelope * std::sin(arg + b.phase[c]);
      }
    }
  }
  for (const Episode& e : episodes) {
    const auto first = static_cast<std::size_t>(std::ceil(e.begin * rate));
    const auto last = std::min(n, static_cast<std::size_t>(std::ceil(e.end * rate)));
    for (std::size_t i = first; i < last; ++i) motion[i][2] -= cfg.lean_back_step;
  }

  // Magnetometer: slow heading drift plus sensor noise, in microtesla.
  const double drift_phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double drift_period = uniform(rng, 300.0, 900.0);
  stream.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = stream.samples[i];
    s.t = static_cast<double>(i) / rate;
    s.acc = {motion[i][0], motion[i][1], 1.0 + motion[i][2]};
    s.gyro = {motion[i][3], motion[i][4], motion[i][5]};
    const double heading = drift_phase + 2.0 * std::numbers::pi * s.t / drift_period;
    s.mag = {25.0 + 2.0 * std::cos(heading) + 0.3 * unit(rng), 5.0 + 2.0 * std::sin(heading) + 0.3 * unit(rng),
             -40.0 + 0.3 * unit(rng)};
  }
}

}  // namespace

CohortConfig default_config() {
  CohortConfig cfg;
  cfg.durations.assign(9, 2100.0);
  cfg.durations.insert(cfg.durations.end(), 9, 1500.0);
  cfg.durations.push_back(1680.0);

  ClassProfile& low = cfg.low;
  low.death_burst_prob = 0.8;
  low.shootout_burst_rate = 0.45;
  low.spontaneous_rate = 0.02;
  low.kill_prob = 0.3;
  low.death_prob = 0.4;

  ClassProfile& high = cfg.high;
  high.noise_floor[3] *= 1.3;  // gyro_x wiggle
  high.death_burst_prob = 0.25;
  high.shootout_burst_rate = 0.12;
  high.spontaneous_rate = 0.045;
  high.kill_prob = 0.5;
  high.death_prob = 0.25;
  return cfg;
}

CohortConfig null_config(CohortConfig base) {
  base.high = base.low;
  return base;
}

CohortConfig quiet_config(CohortConfig base) {
  for (ClassProfile* p : {&base.low, &base.high}) {
    p->engagements_per_round = 0.0;
    p->death_burst_prob = 0.0;
    p->kill_burst_prob = 0.0;
    p->shootout_burst_rate = 0.0;
    p->spontaneous_rate = 0.0;
    p->burst_amplitude = 0.0;
    p->lean_back_per_minute = 0.0;
  }
  base.high.noise_floor = base.low.noise_floor;
  base.noise_jitter = 0.0;
  return base;
}

void validate(const CohortConfig& c) {
  if (c.n_players == 0) throw ValidationError("n_players must be positive");
  if (c.n_high > c.n_players) throw ValidationError("n_high exceeds n_players");
  if (!(c.sample_rate > 0.0) || !std::isfinite(c.sample_rate)) throw ValidationError("sample_rate must be positive");
  if (!(c.duration >= 180.0)) throw ValidationError("duration must be >= 180 s");
  for (std::size_t i = 0; i < c.durations.size(); ++i)
    if (!(c.durations[i] >= 180.0) || !std::isfinite(c.durations[i]))
      throw ValidationError("durations[" + std::to_string(i) + "] must be >= 180 s", i);
  if (!(c.round_length > 0.0)) throw ValidationError("round_length must be positive");
  if (c.rounds_per_game < 1) throw ValidationError("rounds_per_game must be >= 1");
  check_rate(c.intermission, "intermission");
  if (!(c.burst_tau > 0.0)) throw ValidationError("burst_tau must be positive");
  check_rate(c.trigger_delay_max, "trigger_delay_max");
  if (!(c.burst_min_frequency > 0.0 && c.burst_min_frequency <= c.burst_max_frequency))
    throw ValidationError("burst frequencies must satisfy 0 < min <= max");
  check_rate(c.lean_back_step, "lean_back_step");
  check_rate(c.player_jitter, "player_jitter");
  check_rate(c.noise_jitter, "noise_jitter");
  check_prob(c.male_fraction, "male_fraction");
  if (!(c.min_age <= c.max_age)) throw ValidationError("min_age must not exceed max_age");
  validate_profile(c.low, "low");
  validate_profile(c.high, "high");
}

std::string config_to_json(const CohortConfig& c) {
  json j = json::object();
  visit_config(c, [&](const char* name, const auto& v) { j[name] = v; });
  j["low"] = profile_json(c.low);
  j["high"] = profile_json(c.high);
  return j.dump(2) + "\n";
}

CohortConfig config_from_json(std::string_view text, const CohortConfig& base) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("cohort config: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("cohort config must be a JSON object");
  CohortConfig c = base;
  for (const auto& [key, value] : j.items()) {
    if (key == "low" || key == "high") {
      profile_from_json(value, key == "low" ? c.low : c.high, key);
      continue;
    }
    bool found = false;
    visit_config(c, [&](const char* name, auto& v) {
      if (key != name) return;
      found = true;
      try {
        value.get_to(v);
      } catch (const json::exception&) {
        throw ValidationError("cohort config key " + key + " has the wrong type");
      }
    });
    if (!found) throw ValidationError("unknown cohort config key " + key);
  }
  validate(c);
  return c;
}

std::string player_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%02zu", index + 1);
  return buf;
}

bool is_high_skill(const CohortConfig& config, std::size_t index) {
  // Odd indices first, then even ones, until n_high players are assigned.
  const std::size_t odd = config.n_players / 2;
  const std::size_t rank = index % 2 == 1 ? index / 2 : odd + index / 2;
  return rank < config.n_high;
}

double player_duration(const CohortConfig& config, std::size_t index) {
  return index < config.durations.size() ? config.durations[index] : config.duration;
}

SyntheticPlayer generate_player(const CohortConfig& config, std::size_t index) {
  validate(config);
  if (index >= config.n_players) throw ValidationError("player index out of range", index);
  const std::uint64_t base = models::mix_seed(config.seed + index);
  std::mt19937_64 param_rng(models::mix_seed(base ^ 1));
  std::mt19937_64 event_rng(models::mix_seed(base ^ 2));
  std::mt19937_64 signal_rng(models::mix_seed(base ^ 3));

  SyntheticPlayer out;
  const std::string id = player_id(index);
  const bool high = is_high_skill(config, index);
  const double duration = player_duration(config, index);

  out.meta.player_id = id;
  out.meta.exp_gt_1000h = high;
  out.meta.age = std::round(uniform(param_rng, config.min_age, config.max_age));
  out.meta.gender = bernoulli(param_rng, config.male_fraction) ? 1 : 0;

  PlayerTruth& truth = out.truth;
  truth.player_id = id;
  truth.high_skill = high;
  truth.duration = duration;
  truth.profile = jittered(high ? config.high : config.low, config, param_rng);
  // Men recline more often than women.
  truth.profile.lean_back_per_minute *= out.meta.gender == 1 ? 1.25 : 0.6;

  PlayerBuilder builder(config, truth.profile, duration, event_rng, truth);
  builder.simulate_games();
  builder.add_spontaneous();
  builder.add_lean_back();
  out.events = builder.take_events();

  out.stream.player_id = id;
  out.stream.nominal_rate = config.sample_rate;
  render(out.stream, config, truth.profile, duration, builder.bursts(), builder.episodes(), signal_rng);
  return out;
}

SyntheticCohort generate_cohort(const CohortConfig& config, unsigned threads) {
  validate(config);
  SyntheticCohort cohort;
  cohort.config = config;
  cohort.players.resize(config.n_players);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < config.n_players; i = next++) {
      try {
        cohort.players[i] = generate_player(config, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(config.n_players)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return cohort;
}

std::string truth_to_json(std::span<const PlayerTruth> truth) {
  json arr = json::array();
  for (const auto& t : truth) {
    arr.push_back({{"player_id", t.player_id},
                   {"high_skill", t.high_skill},
                   {"duration", t.duration},
                   {"profile", profile_json(t.profile)},
                   {"death_bursts", t.death_bursts},
                   {"kill_bursts", t.kill_bursts},
                   {"shootout_bursts", t.shootout_bursts},
                   {"spontaneous_bursts", t.spontaneous_bursts},
                   {"lean_back_episodes", t.lean_back_episodes}});
  }
  return arr.dump(2) + "\n";
}

SimulateSummary simulate_to_directory(const CohortConfig& config, const std::filesystem::path& root,
                                      const SimulateOptions& options) {
  validate(config);
  if (!(options.batch_seconds > 0.0)) throw ValidationError("batch_seconds must be positive");
  const DataLayout layout{root};
  namespace fs = std::filesystem;
  if (options.write_store && fs::exists(layout.store()) && !fs::is_empty(layout.store()))
    throw ValidationError("store directory " + layout.store().string() + " is not empty");
  fs::create_directories(layout.events_dir());

  std::optional<ingest::StreamStore> store;
  if (options.write_store) store.emplace(layout.store());
  std::ofstream jsonl;
  if (options.write_jsonl) {
    jsonl.open(layout.telemetry_jsonl(), std::ios::binary | std::ios::trunc);
    if (!jsonl) throw Error("cannot open " + layout.telemetry_jsonl().string());
  }

  SimulateSummary summary;
  std::vector<gamelog::PlayerMeta> meta;
  std::vector<PlayerTruth> truth;
  const auto per_batch =
      static_cast<std::size_t>(std::max(1.0, std::round(options.batch_seconds * config.sample_rate)));
  for (std::size_t i = 0; i < config.n_players; ++i) {
    SyntheticPlayer player = generate_player(config, i);
    if (store || jsonl.is_open()) {
      for (const auto& batch : ingest::chunk_stream(player.stream, "chair-" + player.meta.player_id, per_batch)) {
        if (store) store->append_batch(batch);
        if (jsonl.is_open()) jsonl << ingest::serialize_telemetry_batch(batch) << '\n';
      }
    }
    text::write_file_atomic(layout.events(player.meta.player_id), gamelog::format_event_log(player.events));
    summary.samples += player.stream.samples.size();
    summary.events += player.events.size();
    ++summary.players;
    meta.push_back(std::move(player.meta));
    truth.push_back(std::move(player.truth));
  }
  if (store) store->flush_index();
  if (jsonl.is_open() && !jsonl.flush()) throw Error("write failed for " + layout.telemetry_jsonl().string());
  text::write_file_atomic(layout.players(), gamelog::serialize_player_meta(meta));
  text::write_file_atomic(layout.truth(), truth_to_json(truth));
  text::write_file_atomic(layout.config(), config_to_json(config));
  return summary;
}

}  // namespace chairsense::synth
