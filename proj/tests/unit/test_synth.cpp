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
#include <chairsense/features.hpp>
#include <chairsense/gamelog.hpp>
#include <chairsense/stream_store.hpp>
#include <chairsense/synth.hpp>
#include <gtest/gtest.h>

#include <filesystem>

#include "support/helpers.hpp"

using namespace chairsense;

namespace {

std::vector<gamelog::Session> sessions_of(const synth::SyntheticPlayer& p) {
  auto stream = std::make_shared<const ingest::TelemetryStream>(p.stream);
  return gamelog::build_sessions(stream, p.events, p.meta);
}

class DefaultCohort : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cohort_ = new synth::SyntheticCohort(synth::generate_cohort(synth::default_config()));
    std::vector<gamelog::Session> all;
    for (const auto& p : cohort_->players) {
      auto s = sessions_of(p);
      all.insert(all.end(), s.begin(), s.end());
    }
    matrix_ = new features::FeatureMatrix(features::build_feature_matrix(all));
  }
  static void TearDownTestSuite() {
    delete matrix_;
    delete cohort_;
  }

  static double class_mean(std::string_view feature, bool label) {
    const auto col = static_cast<Eigen::Index>(matrix_->column_index(feature));
    double sum = 0.0;
    int n = 0;
    for (std::size_t r = 0; r < matrix_->rows(); ++r) {
      if (matrix_->meta[r].label != label) continue;
      sum += matrix_->values(static_cast<Eigen::Index>(r), col);
      ++n;
    }
    return sum / n;
  }

  static inline synth::SyntheticCohort* cohort_ = nullptr;
  static inline features::FeatureMatrix* matrix_ = nullptr;
};

}  // namespace

TEST_F(DefaultCohort, ShapeAndSessionCount) {
  ASSERT_EQ(cohort_->players.size(), 19u);
  std::size_t high = 0;
  for (std::size_t i = 0; i < 19; ++i) {
    const auto& p = cohort_->players[i];
    EXPECT_EQ(p.meta.player_id, synth::player_id(i));
    EXPECT_EQ(p.meta.exp_gt_1000h, p.truth.high_skill);
    EXPECT_EQ(p.stream.player_id, p.meta.player_id);
    high += p.truth.high_skill;
    EXPECT_NO_THROW(ingest::validate_samples(p.stream.samples));
    EXPECT_TRUE(std::is_sorted(p.events.begin(), p.events.end(),
                               [](const auto& a, const auto& b) { return a.t < b.t; }));
    if (!p.events.empty()) {
      EXPECT_GE(p.events.front().t, p.stream.samples.front().t);
      EXPECT_LT(p.events.back().t, p.truth.duration);
    }
  }
  EXPECT_EQ(high, 9u);
  EXPECT_EQ(matrix_->rows(), 171u);
}

TEST_F(DefaultCohort, PlantedSignsMatchConfiguredBehavior) {
  EXPECT_GT(class_mean("moving_death_gyro_x", false), class_mean("moving_death_gyro_x", true));
  EXPECT_GT(class_mean("moving_shootout_acc_y", false), class_mean("moving_shootout_acc_y", true));
  EXPECT_LT(class_mean("med_gyro_x_std", false), class_mean("med_gyro_x_std", true));
}

TEST_F(DefaultCohort, GenerationIsDeterministic) {
  for (std::size_t i : {0u, 7u, 18u}) {
    const auto again = synth::generate_player(synth::default_config(), i);
    EXPECT_TRUE(again.stream.samples == cohort_->players[i].stream.samples);
    EXPECT_EQ(again.events, cohort_->players[i].events);
    EXPECT_EQ(again.meta, cohort_->players[i].meta);
  }
  const auto base = synth::generate_player(synth::default_config(), 3);
  auto other_seed = synth::default_config();
  other_seed.seed += 1;
  EXPECT_FALSE(synth::generate_player(other_seed, 3).stream.samples == base.stream.samples);
}

TEST(Synth, QuietConfigIsNoiseOnly) {
  auto cfg = synth::quiet_config();
  cfg.n_players = 4;
  cfg.n_high = 2;
  cfg.durations = {400, 400, 400, 400};
  const auto cohort = synth::generate_cohort(cfg, 2);
  for (const auto& p : cohort.players) {
    EXPECT_TRUE(p.events.empty());
    EXPECT_EQ(p.truth.death_bursts + p.truth.spontaneous_bursts + p.truth.lean_back_episodes, 0u);
    for (const auto& s : sessions_of(p)) {
      const auto fv = features::extract_features(s);
      EXPECT_EQ(fv.values[features::feature_index("lean_back")], 0.0);
      for (std::size_t j = 7; j < features::kFeatureCount; ++j) {
        EXPECT_LT(fv.values[j], 0.01) << features::feature_names()[j];
      }
      EXPECT_GT(fv.values[features::feature_index("med_gyro_z_std")], 0.0);
    }
  }
}

TEST(Synth, DurationsAndLabels) {
  const auto cfg = synth::default_config();
  EXPECT_EQ(synth::player_id(0), "p01");
  EXPECT_EQ(synth::player_id(18), "p19");
  EXPECT_DOUBLE_EQ(synth::player_duration(cfg, 0), 2100.0);
  EXPECT_DOUBLE_EQ(synth::player_duration(cfg, 17), 1500.0);
  EXPECT_DOUBLE_EQ(synth::player_duration(cfg, 18), 1680.0);
  EXPECT_FALSE(synth::is_high_skill(cfg, 0));
  EXPECT_TRUE(synth::is_high_skill(cfg, 1));
}

TEST(Synth, ConfigJsonRoundTripAndValidation) {
  const auto cfg = synth::default_config();
  const auto text = synth::config_to_json(cfg);
  EXPECT_EQ(synth::config_to_json(synth::config_from_json(text)), text);
  const auto partial = synth::config_from_json(R"({"n_players": 6, "n_high": 3, "low": {"kill_prob": 0.2}})");
  EXPECT_EQ(partial.n_players, 6u);
  EXPECT_DOUBLE_EQ(partial.low.kill_prob, 0.2);
  EXPECT_DOUBLE_EQ(partial.low.death_prob, cfg.low.death_prob);
  EXPECT_THROW(synth::config_from_json(R"({"bogus": 1})"), Error);
  EXPECT_THROW(synth::config_from_json("{"), ParseError);

  auto bad = cfg;
  bad.low.kill_prob = 1.5;
  EXPECT_THROW(synth::validate(bad), ValidationError);
  bad = cfg;
  bad.duration = 100.0;
  bad.durations.clear();
  EXPECT_THROW(synth::validate(bad), ValidationError);
  bad = cfg;
  bad.high.spontaneous_rate = -1.0;
  EXPECT_THROW(synth::generate_cohort(bad), ValidationError);
}

TEST(Synth, SimulateToDirectory) {
  testing_support::TempDir dir;
  auto cfg = synth::default_config();
  cfg.n_players = 4;
  cfg.n_high = 2;
  cfg.durations = {200, 200, 200, 200};
  synth::SimulateOptions opts;
  opts.write_jsonl = true;
  const auto summary = synth::simulate_to_directory(cfg, dir.path(), opts);
  EXPECT_EQ(summary.players, 4u);
  EXPECT_EQ(summary.samples, 80000u);
  const synth::DataLayout layout{dir.path()};
  for (const auto& f : {layout.players(), layout.truth(), layout.config(), layout.telemetry_jsonl(),
                        layout.events("p01"), layout.events("p04")}) {
    EXPECT_TRUE(std::filesystem::exists(f)) << f;
  }
  ingest::StreamStore store(layout.store());
  const auto loaded = store.load_stream("p03");
  EXPECT_TRUE(loaded.samples == synth::generate_player(cfg, 2).stream.samples);
  EXPECT_THROW(synth::simulate_to_directory(cfg, dir.path(), opts), Error);
}
