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

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chairsense/features.hpp"
#include "chairsense/models.hpp"

namespace chairsense::eval {

/// Share of rows where (p >= threshold) matches the 0/1 label.
double accuracy(std::span<const double> y, std::span<const double> p, double threshold = 0.5);

/// Probability that a random positive outscores a random negative; ties count 1/2.
/// Throws ValidationError unless both classes are present.
double roc_auc(std::span<const double> y, std::span<const double> p);

/// Mean binary cross-entropy with p clipped to [eps, 1 - eps].
double log_loss(std::span<const double> y, std::span<const double> p, double eps = 1e-15);

inline std::span<const double> as_span(const Eigen::VectorXd& v) noexcept {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

struct PlayerLabel {
  std::string id;
  bool label = false;
};

/// One label per player; throws ValidationError if a player's sessions disagree.
std::vector<PlayerLabel> player_labels(const features::FeatureMatrix& matrix);

struct SplitPlan {
  std::uint64_t seed = 0;
  std::vector<std::string> train_players;  ///< sorted
  std::vector<std::string> test_players;   ///< sorted
};

/// Random half of the players (floor(n/2)) for training, the rest for testing,
/// redrawn until both sides hold both classes. Deterministic per seed.
SplitPlan make_split(std::span<const PlayerLabel> players, std::uint64_t seed, int max_retries = 1000);

struct ModelScores {
  double accuracy = 0.0;
  double roc_auc = 0.0;
  double log_loss = 0.0;
};

struct SplitRecord {
  SplitPlan plan;
  std::vector<ModelScores> scores;  ///< parallel to the model specs
};

struct EvalOptions {
  std::size_t n_splits = 1000;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  double epsilon = 1e-15;
  int max_split_retries = 1000;
};

struct ModelSummary {
  models::ModelSpec spec;
  ModelScores mean;
};

struct EvalReport {
  std::vector<std::string> features;
  std::vector<ModelSummary> models;
  std::vector<SplitRecord> splits;  ///< in split-index order
  std::uint64_t master_seed = 0;
  double epsilon = 1e-15;
  std::size_t leakage_violations = 0;

  std::size_t n_splits() const noexcept { return splits.size(); }
};

/// Trains every spec on all sessions of the plan's training players and scores
/// it on all sessions of the test players. Throws if the two sides share a player.
SplitRecord evaluate_split(const features::FeatureMatrix& matrix,
                           std::span<const models::ModelSpec> specs, const SplitPlan& plan,
                           double epsilon = 1e-15);

/// Split i uses seed master_seed ^ i. Uses every column of `matrix`; restrict
/// it beforehand. The report depends only on the inputs, not on thread count.
EvalReport repeated_eval(const features::FeatureMatrix& matrix,
                         std::span<const models::ModelSpec> specs, const EvalOptions& options = {});

std::string report_json(const EvalReport& report);
/// Rows = models; columns = accuracy, roc_auc, log_loss.
std::string report_csv(const EvalReport& report);

/// Shuffles labels across players (each player keeps one label for all sessions).
features::FeatureMatrix permute_player_labels(const features::FeatureMatrix& matrix, std::uint64_t seed);

}  // namespace chairsense::eval
