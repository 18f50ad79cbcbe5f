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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chairsense/features.hpp"
#include "chairsense/gamelog.hpp"
#include "chairsense/models.hpp"
#include "chairsense/synth.hpp"

namespace chairsense::cli {

struct SelectionConfig {
  std::size_t n_alphas = 100;
  double alpha_ratio = 1e-3;  ///< smallest alpha as a fraction of alpha_max
  std::size_t max_model_features = 8;
  double tolerance = 1e-8;
  int max_sweeps = 10000;
};

struct EvalConfig {
  std::size_t n_splits = 1000;
  std::uint64_t master_seed = 2026;
  double epsilon = 1e-15;
};

struct IngestConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
};

struct SimulateConfig {
  bool enabled = true;  ///< whether `pipeline` generates the cohort first
  bool write_jsonl = false;
  double batch_seconds = 1.0;
};

struct PipelineConfig {
  /// Telemetry store, event logs and players.json. Defaults to <output_dir>/data.
  std::optional<std::filesystem::path> data_dir;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 2026;
  unsigned threads = 1;

  synth::CohortConfig synth = synth::default_config();
  features::FeatureParams features;
  gamelog::SessionOptions sessions;
  gamelog::KdrPolicy kdr;
  SelectionConfig selection;
  std::vector<models::ModelSpec> models = models::default_model_specs(2026);
  EvalConfig eval;
  IngestConfig ingest;
  SimulateConfig simulate;

  std::filesystem::path resolved_data_dir() const { return data_dir ? *data_dir : output_dir / "data"; }
};

/// Absent keys keep their defaults; the top-level "seed" is the default for
/// synth.seed, eval.master_seed and every model seed. Relative paths are
/// resolved against `base_dir`. Unknown keys are rejected.
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Overrides every seed in the configuration.
void apply_seed(PipelineConfig& config, std::uint64_t seed);

/// Throws ValidationError for out-of-range parameters.
void validate(const PipelineConfig& config);

/// Full parameter echo, written as run_config.json.
std::string config_to_json(const PipelineConfig& config);

}  // namespace chairsense::cli
