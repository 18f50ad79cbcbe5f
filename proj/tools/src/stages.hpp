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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "chairsense/cli/config.hpp"
#include "chairsense/eval.hpp"
#include "chairsense/features.hpp"
#include "chairsense/selection.hpp"

namespace chairsense::cli {

struct StageContext {
  const PipelineConfig& config;
  std::ostream& out;
  std::ostream& err;
};

struct SimulateArgs {
  std::filesystem::path data_dir;
  bool force = false;
  std::optional<std::string> replay_host;  ///< post to a running server instead of writing a store
  int replay_port = 0;
  unsigned concurrency = 1;
};

void run_simulate(const StageContext& ctx, const SimulateArgs& args);
void run_ingest(const StageContext& ctx, const std::filesystem::path& jsonl, const std::filesystem::path& store);
void run_serve(const StageContext& ctx, const std::filesystem::path& store, const std::string& host, int port);

features::FeatureMatrix run_extract(const StageContext& ctx, const std::filesystem::path& data_dir,
                                    const std::filesystem::path& out_dir);
selection::SelectionResult run_select(const StageContext& ctx, const std::filesystem::path& features_csv,
                                      const std::filesystem::path& out_dir);
eval::EvalReport run_evaluate(const StageContext& ctx, const std::filesystem::path& features_csv,
                              const std::filesystem::path& supports_json, const std::filesystem::path& out_dir);

void write_run_config(const PipelineConfig& config, const std::filesystem::path& out_dir);

}  // namespace chairsense::cli
