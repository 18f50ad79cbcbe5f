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
#include "stages.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "chairsense/error.hpp"
#include "chairsense/feature_io.hpp"
#include "chairsense/gamelog.hpp"
#include "chairsense/ingest_server.hpp"
#include "chairsense/replay.hpp"
#include "chairsense/stream_store.hpp"
#include "chairsense/synth.hpp"

namespace chairsense::cli {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void remove_generated(const synth::DataLayout& layout) {
  fs::remove_all(layout.store());
  fs::remove_all(layout.events_dir());
  for (const auto& p : {layout.players(), layout.truth(), layout.config(), layout.telemetry_jsonl()}) fs::remove(p);
}

void warn(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

}  // namespace

void write_run_config(const PipelineConfig& config, const fs::path& out_dir) {
  write_text(out_dir / "run_config.json", config_to_json(config));
}

void run_simulate(const StageContext& ctx, const SimulateArgs& args) {
  const auto& cfg = ctx.config;
  const synth::DataLayout layout{args.data_dir};
  if (args.force) remove_generated(layout);

  if (!args.replay_host) {
    synth::SimulateOptions opts;
    opts.write_jsonl = cfg.simulate.write_jsonl;
    opts.batch_seconds = cfg.simulate.batch_seconds;
    const auto summary = synth::simulate_to_directory(cfg.synth, args.data_dir, opts);
    ctx.out << "simulated " << summary.players << " players, " << summary.samples << " samples, "
            << summary.events << " events into " << args.data_dir.string() << '\n';
    return;
  }

  // Replay mode: telemetry goes over HTTP, event logs and metadata to disk.
  fs::create_directories(layout.events_dir());
  replay::ReplayOptions ropts;
  ropts.host = *args.replay_host;
  ropts.port = args.replay_port;
  ropts.batch_seconds = cfg.simulate.batch_seconds;
  replay::ReplaySummary total;
  std::vector<gamelog::PlayerMeta> meta;
  std::vector<synth::PlayerTruth> truth;
  for (std::size_t i = 0; i < cfg.synth.n_players; ++i) {
    synth::SyntheticPlayer player = synth::generate_player(cfg.synth, i);
    total += replay::replay_stream(player.stream, ropts, i);
    write_text(layout.events(player.meta.player_id), gamelog::format_event_log(player.events));
    meta.push_back(player.meta);
    truth.push_back(player.truth);
  }
  write_text(layout.players(), gamelog::serialize_player_meta(meta));
  write_text(layout.truth(), synth::truth_to_json(truth));
  write_text(layout.config(), synth::config_to_json(cfg.synth));
  ctx.out << "replayed " << total.players << " players: " << total.batches << " batches, "
          << total.accepted_batches << " accepted, " << total.duplicate_batches << " duplicate\n";
}

void run_ingest(const StageContext& ctx, const fs::path& jsonl, const fs::path& store_dir) {
  ingest::StreamStore store(store_dir);
  const auto summary = ingest::ingest_jsonl_file(store, jsonl);
  store.flush_index();
  ctx.out << "ingested " << summary.batches << " batches (" << summary.accepted_samples << " samples, "
          << summary.duplicates << " duplicates)\n";
}

void run_serve(const StageContext& ctx, const fs::path& store_dir, const std::string& host, int port) {
  ingest::StreamStore store(store_dir);
  ingest::IngestServer server(store);
  g_stop = false;
  auto previous_int = std::signal(SIGINT, on_signal);
  auto previous_term = std::signal(SIGTERM, on_signal);
  const int bound = server.start(host, port);
  ctx.out << "listening on " << host << ':' << bound << " (store " << store_dir.string() << ")" << std::endl;
  while (!g_stop && server.running()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  store.flush_index();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
}

features::FeatureMatrix run_extract(const StageContext& ctx, const fs::path& data_dir, const fs::path& out_dir) {
  const auto& cfg = ctx.config;
  const synth::DataLayout layout{data_dir};
  if (!fs::is_directory(layout.store())) throw Error("no sessions: store " + layout.store().string() + " does not exist");
  ingest::StreamStore store(layout.store());
  const auto players = store.players();
  if (players.empty()) throw Error("no sessions: store " + layout.store().string() + " is empty");

  std::map<std::string, gamelog::PlayerMeta> meta;
  for (auto& m : gamelog::parse_player_meta(read_text(layout.players()))) meta.emplace(m.player_id, m);

  features::FeatureMatrix matrix = features::empty_feature_matrix();
  for (const auto& id : players) {
    const auto it = meta.find(id);
    if (it == meta.end()) throw ValidationError("no metadata for player " + id + " in " + layout.players().string());
    const auto events = gamelog::parse_event_log(read_text(layout.events(id)));
    auto stream = std::make_shared<const ingest::TelemetryStream>(store.load_stream(id));
    const auto sessions = gamelog::build_sessions(stream, events, it->second, cfg.sessions, cfg.kdr);
    matrix.append(features::build_feature_matrix(sessions, cfg.features, cfg.threads));
  }
  if (matrix.rows() == 0) throw Error("no sessions: no stream covers a full " +
                                      std::to_string(cfg.sessions.session_length) + " s session");

  fs::create_directories(out_dir);
  features::save_feature_matrix(matrix, out_dir / "features.csv");
  const auto corr = features::correlation_matrix(matrix, true);
  warn(ctx.err, corr.warnings);
  write_text(out_dir / "correlations.csv", features::to_csv(corr));
  write_run_config(cfg, out_dir);
  ctx.out << "extracted " << matrix.rows() << " sessions x " << matrix.cols() << " features from "
          << players.size() << " players\n";
  return matrix;
}

selection::SelectionResult run_select(const StageContext& ctx, const fs::path& features_csv, const fs::path& out_dir) {
  const auto& cfg = ctx.config;
  const auto matrix = features::load_feature_matrix(features_csv);
  const auto design = selection::standardize(matrix.values, matrix.labels(), matrix.columns);
  warn(ctx.err, design.warnings);
  const auto grid = selection::default_alpha_grid(design, cfg.selection.n_alphas, cfg.selection.alpha_ratio);
  selection::LassoOptions opts;
  opts.tolerance = cfg.selection.tolerance;
  opts.max_sweeps = cfg.selection.max_sweeps;
  auto result = selection::select_features(selection::lasso_path(design, grid, opts), design.n(), design.names);
  const auto chosen = selection::cap_support(result.aic_support, cfg.selection.max_model_features);
  if (chosen.empty()) throw Error("AIC selected no features; nothing to train on");

  fs::create_directories(out_dir);
  write_text(out_dir / "selection_report.csv", selection::selection_report_csv(result));
  write_text(out_dir / "supports.json", selection::supports_json(result, chosen));
  write_run_config(cfg, out_dir);
  ctx.out << "AIC support " << result.aic_support.size() << ", BIC support " << result.bic_support.size()
          << ", training on " << chosen.size() << " features\n";
  return result;
}

eval::EvalReport run_evaluate(const StageContext& ctx, const fs::path& features_csv, const fs::path& supports_json,
                              const fs::path& out_dir) {
  const auto& cfg = ctx.config;
  const auto matrix = features::load_feature_matrix(features_csv);
  const auto names = selection::model_features_from_json(read_text(supports_json));
  const auto subset = matrix.select_columns(names);

  eval::EvalOptions opts;
  opts.n_splits = cfg.eval.n_splits;
  opts.master_seed = cfg.eval.master_seed;
  opts.threads = cfg.threads;
  opts.epsilon = cfg.eval.epsilon;
  const auto report = eval::repeated_eval(subset, cfg.models, opts);
  if (report.leakage_violations != 0)
    throw Error("leakage audit failed: " + std::to_string(report.leakage_violations) + " shared players");

  // Importance from a forest fitted on every session.
  models::ModelSpec forest{models::ForestParams{}, cfg.eval.master_seed};
  for (const auto& spec : cfg.models)
    if (spec.kind() == models::ModelKind::RandomForest) forest = spec;
  const auto model = models::fit(forest, subset.values, subset.labels());
  const Eigen::VectorXd importance = models::rf_feature_importance(model);
  std::ostringstream imp;
  imp << "feature,importance\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    imp << names[i] << ',';
    imp.precision(17);
    imp << importance[static_cast<Eigen::Index>(i)] << '\n';
  }

  fs::create_directories(out_dir);
  write_text(out_dir / "eval_report.json", eval::report_json(report));
  write_text(out_dir / "eval_report.csv", eval::report_csv(report));
  write_text(out_dir / "importance.csv", imp.str());
  write_run_config(cfg, out_dir);
  for (const auto& m : report.models) {
    ctx.out << m.spec.name() << ": accuracy " << m.mean.accuracy << ", roc_auc " << m.mean.roc_auc
            << ", log_loss " << m.mean.log_loss << '\n';
  }
  return report;
}

}  // namespace chairsense::cli
