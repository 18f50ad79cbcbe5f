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
#include "chairsense/cli/cli.hpp"

#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <optional>

#include "chairsense/cli/config.hpp"
#include "stages.hpp"

namespace chairsense::cli {

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Override every seed in the configuration");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--threads", f.threads, "Worker thread cap")->check(CLI::PositiveNumber);
}

PipelineConfig resolve_config(const CommonFlags& f) {
  PipelineConfig cfg = f.config.empty() ? PipelineConfig{} : load_config(f.config);
  if (f.seed) apply_seed(cfg, *f.seed);
  if (f.threads) cfg.threads = *f.threads;
  if (!f.out.empty()) cfg.output_dir = f.out;
  validate(cfg);
  return cfg;
}

fs::path or_default(const std::string& flag, const fs::path& fallback) {
  return flag.empty() ? fallback : fs::path(flag);
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chair-sensor telemetry analytics: ingest, features, selection and evaluation", "chairsense"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  CommonFlags common;
  std::string stage;

  auto* serve = app.add_subcommand("serve", "Run the HTTP ingestion service");
  add_common(serve, common);
  std::string serve_store;
  std::string serve_host;
  int serve_port = -1;
  serve->add_option("--store", serve_store, "Store directory (default <data_dir>/store)");
  serve->add_option("--host", serve_host, "Listen address");
  serve->add_option("--port", serve_port, "Listen port (0 picks a free port)")->check(CLI::Range(0, 65535));

  std::string data_dir;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic cohort into a data directory");
  add_common(simulate, common);
  simulate->add_option("--data", data_dir, "Data directory (default <out>/data)");
  bool force = false;
  bool jsonl = false;
  std::string replay_to;
  simulate->add_flag("--force", force, "Replace previously generated files in the data directory");
  simulate->add_flag("--jsonl", jsonl, "Also write telemetry.jsonl");
  simulate->add_option("--replay", replay_to, "Post telemetry to HOST:PORT instead of writing a store");

  auto* ingest = app.add_subcommand("ingest", "Load JSON-lines telemetry batches into a store");
  add_common(ingest, common);
  std::string ingest_file;
  std::string ingest_store;
  ingest->add_option("file", ingest_file, "JSON-lines file, one batch per line")->required()->check(CLI::ExistingFile);
  ingest->add_option("--store", ingest_store, "Store directory (default <data_dir>/store)");

  auto* extract = app.add_subcommand("extract", "Sessions to features.csv and correlations.csv");
  add_common(extract, common);
  extract->add_option("--data", data_dir, "Data directory with store/, events/ and players.json");

  auto* select = app.add_subcommand("select", "LASSO path with AIC/BIC selection");
  add_common(select, common);
  std::string features_csv;
  select->add_option("--features", features_csv, "Feature matrix CSV (default <out>/features.csv)");

  auto* evaluate = app.add_subcommand("evaluate", "Repeated player-level train/test evaluation");
  add_common(evaluate, common);
  std::string supports;
  evaluate->add_option("--features", features_csv, "Feature matrix CSV (default <out>/features.csv)");
  evaluate->add_option("--supports", supports, "supports.json from select (default <out>/supports.json)");

  auto* pipeline = app.add_subcommand("pipeline", "simulate, extract, select and evaluate in order");
  add_common(pipeline, common);
  pipeline->add_option("--data", data_dir, "Data directory (default <out>/data)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    stage = "config";
    PipelineConfig cfg = resolve_config(common);
    if (!data_dir.empty()) cfg.data_dir = fs::path(data_dir);
    const StageContext ctx{cfg, out, err};
    const fs::path out_dir = cfg.output_dir;

    if (serve->parsed()) {
      stage = "serve";
      run_serve(ctx, or_default(serve_store, cfg.resolved_data_dir() / "store"),
                serve_host.empty() ? cfg.ingest.host : serve_host, serve_port >= 0 ? serve_port : cfg.ingest.port);
    } else if (simulate->parsed()) {
      stage = "simulate";
      if (jsonl) cfg.simulate.write_jsonl = true;
      SimulateArgs sim;
      sim.data_dir = cfg.resolved_data_dir();
      sim.force = force;
      if (!replay_to.empty()) {
        const auto colon = replay_to.rfind(':');
        if (colon == std::string::npos) {
          err << "chairsense: --replay expects HOST:PORT\n";
          return kExitUsage;
        }
        sim.replay_host = replay_to.substr(0, colon);
        sim.replay_port = std::stoi(replay_to.substr(colon + 1));
      }
      run_simulate(ctx, sim);
    } else if (ingest->parsed()) {
      stage = "ingest";
      run_ingest(ctx, ingest_file, or_default(ingest_store, cfg.resolved_data_dir() / "store"));
    } else if (extract->parsed()) {
      stage = "extract";
      run_extract(ctx, cfg.resolved_data_dir(), out_dir);
    } else if (select->parsed()) {
      stage = "select";
      run_select(ctx, or_default(features_csv, out_dir / "features.csv"), out_dir);
    } else if (evaluate->parsed()) {
      stage = "evaluate";
      run_evaluate(ctx, or_default(features_csv, out_dir / "features.csv"),
                   or_default(supports, out_dir / "supports.json"), out_dir);
    } else if (pipeline->parsed()) {
      if (cfg.simulate.enabled) {
        stage = "simulate";
        SimulateArgs sim;
        sim.data_dir = cfg.resolved_data_dir();
        // The default data directory belongs to the run and is regenerated.
        sim.force = !cfg.data_dir.has_value();
        run_simulate(ctx, sim);
      }
      stage = "extract";
      run_extract(ctx, cfg.resolved_data_dir(), out_dir);
      stage = "select";
      run_select(ctx, out_dir / "features.csv", out_dir);
      stage = "evaluate";
      run_evaluate(ctx, out_dir / "features.csv", out_dir / "supports.json", out_dir);
    }
  } catch (const std::exception& e) {
    err << "chairsense: " << stage << " failed: " << e.what() << '\n';
    return kExitStageFailure;
  }
  return kExitOk;
}

int run_subcommand(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_subcommand(args, std::cout, std::cerr);
}

}  // namespace chairsense::cli
