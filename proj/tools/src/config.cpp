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
#include "chairsense/cli/config.hpp"

#include <nlohmann/json.hpp>
#include <fstream>
#include <iterator>

#include "chairsense/error.hpp"

namespace chairsense::cli {

using json = nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ValidationError((where.empty() ? "config" : where) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("unknown config key " + (where.empty() ? "" : where + ".") + key);
  }
}

template <typename T>
void read(const json& j, const char* key, T& target, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(target);
  } catch (const json::exception&) {
    throw ValidationError("config key " + (where.empty() ? "" : where + ".") + key + " has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  check_keys(j, "", {"data_dir", "output_dir", "seed", "threads", "synth", "features", "sessions", "selection",
                     "models", "eval", "ingest", "simulate"});
  PipelineConfig c;
  read(j, "seed", c.seed, "");
  c.synth.seed = c.seed;
  c.eval.master_seed = c.seed;
  c.models = models::default_model_specs(c.seed);

  if (j.contains("data_dir")) {
    std::string p;
    read(j, "data_dir", p, "");
    c.data_dir = resolve(base_dir, p);
  }
  if (j.contains("output_dir")) {
    std::string p;
    read(j, "output_dir", p, "");
    c.output_dir = resolve(base_dir, p);
  }
  read(j, "threads", c.threads, "");

  if (j.contains("synth")) {
    json s = j.at("synth");
    if (s.is_object() && !s.contains("seed")) s["seed"] = c.seed;
    c.synth = synth::config_from_json(s.dump(), c.synth);
  }
  if (j.contains("features")) {
    const json& f = j.at("features");
    check_keys(f, "features", {"window", "movement_multiplier", "reaction_window", "lean_back_relative_threshold",
                               "lean_back_absolute_threshold"});
    read(f, "window", c.features.window, "features");
    read(f, "movement_multiplier", c.features.movement_multiplier, "features");
    read(f, "reaction_window", c.features.reaction_window, "features");
    read(f, "lean_back_relative_threshold", c.features.lean_back.relative_threshold, "features");
    if (f.contains("lean_back_absolute_threshold") && !f.at("lean_back_absolute_threshold").is_null()) {
      double v = 0.0;
      read(f, "lean_back_absolute_threshold", v, "features");
      c.features.lean_back.absolute_threshold = v;
    }
  }
  if (j.contains("sessions")) {
    const json& s = j.at("sessions");
    check_keys(s, "sessions", {"session_length", "max_sessions", "kdr_cap", "kdr_no_activity"});
    read(s, "session_length", c.sessions.session_length, "sessions");
    read(s, "max_sessions", c.sessions.max_sessions, "sessions");
    read(s, "kdr_cap", c.kdr.cap, "sessions");
    read(s, "kdr_no_activity", c.kdr.no_activity_value, "sessions");
  }
  if (j.contains("selection")) {
    const json& s = j.at("selection");
    check_keys(s, "selection", {"n_alphas", "alpha_ratio", "max_model_features", "tolerance", "max_sweeps"});
    read(s, "n_alphas", c.selection.n_alphas, "selection");
    read(s, "alpha_ratio", c.selection.alpha_ratio, "selection");
    read(s, "max_model_features", c.selection.max_model_features, "selection");
    read(s, "tolerance", c.selection.tolerance, "selection");
    read(s, "max_sweeps", c.selection.max_sweeps, "selection");
  }
  if (j.contains("models")) {
    const json& m = j.at("models");
    if (!m.is_array()) throw ValidationError("config key models must be an array");
    c.models.clear();
    for (json spec : m) {
      if (spec.is_object() && !spec.contains("seed")) spec["seed"] = c.seed;
      c.models.push_back(models::spec_from_json(spec.dump()));
    }
  }
  if (j.contains("eval")) {
    const json& e = j.at("eval");
    check_keys(e, "eval", {"n_splits", "master_seed", "epsilon"});
    read(e, "n_splits", c.eval.n_splits, "eval");
    read(e, "master_seed", c.eval.master_seed, "eval");
    read(e, "epsilon", c.eval.epsilon, "eval");
  }
  if (j.contains("ingest")) {
    const json& i = j.at("ingest");
    check_keys(i, "ingest", {"host", "port"});
    read(i, "host", c.ingest.host, "ingest");
    read(i, "port", c.ingest.port, "ingest");
  }
  if (j.contains("simulate")) {
    const json& s = j.at("simulate");
    check_keys(s, "simulate", {"enabled", "write_jsonl", "batch_seconds"});
    read(s, "enabled", c.simulate.enabled, "simulate");
    read(s, "write_jsonl", c.simulate.write_jsonl, "simulate");
    read(s, "batch_seconds", c.simulate.batch_seconds, "simulate");
  }
  validate(c);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot read config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text, path.parent_path());
}

void apply_seed(PipelineConfig& c, std::uint64_t seed) {
  c.seed = seed;
  c.synth.seed = seed;
  c.eval.master_seed = seed;
  for (auto& m : c.models) m.seed = seed;
}

void validate(const PipelineConfig& c) {
  if (!(c.features.movement_multiplier > 0.0)) throw ValidationError("features.movement_multiplier must be > 0");
  if (c.features.window < 2) throw ValidationError("features.window must be >= 2");
  if (!(c.features.reaction_window > 0.0)) throw ValidationError("features.reaction_window must be > 0");
  if (!(c.sessions.session_length > 0.0)) throw ValidationError("sessions.session_length must be > 0");
  if (c.selection.n_alphas < 2) throw ValidationError("selection.n_alphas must be >= 2");
  if (!(c.selection.alpha_ratio > 0.0 && c.selection.alpha_ratio < 1.0))
    throw ValidationError("selection.alpha_ratio must be in (0, 1)");
  if (c.selection.max_model_features == 0) throw ValidationError("selection.max_model_features must be >= 1");
  if (c.eval.n_splits < 1) throw ValidationError("eval.n_splits must be >= 1");
  if (c.models.empty()) throw ValidationError("models must not be empty");
  if (c.ingest.port < 0 || c.ingest.port > 65535) throw ValidationError("ingest.port out of range");
  if (!(c.simulate.batch_seconds > 0.0)) throw ValidationError("simulate.batch_seconds must be > 0");
  synth::validate(c.synth);
}

std::string config_to_json(const PipelineConfig& c) {
  json models = json::array();
  for (const auto& m : c.models) models.push_back(json::parse(models::spec_to_json(m)));
  json lean_abs = c.features.lean_back.absolute_threshold ? json(*c.features.lean_back.absolute_threshold) : json();
  json doc = {
      {"data_dir", c.resolved_data_dir().generic_string()},
      {"output_dir", c.output_dir.generic_string()},
      {"seed", c.seed},
      {"threads", c.threads},
      {"synth", json::parse(synth::config_to_json(c.synth))},
      {"features",
       {{"window", c.features.window},
        {"movement_multiplier", c.features.movement_multiplier},
        {"reaction_window", c.features.reaction_window},
        {"lean_back_relative_threshold", c.features.lean_back.relative_threshold},
        {"lean_back_absolute_threshold", lean_abs}}},
      {"sessions",
       {{"session_length", c.sessions.session_length},
        {"max_sessions", c.sessions.max_sessions},
        {"kdr_cap", c.kdr.cap},
        {"kdr_no_activity", c.kdr.no_activity_value}}},
      {"selection",
       {{"n_alphas", c.selection.n_alphas},
        {"alpha_ratio", c.selection.alpha_ratio},
        {"max_model_features", c.selection.max_model_features},
        {"tolerance", c.selection.tolerance},
        {"max_sweeps", c.selection.max_sweeps}}},
      {"models", models},
      {"eval", {{"n_splits", c.eval.n_splits}, {"master_seed", c.eval.master_seed}, {"epsilon", c.eval.epsilon}}},
      {"ingest", {{"host", c.ingest.host}, {"port", c.ingest.port}}},
      {"simulate",
       {{"enabled", c.simulate.enabled},
        {"write_jsonl", c.simulate.write_jsonl},
        {"batch_seconds", c.simulate.batch_seconds}}}};
  return doc.dump(2) + "\n";
}

}  // namespace chairsense::cli
