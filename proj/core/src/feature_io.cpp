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
#include "chairsense/feature_io.hpp"

#include <nlohmann/json.hpp>

#include "chairsense/error.hpp"
#include "text.hpp"

namespace chairsense::features {

using nlohmann::json;

std::string to_csv(const FeatureMatrix& matrix) {
  std::string out;
  for (std::size_t j = 0; j < matrix.columns.size(); ++j) {
    if (j) out += ',';
    out += matrix.columns[j];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.values.cols(); ++j) {
      if (j) out += ',';
      out += text::format_double(matrix.values(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string meta_to_json(const FeatureMatrix& matrix) {
  json rows = json::array();
  for (const auto& m : matrix.meta) {
    rows.push_back({{"player_id", m.player_id},
                    {"session_index", m.session_index},
                    {"start", m.start},
                    {"label", m.label},
                    {"kdr", m.kdr},
                    {"age", m.age},
                    {"gender", m.gender},
                    {"imputed", {{"kill", m.no_kill}, {"death", m.no_death}, {"shootout", m.no_shootout}}}});
  }
  json doc{{"format", "chairsense.features.meta"},
           {"version", 1},
           {"columns", matrix.columns},
           {"rows", std::move(rows)}};
  return doc.dump(1) + "\n";
}

FeatureMatrix from_csv(std::string_view csv, std::string_view meta_json) {
  FeatureMatrix m;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 0;
  for (std::string_view raw : text::split(csv, '\n')) {
    ++lineno;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    const auto fields = text::split(line, ',');
    if (m.columns.empty()) {
      for (auto f : fields) m.columns.emplace_back(text::trim(f));
      continue;
    }
    if (fields.size() != m.columns.size()) {
      throw ParseError("expected " + std::to_string(m.columns.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    std::vector<double> row;
    for (auto f : fields) {
      const auto v = text::parse_double(f);
      if (!v) throw ParseError("invalid number '" + std::string(f) + "'", lineno);
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  if (m.columns.empty()) throw ParseError("feature CSV has no header");

  json doc;
  try {
    doc = json::parse(meta_json.begin(), meta_json.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("feature metadata: ") + e.what());
  }
  try {
    if (doc.at("columns").get<std::vector<std::string>>() != m.columns) {
      throw ValidationError("feature metadata columns do not match CSV header");
    }
    for (const auto& r : doc.at("rows")) {
      SessionMeta s;
      s.player_id = r.at("player_id").get<std::string>();
      s.session_index = r.at("session_index").get<std::size_t>();
      s.start = r.at("start").get<double>();
      s.label = r.at("label").get<bool>();
      s.kdr = r.at("kdr").get<double>();
      s.age = r.at("age").get<double>();
      s.gender = r.at("gender").get<int>();
      s.no_kill = r.at("imputed").at("kill").get<bool>();
      s.no_death = r.at("imputed").at("death").get<bool>();
      s.no_shootout = r.at("imputed").at("shootout").get<bool>();
      m.meta.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("feature metadata: ") + e.what());
  }
  if (m.meta.size() != rows.size()) {
    throw ValidationError("feature metadata has " + std::to_string(m.meta.size()) +
                          " rows, CSV has " + std::to_string(rows.size()));
  }
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::string to_csv(const CorrelationMatrix& corr) {
  std::string out = "feature";
  for (const auto& n : corr.names) out += "," + n;
  out += '\n';
  for (Eigen::Index i = 0; i < corr.values.rows(); ++i) {
    out += corr.names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < corr.values.cols(); ++j) {
      out += ',';
      out += text::format_double(corr.values(i, j));
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path meta_sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

void save_feature_matrix(const FeatureMatrix& matrix, const std::filesystem::path& csv_path) {
  text::write_file_atomic(csv_path, to_csv(matrix));
  text::write_file_atomic(meta_sidecar_path(csv_path), meta_to_json(matrix));
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& csv_path) {
  return from_csv(text::read_file(csv_path), text::read_file(meta_sidecar_path(csv_path)));
}

}  // namespace chairsense::features
