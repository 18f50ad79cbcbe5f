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
#include <string>
#include <string_view>

#include "chairsense/features.hpp"

namespace chairsense::features {

/// Header row of column names, one row per session.
std::string to_csv(const FeatureMatrix& matrix);
/// Row metadata sidecar (JSON), parallel to the CSV rows.
std::string meta_to_json(const FeatureMatrix& matrix);

/// Inverse of to_csv + meta_to_json. Throws ParseError / ValidationError.
FeatureMatrix from_csv(std::string_view csv, std::string_view meta_json);

/// Square table with a leading name column, for heat-map plotting.
std::string to_csv(const CorrelationMatrix& corr);

/// Writes `<stem>.csv` and `<stem>.meta.json`.
void save_feature_matrix(const FeatureMatrix& matrix, const std::filesystem::path& csv_path);
FeatureMatrix load_feature_matrix(const std::filesystem::path& csv_path);
std::filesystem::path meta_sidecar_path(const std::filesystem::path& csv_path);

}  // namespace chairsense::features
