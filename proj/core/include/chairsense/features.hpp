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
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chairsense/gamelog.hpp"

namespace chairsense::features {

inline constexpr std::size_t kFeatureCount = 31;

/// Fixed column order of the behavioral feature set:
/// lean_back, med_{acc,gyro}_{x,y,z}_std, moving_{acc,gyro}_{x,y,z},
/// moving_{kill,death,shootout}_{acc,gyro}_{x,y,z}.
const std::array<std::string, kFeatureCount>& feature_names();

/// Throws NotFoundError for unknown names.
std::size_t feature_index(std::string_view name);

/// Sample standard deviation (n - 1 denominator) over a trailing window of
/// `window` samples. Entry j covers series[j .. j + window - 1]. Returns an
/// empty vector when the series is shorter than the window.
std::vector<double> rolling_std(std::span<const double> series, std::size_t window);

/// Median; even lengths average the central pair. Throws on empty input.
double median(std::span<const double> values);

inline double median_std(std::span<const double> std_series) { return median(std_series); }

using MovementMask = std::vector<std::uint8_t>;

/// mask[i] = std[i] > multiplier * median(std). Throws on empty input.
MovementMask movement_mask(std::span<const double> std_series, double multiplier = 3.0);

double activity_fraction(std::span<const std::uint8_t> mask);

/// A time interval; `closed` includes the right endpoint.
struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;
  bool closed = false;
};

/// Share of true mask entries among entries whose time lies in the union of
/// `windows`; 0 when no entry falls inside. `times` is ascending and
/// parallel to `mask`. `covered` receives the number of entries inside.
double event_activity_fraction(std::span<const std::uint8_t> mask, std::span<const double> times,
                               std::span<const TimeWindow> windows,
                               std::size_t* covered = nullptr);

struct LeanBackParams {
  /// Threshold below the median, as a fraction of median(|acc_z|).
  double relative_threshold = 0.05;
  /// Overrides the relative rule when set.
  std::optional<double> absolute_threshold;
};

/// Share of samples whose trailing-mean acc_z sits more than the threshold
/// below the session median of acc_z.
double lean_back_fraction(std::span<const double> acc_z, std::size_t smoothing_window,
                          const LeanBackParams& params = {});

struct FeatureParams {
  std::size_t window = 100;  ///< samples; one second at the nominal rate
  double movement_multiplier = 3.0;
  double reaction_window = 1.0;  ///< seconds after a kill or death
  LeanBackParams lean_back;
};

/// Per-row metadata; never part of the model inputs.
struct SessionMeta {
  std::string player_id;
  std::size_t session_index = 0;
  double start = 0.0;
  bool label = false;
  double kdr = 0.0;
  double age = 0.0;
  int gender = 0;
  // Set when the corresponding event features were imputed as 0.
  bool no_kill = false;
  bool no_death = false;
  bool no_shootout = false;

  bool operator==(const SessionMeta&) const = default;
};

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  SessionMeta meta;
};

/// Throws ValidationError naming the session and channel when a used channel
/// holds non-finite values or the session is shorter than the window.
FeatureVector extract_features(const gamelog::Session& session, const FeatureParams& params = {});

struct FeatureMatrix {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  ///< rows = sessions
  std::vector<SessionMeta> meta;

  std::size_t rows() const noexcept { return meta.size(); }
  std::size_t cols() const noexcept { return columns.size(); }
  /// Throws NotFoundError.
  std::size_t column_index(std::string_view name) const;
  Eigen::VectorXd labels() const;
  /// Sorted unique player ids.
  std::vector<std::string> players() const;
  /// Copy restricted to the named columns, in the given order.
  FeatureMatrix select_columns(std::span<const std::string> names) const;
  void append(const FeatureMatrix& other);
};

FeatureMatrix empty_feature_matrix();

/// One row per session in input order. Sessions are processed on up to
/// `threads` workers; the result does not depend on the thread count.
FeatureMatrix build_feature_matrix(std::span<const gamelog::Session> sessions,
                                   const FeatureParams& params = {}, unsigned threads = 1);

struct CorrelationMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd values;
  std::vector<std::string> warnings;
};

/// Pearson correlations between feature columns, optionally followed by
/// kdr, age, gender and label. Zero-variance columns correlate 0 with
/// everything else and produce a warning. Throws with fewer than 2 rows.
CorrelationMatrix correlation_matrix(const FeatureMatrix& matrix, bool include_meta = false);

}  // namespace chairsense::features
