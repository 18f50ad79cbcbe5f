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
#include "chairsense/features.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "chairsense/error.hpp"

namespace chairsense::features {

using gamelog::EventKind;
using ingest::Channel;

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = [] {
    std::array<std::string, kFeatureCount> n;
    std::size_t i = 0;
    n[i++] = "lean_back";
    for (const char* sensor : {"acc", "gyro"}) {
      for (const char* axis : {"x", "y", "z"}) {
        n[i++] = std::string("med_") + sensor + "_" + axis + "_std";
      }
    }
    for (const char* sensor : {"acc", "gyro"}) {
      for (const char* axis : {"x", "y", "z"}) n[i++] = std::string("moving_") + sensor + "_" + axis;
    }
    for (const char* event : {"kill", "death", "shootout"}) {
      for (const char* sensor : {"acc", "gyro"}) {
        for (const char* axis : {"x", "y", "z"}) {
          n[i++] = std::string("moving_") + event + "_" + sensor + "_" + axis;
        }
      }
    }
    return n;
  }();
  return names;
}

std::size_t feature_index(std::string_view name) {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw NotFoundError("unknown feature '" + std::string(name) + "'");
}

namespace {

// Corrected two-pass sum of squared deviations over [first, first + n),
// computed on values shifted by `anchor`; mean_out is the shifted mean.
double exact_m2(const double* first, std::size_t n, double anchor, double& mean_out) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += first[i] - anchor;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (first[i] - anchor) - mean;
    ss += d * d;
    comp += d;
  }
  mean_out = mean;
  return std::max(0.0, ss - comp * comp / static_cast<double>(n));
}

}  // namespace

std::vector<double> rolling_std(std::span<const double> series, std::size_t window) {
  if (window < 2) throw ValidationError("rolling_std: window must be at least 2");
  if (series.size() < window) return {};
  const std::size_t n_out = series.size() - window + 1;
  const double w = static_cast<double>(window);
  const double denom = w - 1.0;
  std::vector<double> out(n_out);

  // The sliding state lives in coordinates shifted by a local anchor, so a
  // large offset does not swamp a small spread.
  double anchor = series[0];
  double mean = 0.0;
  double m2 = exact_m2(series.data(), window, anchor, mean);
  out[0] = std::sqrt(m2 / denom);

  // Sliding update; re-anchor with an exact pass every `window` steps and
  // whenever M2 collapses well below its recent peak (cancellation).
  constexpr double kCollapse = 1e-3;
  double peak = m2;
  std::size_t since_exact = 0;
  for (std::size_t j = 1; j < n_out; ++j) {
    if (++since_exact >= window) {
      anchor = series[j];
      m2 = exact_m2(series.data() + j, window, anchor, mean);
      peak = m2;
      since_exact = 0;
    } else {
      const double x_new = series[j + window - 1] - anchor;
      const double x_old = series[j - 1] - anchor;
      const double delta = x_new - x_old;
      const double new_mean = mean + delta / w;
      m2 += delta * ((x_new - new_mean) + (x_old - mean));
      mean = new_mean;
      peak = std::max(peak, m2);
      if (m2 < kCollapse * peak) {
        anchor = series[j];
        m2 = exact_m2(series.data() + j, window, anchor, mean);
        peak = m2;
        since_exact = 0;
      }
    }
    out[j] = std::sqrt(std::max(0.0, m2) / denom);
  }
  return out;
}

double median(std::span<const double> values) {
  if (values.empty()) throw ValidationError("median of empty series");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

MovementMask movement_mask(std::span<const double> std_series, double multiplier) {
  if (std_series.empty()) throw ValidationError("movement_mask: empty std series");
  if (!(multiplier > 0.0)) throw ValidationError("movement_mask: multiplier must be positive");
  const double threshold = multiplier * median(std_series);
  MovementMask mask(std_series.size());
  for (std::size_t i = 0; i < std_series.size(); ++i) {
    mask[i] = std_series[i] > threshold ? 1 : 0;
  }
  return mask;
}

double activity_fraction(std::span<const std::uint8_t> mask) {
  if (mask.empty()) return 0.0;
  const auto active = std::count_if(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; });
  return static_cast<double>(active) / static_cast<double>(mask.size());
}

double event_activity_fraction(std::span<const std::uint8_t> mask, std::span<const double> times,
                               std::span<const TimeWindow> windows, std::size_t* covered) {
  if (mask.size() != times.size()) {
    throw ValidationError("event_activity_fraction: mask and times differ in length");
  }
  std::vector<std::uint8_t> inside(mask.size(), 0);
  for (const auto& w : windows) {
    const auto lo = std::lower_bound(times.begin(), times.end(), w.begin);
    const auto hi = w.closed ? std::upper_bound(lo, times.end(), w.end)
                             : std::lower_bound(lo, times.end(), w.end);
    for (auto it = lo; it < hi; ++it) inside[static_cast<std::size_t>(it - times.begin())] = 1;
  }
  std::size_t in = 0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!inside[i]) continue;
    ++in;
    if (mask[i]) ++active;
  }
  if (covered != nullptr) *covered = in;
  return in == 0 ? 0.0 : static_cast<double>(active) / static_cast<double>(in);
}

double lean_back_fraction(std::span<const double> acc_z, std::size_t smoothing_window,
                          const LeanBackParams& params) {
  if (acc_z.empty()) throw ValidationError("lean_back_fraction: empty series");
  if (smoothing_window == 0) throw ValidationError("lean_back_fraction: window must be positive");
  const double med = median(acc_z);
  double theta = 0.0;
  if (params.absolute_threshold) {
    theta = *params.absolute_threshold;
  } else {
    std::vector<double> mags(acc_z.size());
    std::transform(acc_z.begin(), acc_z.end(), mags.begin(), [](double v) { return std::abs(v); });
    theta = params.relative_threshold * median(mags);
  }
  const double threshold = med - theta;

  // Trailing mean, expanding over the first window. Recomputed sums keep it drift-free.
  std::size_t below = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < acc_z.size(); ++i) {
    sum += acc_z[i];
    if (i >= smoothing_window) sum -= acc_z[i - smoothing_window];
    if (i % 4096 == 4095) {
      const std::size_t lo = i + 1 >= smoothing_window ? i + 1 - smoothing_window : 0;
      sum = 0.0;
      for (std::size_t k = lo; k <= i; ++k) sum += acc_z[k];
    }
    const std::size_t count = std::min(i + 1, smoothing_window);
    if (sum / static_cast<double>(count) < threshold) ++below;
  }
  return static_cast<double>(below) / static_cast<double>(acc_z.size());
}

namespace {

std::string session_label(const gamelog::Session& s) {
  return "session " + s.player_id + "#" + std::to_string(s.index);
}

std::vector<TimeWindow> reaction_windows(std::span<const gamelog::GameEvent> events,
                                         EventKind kind, double length, double session_end) {
  std::vector<TimeWindow> out;
  for (const auto& ev : events) {
    if (ev.kind != kind) continue;
    out.push_back({ev.t, std::min(ev.t + length, session_end), false});
  }
  return out;
}

}  // namespace

FeatureVector extract_features(const gamelog::Session& session, const FeatureParams& params) {
  const auto samples = session.samples();
  if (samples.size() < params.window) {
    throw ValidationError(session_label(session) + ": " + std::to_string(samples.size()) +
                          " samples, fewer than the " + std::to_string(params.window) +
                          "-sample window");
  }
  FeatureVector fv;
  fv.meta.player_id = session.player_id;
  fv.meta.session_index = session.index;
  fv.meta.start = session.start;
  fv.meta.label = session.label;
  fv.meta.kdr = session.kdr;
  fv.meta.age = session.age;
  fv.meta.gender = session.gender;

  // Mask entry j is aligned with the sample that ends its window.
  std::vector<double> mask_times;
  mask_times.reserve(samples.size() - params.window + 1);
  for (std::size_t i = params.window - 1; i < samples.size(); ++i) mask_times.push_back(samples[i].t);

  const auto kills = reaction_windows(session.events, EventKind::Kill, params.reaction_window,
                                      session.end());
  const auto deaths = reaction_windows(session.events, EventKind::Death, params.reaction_window,
                                       session.end());
  std::vector<TimeWindow> shootouts;
  for (const auto& iv : session.shootouts) shootouts.push_back({iv.start, iv.end, true});

  auto& v = fv.values;
  std::size_t kill_cover = 0;
  std::size_t death_cover = 0;
  std::size_t shootout_cover = 0;
  for (std::size_t c = 0; c < ingest::kMotionChannels.size(); ++c) {
    const Channel ch = ingest::kMotionChannels[c];
    const auto series = ingest::extract_channel(samples, ch);
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (!std::isfinite(series[i])) {
        throw ValidationError(session_label(session) + ": channel " +
                                  std::string(ingest::channel_name(ch)) + " missing or non-finite",
                              i);
      }
    }
    const auto sd = rolling_std(series, params.window);
    const auto mask = movement_mask(sd, params.movement_multiplier);
    v[1 + c] = median_std(sd);
    v[7 + c] = activity_fraction(mask);
    v[13 + c] = event_activity_fraction(mask, mask_times, kills, &kill_cover);
    v[19 + c] = event_activity_fraction(mask, mask_times, deaths, &death_cover);
    v[25 + c] = event_activity_fraction(mask, mask_times, shootouts, &shootout_cover);
    if (ch == Channel::AccZ) v[0] = lean_back_fraction(series, params.window, params.lean_back);
  }
  fv.meta.no_kill = kill_cover == 0;
  fv.meta.no_death = death_cover == 0;
  fv.meta.no_shootout = shootout_cover == 0;
  return fv;
}

std::size_t FeatureMatrix::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw NotFoundError("feature matrix has no column '" + std::string(name) + "'");
}

Eigen::VectorXd FeatureMatrix::labels() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(meta.size()));
  for (std::size_t i = 0; i < meta.size(); ++i) y[static_cast<Eigen::Index>(i)] = meta[i].label ? 1.0 : 0.0;
  return y;
}

std::vector<std::string> FeatureMatrix::players() const {
  std::set<std::string> ids;
  for (const auto& m : meta) ids.insert(m.player_id);
  return {ids.begin(), ids.end()};
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::string> names) const {
  FeatureMatrix out;
  out.meta = meta;
  out.values.resize(values.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    out.columns.push_back(names[j]);
    out.values.col(static_cast<Eigen::Index>(j)) =
        values.col(static_cast<Eigen::Index>(column_index(names[j])));
  }
  return out;
}

void FeatureMatrix::append(const FeatureMatrix& other) {
  if (other.columns != columns) throw ValidationError("append: column mismatch");
  Eigen::MatrixXd merged(values.rows() + other.values.rows(), values.cols());
  merged << values, other.values;
  values = std::move(merged);
  meta.insert(meta.end(), other.meta.begin(), other.meta.end());
}

FeatureMatrix empty_feature_matrix() {
  FeatureMatrix m;
  m.columns.assign(feature_names().begin(), feature_names().end());
  m.values.resize(0, static_cast<Eigen::Index>(kFeatureCount));
  return m;
}

FeatureMatrix build_feature_matrix(std::span<const gamelog::Session> sessions,
                                   const FeatureParams& params, unsigned threads) {
  std::vector<FeatureVector> rows(sessions.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_at = sessions.size();
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < sessions.size(); i = next++) {
      try {
        rows[i] = extract_features(sessions[i], params);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_at) {  // report the first failing session deterministically
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(sessions.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  FeatureMatrix m = empty_feature_matrix();
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kFeatureCount));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i].values[j];
    }
    m.meta.push_back(std::move(rows[i].meta));
  }
  return m;
}

CorrelationMatrix correlation_matrix(const FeatureMatrix& matrix, bool include_meta) {
  const auto n = static_cast<Eigen::Index>(matrix.rows());
  if (n < 2) throw ValidationError("correlation_matrix: need at least 2 rows");
  CorrelationMatrix out;
  out.names = matrix.columns;
  Eigen::MatrixXd data = matrix.values;
  if (include_meta) {
    Eigen::MatrixXd extra(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& m = matrix.meta[static_cast<std::size_t>(i)];
      extra.row(i) << m.kdr, m.age, static_cast<double>(m.gender), m.label ? 1.0 : 0.0;
    }
    Eigen::MatrixXd both(n, data.cols() + 4);
    both << data, extra;
    data = std::move(both);
    for (const char* name : {"kdr", "age", "gender", "exp_gt_1000h"}) out.names.emplace_back(name);
  }
  const Eigen::Index p = data.cols();
  const Eigen::RowVectorXd mean = data.colwise().mean();
  Eigen::MatrixXd centered = data.rowwise() - mean;
  Eigen::VectorXd norm = centered.colwise().norm().transpose();
  out.values = Eigen::MatrixXd::Identity(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    if (norm[a] == 0.0) {
      out.warnings.push_back("column '" + out.names[static_cast<std::size_t>(a)] +
                             "' has zero variance; correlations set to 0");
    }
  }
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = a + 1; b < p; ++b) {
      double r = 0.0;
      if (norm[a] > 0.0 && norm[b] > 0.0) {
        r = centered.col(a).dot(centered.col(b)) / (norm[a] * norm[b]);
        r = std::clamp(r, -1.0, 1.0);
      }
      out.values(a, b) = r;
      out.values(b, a) = r;
    }
  }
  return out;
}

}  // namespace chairsense::features
