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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chairsense::ingest {

/// One IMU reading. Values are raw device units; no calibration is applied.
struct SensorSample {
  double t = 0.0;  ///< seconds since stream start, device clock
  std::array<double, 3> acc{};
  std::array<double, 3> gyro{};
  std::array<double, 3> mag{};

  bool operator==(const SensorSample&) const = default;
};

enum class Channel : std::uint8_t { AccX, AccY, AccZ, GyroX, GyroY, GyroZ, MagX, MagY, MagZ };

inline constexpr std::array<Channel, 6> kMotionChannels = {
    Channel::AccX, Channel::AccY, Channel::AccZ, Channel::GyroX, Channel::GyroY, Channel::GyroZ};

std::string_view channel_name(Channel c) noexcept;

constexpr double channel_value(const SensorSample& s, Channel c) noexcept {
  const auto i = static_cast<std::size_t>(c);
  if (i < 3) return s.acc[i];
  if (i < 6) return s.gyro[i - 3];
  return s.mag[i - 6];
}

/// Copies one channel out of a sample range.
std::vector<double> extract_channel(std::span<const SensorSample> samples, Channel c);

/// One wire message: about one second of samples from one device.
struct TelemetryBatch {
  std::string player_id;
  std::string device_id;
  std::uint64_t seq = 0;
  std::vector<SensorSample> samples;

  double span() const noexcept {
    return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
  }
  bool operator==(const TelemetryBatch&) const = default;
};

struct TelemetryStream {
  std::string player_id;
  std::vector<SensorSample> samples;
  double nominal_rate = 100.0;  ///< samples per second

  double duration() const noexcept {
    return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
  }
};

/// Parses and validates one JSON batch. Throws ParseError on malformed JSON and
/// ValidationError (carrying the sample index) on schema or ordering violations.
TelemetryBatch parse_telemetry_batch(std::string_view payload);

/// Compact JSON in the wire schema; doubles are written in shortest round-trip form.
std::string serialize_telemetry_batch(const TelemetryBatch& batch);

/// Checks finiteness, non-negative time and strictly increasing timestamps.
void validate_samples(std::span<const SensorSample> samples);
void validate_stream(const TelemetryStream& stream);

/// Splits a stream into consecutive batches of `samples_per_batch` samples, seq 0, 1, ...
std::vector<TelemetryBatch> chunk_stream(const TelemetryStream& stream, std::string device_id,
                                         std::size_t samples_per_batch);

}  // namespace chairsense::ingest
