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
#include "chairsense/telemetry.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "chairsense/error.hpp"

namespace chairsense::ingest {

using nlohmann::json;

std::string_view channel_name(Channel c) noexcept {
  static constexpr std::array<std::string_view, 9> names = {
      "acc_x", "acc_y", "acc_z", "gyro_x", "gyro_y", "gyro_z", "mag_x", "mag_y", "mag_z"};
  return names[static_cast<std::size_t>(c)];
}

std::vector<double> extract_channel(std::span<const SensorSample> samples, Channel c) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(channel_value(s, c));
  return out;
}

namespace {

const json& require(const json& obj, const char* key, std::size_t index) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(std::string("missing field '") + key + "'", index);
  }
  return *it;
}

double finite_number(const json& v, const std::string& what, std::size_t index) {
  if (!v.is_number()) throw ValidationError("non-finite value for " + what, index);
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError("non-finite value for " + what, index);
  return d;
}

std::array<double, 3> triple(const json& sample, const char* key, std::size_t index) {
  const json& v = require(sample, key, index);
  if (!v.is_array() || v.size() != 3) {
    throw ValidationError(std::string("field '") + key + "' must be an array of 3 numbers",
                          index);
  }
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = finite_number(v[k], std::string(key) + "[" + std::to_string(k) + "]", index);
  }
  return out;
}

json triple_json(const std::array<double, 3>& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

void validate_samples(std::span<const SensorSample> samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.t) || s.t < 0.0) {
      throw ValidationError("timestamp must be finite and non-negative", i);
    }
    for (std::size_t c = 0; c < 9; ++c) {
      if (!std::isfinite(channel_value(s, static_cast<Channel>(c)))) {
        throw ValidationError(
            "non-finite channel " + std::string(channel_name(static_cast<Channel>(c))), i);
      }
    }
    if (i > 0 && !(s.t > samples[i - 1].t)) {
      throw ValidationError(s.t == samples[i - 1].t ? "duplicate timestamp"
                                                    : "timestamps not increasing",
                            i);
    }
  }
}

void validate_stream(const TelemetryStream& stream) {
  if (!(stream.nominal_rate > 0.0)) throw ValidationError("nominal_rate must be positive");
  validate_samples(stream.samples);
}

TelemetryBatch parse_telemetry_batch(std::string_view payload) {
  json doc;
  try {
    doc = json::parse(payload.begin(), payload.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("batch must be a JSON object");

  TelemetryBatch batch;
  const json& pid = require(doc, "player_id", ValidationError::kNoIndex);
  const json& did = require(doc, "device_id", ValidationError::kNoIndex);
  const json& seq = require(doc, "seq", ValidationError::kNoIndex);
  const json& samples = require(doc, "samples", ValidationError::kNoIndex);
  if (!pid.is_string() || pid.get_ref<const std::string&>().empty()) {
    throw ValidationError("player_id must be a non-empty string");
  }
  if (!did.is_string()) throw ValidationError("device_id must be a string");
  if (!seq.is_number_unsigned()) throw ValidationError("seq must be a non-negative integer");
  if (!samples.is_array() || samples.empty()) {
    throw ValidationError("samples must be a non-empty array");
  }
  batch.player_id = pid.get<std::string>();
  batch.device_id = did.get<std::string>();
  batch.seq = seq.get<std::uint64_t>();
  batch.samples.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const json& js = samples[i];
    if (!js.is_object()) throw ValidationError("sample must be an object", i);
    SensorSample s;
    s.t = finite_number(require(js, "t", i), "t", i);
    s.acc = triple(js, "acc", i);
    s.gyro = triple(js, "gyro", i);
    s.mag = triple(js, "mag", i);
    batch.samples.push_back(s);
  }
  validate_samples(batch.samples);
  return batch;
}

std::string serialize_telemetry_batch(const TelemetryBatch& batch) {
  json samples = json::array();
  for (const auto& s : batch.samples) {
    samples.push_back(json{{"t", s.t},
                           {"acc", triple_json(s.acc)},
                           {"gyro", triple_json(s.gyro)},
                           {"mag", triple_json(s.mag)}});
  }
  json doc{{"player_id", batch.player_id},
           {"device_id", batch.device_id},
           {"seq", batch.seq},
           {"samples", std::move(samples)}};
  return doc.dump();
}

std::vector<TelemetryBatch> chunk_stream(const TelemetryStream& stream, std::string device_id,
                                         std::size_t samples_per_batch) {
  if (samples_per_batch == 0) throw ValidationError("samples_per_batch must be positive");
  std::vector<TelemetryBatch> out;
  const auto& all = stream.samples;
  for (std::size_t i = 0, seq = 0; i < all.size(); i += samples_per_batch, ++seq) {
    const auto end = std::min(all.size(), i + samples_per_batch);
    TelemetryBatch b;
    b.player_id = stream.player_id;
    b.device_id = device_id;
    b.seq = seq;
    b.samples.assign(all.begin() + static_cast<std::ptrdiff_t>(i),
                     all.begin() + static_cast<std::ptrdiff_t>(end));
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace chairsense::ingest
