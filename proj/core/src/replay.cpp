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
#include "chairsense/replay.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>
#include <vector>

#include "chairsense/error.hpp"

namespace chairsense::replay {

ReplaySummary& ReplaySummary::operator+=(const ReplaySummary& o) noexcept {
  players += o.players;
  batches += o.batches;
  accepted_batches += o.accepted_batches;
  duplicate_batches += o.duplicate_batches;
  accepted_samples += o.accepted_samples;
  return *this;
}

ReplaySummary replay_stream(const ingest::TelemetryStream& stream, const ReplayOptions& options,
                            std::size_t player_index, std::uint64_t first_seq) {
  if (!(options.batch_seconds > 0.0)) throw ValidationError("batch_seconds must be positive");
  const auto per_batch =
      static_cast<std::size_t>(std::max(1.0, std::round(options.batch_seconds * stream.nominal_rate)));
  const auto batches = ingest::chunk_stream(stream, options.device_prefix + stream.player_id, per_batch);

  httplib::Client client(options.host, options.port);
  const auto timeout = std::chrono::milliseconds(options.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_keep_alive(true);

  ReplaySummary summary;
  summary.players = 1;
  for (const auto& batch : batches) {
    if (batch.seq < first_seq) continue;
    const auto res = client.Post("/v1/telemetry", ingest::serialize_telemetry_batch(batch), "application/json");
    if (!res) {
      throw TransportError("posting batch " + std::to_string(batch.seq) + " of player " + stream.player_id +
                               " failed: " + httplib::to_string(res.error()),
                           player_index, batch.seq);
    }
    if (res->status >= 500) {
      throw TransportError("server error " + std::to_string(res->status) + " for batch " +
                               std::to_string(batch.seq) + " of player " + stream.player_id + ": " + res->body,
                           player_index, batch.seq);
    }
    if (res->status != 200) {
      throw Error("server rejected batch " + std::to_string(batch.seq) + " of player " + stream.player_id +
                  " with status " + std::to_string(res->status) + ": " + res->body);
    }
    ++summary.batches;
    try {
      const auto body = nlohmann::json::parse(res->body);
      if (body.at("duplicate").get<bool>()) {
        ++summary.duplicate_batches;
      } else {
        ++summary.accepted_batches;
        summary.accepted_samples += body.at("accepted").get<std::size_t>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("malformed acknowledgement: ") + e.what(), player_index, batch.seq);
    }
  }
  return summary;
}

ReplaySummary replay_streams(std::span<const ingest::TelemetryStream> streams, const ReplayOptions& options) {
  ReplaySummary total;
  std::mutex mutex;
  std::exception_ptr error;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < streams.size() && !failed; i = next++) {
      try {
        const ReplaySummary s = replay_stream(streams[i], options, i);
        std::lock_guard lock(mutex);
        total += s;
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.concurrency, static_cast<unsigned>(std::max<std::size_t>(1, streams.size()))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return total;
}

ReplaySummary replay_cohort(const synth::SyntheticCohort& cohort, const ReplayOptions& options) {
  std::vector<ingest::TelemetryStream> streams;
  streams.reserve(cohort.players.size());
  for (const auto& p : cohort.players) streams.push_back(p.stream);
  return replay_streams(streams, options);
}

}  // namespace chairsense::replay
