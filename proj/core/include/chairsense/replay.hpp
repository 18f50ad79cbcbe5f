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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "chairsense/synth.hpp"
#include "chairsense/telemetry.hpp"

namespace chairsense::replay {

struct ReplayOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  double batch_seconds = 1.0;
  std::string device_prefix = "chair-";  ///< device id = prefix + player id
  unsigned concurrency = 1;              ///< players streamed in parallel
  int timeout_ms = 5000;
};

struct ReplaySummary {
  std::size_t players = 0;
  std::size_t batches = 0;
  std::size_t accepted_batches = 0;
  std::size_t duplicate_batches = 0;
  std::size_t accepted_samples = 0;

  ReplaySummary& operator+=(const ReplaySummary& other) noexcept;
};

/// Posts the stream in order as batches of batch_seconds, starting at batch
/// `first_seq`. Connection failures and 5xx replies throw TransportError
/// carrying the sequence number to resume from; other rejections throw Error.
ReplaySummary replay_stream(const ingest::TelemetryStream& stream, const ReplayOptions& options,
                            std::size_t player_index = 0, std::uint64_t first_seq = 0);

/// Each stream is posted in order; up to options.concurrency streams at once.
ReplaySummary replay_streams(std::span<const ingest::TelemetryStream> streams, const ReplayOptions& options);

ReplaySummary replay_cohort(const synth::SyntheticCohort& cohort, const ReplayOptions& options);

}  // namespace chairsense::replay
