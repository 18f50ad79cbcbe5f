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
#include <filesystem>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "chairsense/telemetry.hpp"

namespace chairsense::ingest {

struct AppendAck {
  std::size_t accepted = 0;
  bool duplicate = false;

  bool operator==(const AppendAck&) const = default;
};

/// Per-player append-only record logs under one directory.
///
/// Layout: `<dir>/<hex(player_id)>.log` holds length-prefixed, CRC-checked
/// records (one per accepted batch); `<dir>/index.json` lists players and
/// is refreshed on every new player and on flush. The logs are authoritative.
///
/// Appends to one player are serialized; different players append in
/// parallel. load_stream() sees the prefix committed when it was called.
class StreamStore {
 public:
  explicit StreamStore(std::filesystem::path directory);
  ~StreamStore();
  StreamStore(StreamStore&&) noexcept;
  StreamStore& operator=(StreamStore&&) noexcept;
  StreamStore(const StreamStore&) = delete;
  StreamStore& operator=(const StreamStore&) = delete;

  /// Throws ValidationError for invalid batches and OrderingError when the
  /// batch starts at or before the player's last stored timestamp. A batch
  /// whose (device_id, seq) was already accepted is acknowledged as duplicate.
  AppendAck append_batch(const TelemetryBatch& batch);

  /// Throws NotFoundError for unknown players and IntegrityError for damaged logs.
  TelemetryStream load_stream(std::string_view player_id) const;

  /// Sorted player ids.
  std::vector<std::string> players() const;
  bool contains(std::string_view player_id) const;

  void flush_index() const;
  const std::filesystem::path& directory() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct IngestSummary {
  std::size_t batches = 0;
  std::size_t accepted_samples = 0;
  std::size_t duplicates = 0;
};

/// Appends every line of a JSON-lines stream (one TelemetryBatch per line).
/// Parse and validation errors are rethrown as ParseError with the line number.
IngestSummary ingest_jsonl(StreamStore& store, std::istream& lines);
IngestSummary ingest_jsonl_file(StreamStore& store, const std::filesystem::path& path);

}  // namespace chairsense::ingest
