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

#include <memory>
#include <string>

#include "chairsense/stream_store.hpp"

namespace chairsense::ingest {

/// HTTP front end for a StreamStore.
///
///   POST /v1/telemetry  200 {"accepted":N,"duplicate":bool} | 400 invalid | 409 out of order
///   GET  /v1/health     200
class IngestServer {
 public:
  explicit IngestServer(StreamStore& store);
  ~IngestServer();
  IngestServer(const IngestServer&) = delete;
  IngestServer& operator=(const IngestServer&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws Error if binding fails.
  int start(const std::string& host, int port);

  /// Binds and serves on the calling thread until stop() is called elsewhere.
  void serve_forever(const std::string& host, int port);

  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace chairsense::ingest
