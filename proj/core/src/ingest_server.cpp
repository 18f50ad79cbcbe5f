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
#include "chairsense/ingest_server.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>
#include <thread>

#include "chairsense/error.hpp"

namespace chairsense::ingest {

namespace {

void reply_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

struct IngestServer::Impl {
  StreamStore& store;
  httplib::Server server;
  std::thread worker;

  explicit Impl(StreamStore& s) : store(s) {
    server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
      reply_json(res, 200, {{"status", "ok"}});
    });
    server.Post("/v1/telemetry", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const TelemetryBatch batch = parse_telemetry_batch(req.body);
        const AppendAck ack = store.append_batch(batch);
        reply_json(res, 200, {{"accepted", ack.accepted}, {"duplicate", ack.duplicate}});
      } catch (const ValidationError& e) {
        nlohmann::json body{{"error", e.what()}};
        if (e.index() != ValidationError::kNoIndex) body["index"] = e.index();
        reply_json(res, 400, body);
      } catch (const ParseError& e) {
        reply_json(res, 400, {{"error", e.what()}});
      } catch (const OrderingError& e) {
        reply_json(res, 409, {{"error", e.what()}});
      } catch (const std::exception& e) {
        reply_json(res, 500, {{"error", e.what()}});
      }
    });
  }
};

IngestServer::IngestServer(StreamStore& store) : impl_(std::make_unique<Impl>(store)) {}

IngestServer::~IngestServer() { stop(); }

int IngestServer::start(const std::string& host, int port) {
  if (running()) throw Error("ingest server already running");
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void IngestServer::serve_forever(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw Error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void IngestServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

bool IngestServer::running() const { return impl_->server.is_running(); }

}  // namespace chairsense::ingest
