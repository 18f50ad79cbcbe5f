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
#include <chairsense/error.hpp>
#include <chairsense/ingest_server.hpp>
#include <chairsense/replay.hpp>
#include <chairsense/stream_store.hpp>
#include <chairsense/telemetry.hpp>
#include <gtest/gtest.h>
#include <httplib.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "support/helpers.hpp"

using namespace chairsense;
using namespace chairsense::ingest;
using testing_support::random_stream;
using testing_support::TempDir;

namespace {

const char* kMinimal =
    R"({"player_id":"p1","device_id":"d1","seq":0,"samples":[)"
    R"({"t":0.00,"acc":[0,0,9.8],"gyro":[0,0,0],"mag":[1,0,0]},)"
    R"({"t":0.01,"acc":[0,0,9.8],"gyro":[0,0,0],"mag":[1,0,0]}]})";

TelemetryBatch batch_of(const TelemetryStream& s, std::size_t first, std::size_t count, std::uint64_t seq,
                        const std::string& device = "d1") {
  TelemetryBatch b;
  b.player_id = s.player_id;
  b.device_id = device;
  b.seq = seq;
  b.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(first),
                   s.samples.begin() + static_cast<std::ptrdiff_t>(first + count));
  return b;
}

}  // namespace

TEST(ParseBatch, MinimalPayload) {
  const TelemetryBatch b = parse_telemetry_batch(kMinimal);
  EXPECT_EQ(b.player_id, "p1");
  EXPECT_EQ(b.device_id, "d1");
  EXPECT_EQ(b.seq, 0u);
  ASSERT_EQ(b.samples.size(), 2u);
  EXPECT_DOUBLE_EQ(b.span(), 0.01);
  EXPECT_DOUBLE_EQ(b.samples[0].acc[2], 9.8);
  EXPECT_DOUBLE_EQ(b.samples[1].mag[0], 1.0);
}

TEST(ParseBatch, DuplicateTimestampNamesIndex) {
  const std::string payload =
      R"({"player_id":"p1","device_id":"d1","seq":0,"samples":[)"
      R"({"t":0.01,"acc":[0,0,9.8],"gyro":[0,0,0],"mag":[1,0,0]},)"
      R"({"t":0.01,"acc":[0,0,9.8],"gyro":[0,0,0],"mag":[1,0,0]}]})";
  try {
    parse_telemetry_batch(payload);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_NE(std::string(e.what()).find("duplicate timestamp"), std::string::npos);
  }
}

TEST(ParseBatch, NullChannelIsNonFinite) {
  const std::string payload =
      R"({"player_id":"p1","device_id":"d1","seq":0,"samples":[)"
      R"({"t":0.0,"acc":[0,null,9.8],"gyro":[0,0,0],"mag":[1,0,0]}]})";
  try {
    parse_telemetry_batch(payload);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.index(), 0u);
    EXPECT_NE(std::string(e.what()).find("acc"), std::string::npos);
  }
}

TEST(ParseBatch, MalformedJsonIsParseError) {
  EXPECT_THROW(parse_telemetry_batch("{\"player_id\": "), ParseError);
  EXPECT_THROW(parse_telemetry_batch("[]"), ValidationError);
}

TEST(ParseBatch, MissingFieldAndNegativeTime) {
  EXPECT_THROW(parse_telemetry_batch(R"({"player_id":"p1","seq":0,"samples":[]})"), ValidationError);
  const std::string negative =
      R"({"player_id":"p1","device_id":"d","seq":0,"samples":[)"
      R"({"t":-0.5,"acc":[0,0,0],"gyro":[0,0,0],"mag":[0,0,0]}]})";
  EXPECT_THROW(parse_telemetry_batch(negative), ValidationError);
}

TEST(ParseBatch, SerializeRoundTripIsExact) {
  const TelemetryStream s = random_stream("player-7", 150, 11);
  const TelemetryBatch b = batch_of(s, 0, 150, 42);
  const TelemetryBatch back = parse_telemetry_batch(serialize_telemetry_batch(b));
  EXPECT_EQ(back, b);
  EXPECT_EQ(serialize_telemetry_batch(back), serialize_telemetry_batch(b));
}

TEST(ChunkStream, SequentialBatches) {
  const TelemetryStream s = random_stream("p", 1005, 3);
  const auto batches = chunk_stream(s, "dev", 100);
  ASSERT_EQ(batches.size(), 11u);
  EXPECT_EQ(batches.back().samples.size(), 5u);
  for (std::size_t i = 0; i < batches.size(); ++i) EXPECT_EQ(batches[i].seq, i);
  EXPECT_THROW(chunk_stream(s, "dev", 0), ValidationError);
}

TEST(StreamStore, AppendAcknowledgesAndDeduplicates) {
  TempDir dir;
  StreamStore store(dir.path());
  const TelemetryStream s = random_stream("p1", 300, 5);
  EXPECT_EQ(store.append_batch(batch_of(s, 0, 100, 0)), (AppendAck{100, false}));
  EXPECT_EQ(store.append_batch(batch_of(s, 0, 100, 0)), (AppendAck{0, true}));
  EXPECT_EQ(store.append_batch(batch_of(s, 100, 100, 1)), (AppendAck{100, false}));
}

TEST(StreamStore, RejectsBatchStartingBeforeStoredMaximum) {
  TempDir dir;
  StreamStore store(dir.path());
  const TelemetryStream s = random_stream("p1", 300, 5);
  store.append_batch(batch_of(s, 0, 100, 0));
  EXPECT_THROW(store.append_batch(batch_of(s, 50, 100, 1)), OrderingError);
  EXPECT_EQ(store.load_stream("p1").samples.size(), 100u);
}

TEST(StreamStore, LoadIsConcatenation) {
  TempDir dir;
  const TelemetryStream s = random_stream("p1", 1000, 9);
  {
    StreamStore store(dir.path());
    for (std::uint64_t seq = 0; seq < 10; ++seq) store.append_batch(batch_of(s, seq * 100, 100, seq));
  }
  StreamStore reopened(dir.path());
  const TelemetryStream back = reopened.load_stream("p1");
  ASSERT_EQ(back.samples.size(), 1000u);
  EXPECT_NEAR(back.duration(), 9.99, 1e-9);
  EXPECT_EQ(back.samples, s.samples);
  EXPECT_EQ(reopened.players(), std::vector<std::string>{"p1"});
  // Dedup state survives reopening.
  EXPECT_TRUE(reopened.append_batch(batch_of(s, 0, 100, 0)).duplicate);
}

TEST(StreamStore, ReplayKTimesEqualsOnce) {
  TempDir once_dir;
  TempDir many_dir;
  const TelemetryStream s = random_stream("p", 500, 21);
  StreamStore once(once_dir.path());
  StreamStore many(many_dir.path());
  for (std::uint64_t seq = 0; seq < 5; ++seq) once.append_batch(batch_of(s, seq * 100, 100, seq));
  for (int k = 0; k < 3; ++k)
    for (std::uint64_t seq = 0; seq < 5; ++seq) many.append_batch(batch_of(s, seq * 100, 100, seq));
  EXPECT_EQ(once.load_stream("p").samples, many.load_stream("p").samples);
}

TEST(StreamStore, UnknownPlayerIsNotFound) {
  TempDir dir;
  StreamStore store(dir.path());
  EXPECT_THROW(store.load_stream("zz"), NotFoundError);
  EXPECT_FALSE(store.contains("zz"));
}

TEST(StreamStore, TruncatedRecordIsIntegrityError) {
  TempDir dir;
  const TelemetryStream s = random_stream("p1", 200, 4);
  {
    StreamStore store(dir.path());
    store.append_batch(batch_of(s, 0, 100, 0));
    store.append_batch(batch_of(s, 100, 100, 1));
  }
  std::filesystem::path log;
  for (const auto& e : std::filesystem::directory_iterator(dir.path()))
    if (e.path().extension() == ".log") log = e.path();
  ASSERT_FALSE(log.empty());
  const auto size = std::filesystem::file_size(log);
  std::filesystem::resize_file(log, size - 37);
  StreamStore store(dir.path());
  try {
    store.load_stream("p1");
    FAIL() << "expected IntegrityError";
  } catch (const IntegrityError& e) {
    EXPECT_EQ(e.offset(), size / 2);  // both records have the same size
  }
}

TEST(StreamStore, CorruptedPayloadFailsChecksum) {
  TempDir dir;
  const TelemetryStream s = random_stream("p1", 100, 4);
  {
    StreamStore store(dir.path());
    store.append_batch(batch_of(s, 0, 100, 0));
  }
  std::filesystem::path log;
  for (const auto& e : std::filesystem::directory_iterator(dir.path()))
    if (e.path().extension() == ".log") log = e.path();
  std::fstream f(log, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(200);
  f.put('\x7f');
  f.close();
  StreamStore store(dir.path());
  EXPECT_THROW(store.load_stream("p1"), IntegrityError);
}

TEST(StreamStore, JsonLinesIngestReportsLine) {
  TempDir dir;
  StreamStore store(dir.path());
  const TelemetryStream s = random_stream("p1", 200, 8);
  std::stringstream lines;
  lines << serialize_telemetry_batch(batch_of(s, 0, 100, 0)) << "\n\n"
        << serialize_telemetry_batch(batch_of(s, 0, 100, 0)) << "\n"
        << serialize_telemetry_batch(batch_of(s, 100, 100, 1)) << "\n";
  const IngestSummary summary = ingest_jsonl(store, lines);
  EXPECT_EQ(summary.batches, 3u);
  EXPECT_EQ(summary.accepted_samples, 200u);
  EXPECT_EQ(summary.duplicates, 1u);

  std::stringstream bad;
  bad << serialize_telemetry_batch(batch_of(s, 0, 100, 0)) << "\n{not json}\n";
  try {
    ingest_jsonl(store, bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(StreamStore, ConcurrentPlayersStayOrdered) {
  TempDir dir;
  StreamStore store(dir.path());
  std::vector<TelemetryStream> streams;
  for (int p = 0; p < 4; ++p) streams.push_back(random_stream("p" + std::to_string(p), 1000, 100 + p));
  std::vector<std::jthread> writers;
  for (const auto& s : streams) {
    writers.emplace_back([&store, &s] {
      for (std::uint64_t seq = 0; seq < 10; ++seq) store.append_batch(batch_of(s, seq * 100, 100, seq));
    });
  }
  writers.clear();
  for (const auto& s : streams) EXPECT_EQ(store.load_stream(s.player_id).samples, s.samples);
}

class IngestHttp : public ::testing::Test {
 protected:
  void SetUp() override {
    store_ = std::make_unique<StreamStore>(dir_.path());
    server_ = std::make_unique<IngestServer>(*store_);
    port_ = server_->start("127.0.0.1", 0);
  }
  void TearDown() override { server_->stop(); }

  TempDir dir_;
  std::unique_ptr<StreamStore> store_;
  std::unique_ptr<IngestServer> server_;
  int port_ = 0;
};

TEST_F(IngestHttp, ReplayPostsOneSecondBatchesAndIsIdempotent) {
  const TelemetryStream s = random_stream("p1", 1000, 77);
  replay::ReplayOptions opts;
  opts.port = port_;
  const auto first = replay::replay_stream(s, opts);
  EXPECT_EQ(first.batches, 10u);
  EXPECT_EQ(first.accepted_batches, 10u);
  EXPECT_EQ(first.accepted_samples, 1000u);
  const auto second = replay::replay_stream(s, opts);
  EXPECT_EQ(second.duplicate_batches, 10u);
  EXPECT_EQ(second.accepted_samples, 0u);
  EXPECT_EQ(store_->load_stream("p1").samples, s.samples);
}

TEST_F(IngestHttp, StatusCodes) {
  httplib::Client client("127.0.0.1", port_);
  auto health = client.Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);

  auto ok = client.Post("/v1/telemetry", kMinimal, "application/json");
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->status, 200);
  const auto body = nlohmann::json::parse(ok->body);
  EXPECT_EQ(body.at("accepted").get<int>(), 2);
  EXPECT_FALSE(body.at("duplicate").get<bool>());

  auto bad = client.Post("/v1/telemetry", "{oops", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  const std::string earlier =
      R"({"player_id":"p1","device_id":"d1","seq":1,"samples":[)"
      R"({"t":0.005,"acc":[0,0,9.8],"gyro":[0,0,0],"mag":[1,0,0]}]})";
  auto conflict = client.Post("/v1/telemetry", earlier, "application/json");
  ASSERT_TRUE(conflict);
  EXPECT_EQ(conflict->status, 409);
}

TEST(Replay, ServerDownIsTransportErrorWithResumePoint) {
  TempDir dir;
  int port = 0;
  {
    StreamStore store(dir.path());
    IngestServer server(store);
    port = server.start("127.0.0.1", 0);
    server.stop();
  }
  const TelemetryStream s = random_stream("p1", 300, 1);
  replay::ReplayOptions opts;
  opts.port = port;
  opts.timeout_ms = 500;
  try {
    replay::replay_stream(s, opts, 3);
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_EQ(e.player_index(), 3u);
    EXPECT_EQ(e.resume_seq(), 0u);
  }
}
