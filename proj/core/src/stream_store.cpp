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
#include "chairsense/stream_store.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <nlohmann/json.hpp>
#include <set>
#include <utility>

#include "chairsense/error.hpp"
#include "text.hpp"

namespace chairsense::ingest {

static_assert(std::endian::native == std::endian::little,
              "record encoding assumes a little-endian host");

namespace {

constexpr std::uint32_t kMagic = 0x31525343;  // "CSR1"
constexpr std::size_t kHeaderSize = 12;       // magic, payload length, crc32
constexpr std::size_t kSampleBytes = 10 * sizeof(double);

std::string hex_encode(std::string_view s) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(s.size() * 2);
  for (unsigned char c : s) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

std::optional<std::string> hex_decode(std::string_view s) {
  if (s.empty() || s.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    const int hi = nibble(s[i]);
    const int lo = nibble(s[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>(hi * 16 + lo));
  }
  return out;
}

template <class T>
void put(std::string& buf, const T& v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.append(raw, sizeof(T));
}

template <class T>
T get(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

std::uint32_t crc32_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

std::string encode_record(const TelemetryBatch& batch) {
  std::string payload;
  payload.reserve(16 + batch.device_id.size() + batch.samples.size() * kSampleBytes);
  put(payload, static_cast<std::uint16_t>(batch.device_id.size()));
  payload.append(batch.device_id);
  put(payload, batch.seq);
  put(payload, static_cast<std::uint32_t>(batch.samples.size()));
  for (const auto& s : batch.samples) {
    put(payload, s.t);
    for (double v : s.acc) put(payload, v);
    for (double v : s.gyro) put(payload, v);
    for (double v : s.mag) put(payload, v);
  }
  std::string record;
  record.reserve(kHeaderSize + payload.size());
  put(record, kMagic);
  put(record, static_cast<std::uint32_t>(payload.size()));
  put(record, crc32_of(payload));
  record.append(payload);
  return record;
}

struct DecodedRecord {
  std::string device_id;
  std::uint64_t seq = 0;
  std::vector<SensorSample> samples;
};

/// Walks every record in `bytes`, calling `sink` per record. Throws IntegrityError.
template <class Sink>
void scan_records(std::string_view bytes, Sink&& sink) {
  std::uint64_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t remaining = bytes.size() - offset;
    if (remaining < kHeaderSize) throw IntegrityError("truncated record header", offset);
    const char* p = bytes.data() + offset;
    if (get<std::uint32_t>(p) != kMagic) throw IntegrityError("bad record magic", offset);
    const auto len = get<std::uint32_t>(p + 4);
    const auto crc = get<std::uint32_t>(p + 8);
    if (remaining - kHeaderSize < len) throw IntegrityError("truncated record payload", offset);
    const std::string_view payload(p + kHeaderSize, len);
    if (crc32_of(payload) != crc) throw IntegrityError("record checksum mismatch", offset);

    DecodedRecord rec;
    const char* q = payload.data();
    const char* end = q + payload.size();
    auto need = [&](std::size_t n) {
      if (static_cast<std::size_t>(end - q) < n) {
        throw IntegrityError("record payload shorter than declared contents", offset);
      }
    };
    need(2);
    const auto id_len = get<std::uint16_t>(q);
    q += 2;
    need(id_len);
    rec.device_id.assign(q, id_len);
    q += id_len;
    need(12);
    rec.seq = get<std::uint64_t>(q);
    q += 8;
    const auto count = get<std::uint32_t>(q);
    q += 4;
    if (static_cast<std::size_t>(end - q) != std::size_t{count} * kSampleBytes) {
      throw IntegrityError("record sample count does not match payload size", offset);
    }
    rec.samples.resize(count);
    for (auto& s : rec.samples) {
      s.t = get<double>(q);
      q += 8;
      for (auto* arr : {&s.acc, &s.gyro, &s.mag}) {
        for (double& v : *arr) {
          v = get<double>(q);
          q += 8;
        }
      }
    }
    sink(offset, std::move(rec));
    offset += kHeaderSize + len;
  }
}

struct PlayerLog {
  std::mutex mutex;
  std::filesystem::path path;
  bool scanned = false;
  std::uint64_t committed_bytes = 0;
  std::size_t sample_count = 0;
  std::size_t record_count = 0;
  double last_t = -1.0;
  std::set<std::pair<std::string, std::uint64_t>> seen;
  std::ofstream out;

  // Caller holds mutex.
  void ensure_scanned() {
    if (scanned) return;
    if (std::filesystem::exists(path)) {
      const std::string bytes = text::read_file(path);
      scan_records(bytes, [&](std::uint64_t offset, DecodedRecord&& rec) {
        if (!rec.samples.empty() && !(rec.samples.front().t > last_t)) {
          throw IntegrityError("record breaks timestamp order", offset);
        }
        seen.emplace(rec.device_id, rec.seq);
        sample_count += rec.samples.size();
        ++record_count;
        if (!rec.samples.empty()) last_t = rec.samples.back().t;
      });
      committed_bytes = bytes.size();
    }
    scanned = true;
  }
};

}  // namespace

struct StreamStore::Impl {
  std::filesystem::path dir;
  mutable std::mutex map_mutex;
  std::map<std::string, std::unique_ptr<PlayerLog>, std::less<>> logs;

  PlayerLog* find(std::string_view player_id) const {
    std::lock_guard lock(map_mutex);
    auto it = logs.find(player_id);
    return it == logs.end() ? nullptr : it->second.get();
  }

  PlayerLog& get_or_create(const std::string& player_id) {
    bool created = false;
    PlayerLog* log = nullptr;
    {
      std::lock_guard lock(map_mutex);
      auto& slot = logs[player_id];
      if (!slot) {
        slot = std::make_unique<PlayerLog>();
        slot->path = dir / (hex_encode(player_id) + ".log");
        created = true;
      }
      log = slot.get();
    }
    if (created) write_index();
    return *log;
  }

  void write_index() const {
    nlohmann::json players = nlohmann::json::object();
    {
      std::lock_guard lock(map_mutex);
      for (const auto& [id, log] : logs) {
        std::unique_lock plock(log->mutex, std::try_to_lock);
        nlohmann::json entry{{"file", log->path.filename().string()}};
        if (plock.owns_lock() && log->scanned) {
          entry["records"] = log->record_count;
          entry["samples"] = log->sample_count;
          entry["bytes"] = log->committed_bytes;
        }
        players[id] = std::move(entry);
      }
    }
    nlohmann::json doc{{"format", "chairsense.store"}, {"version", 1}, {"players", players}};
    text::write_file_atomic(dir / "index.json", doc.dump(2) + "\n");
  }
};

StreamStore::StreamStore(std::filesystem::path directory) : impl_(std::make_unique<Impl>()) {
  impl_->dir = std::move(directory);
  std::filesystem::create_directories(impl_->dir);
  for (const auto& entry : std::filesystem::directory_iterator(impl_->dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".log") continue;
    const auto id = hex_decode(entry.path().stem().string());
    if (!id) continue;
    auto log = std::make_unique<PlayerLog>();
    log->path = entry.path();
    impl_->logs.emplace(*id, std::move(log));
  }
}

StreamStore::~StreamStore() {
  if (!impl_) return;
  try {
    impl_->write_index();
  } catch (...) {
  }
}

StreamStore::StreamStore(StreamStore&&) noexcept = default;
StreamStore& StreamStore::operator=(StreamStore&&) noexcept = default;

const std::filesystem::path& StreamStore::directory() const noexcept { return impl_->dir; }

AppendAck StreamStore::append_batch(const TelemetryBatch& batch) {
  if (batch.player_id.empty()) throw ValidationError("player_id must be non-empty");
  if (batch.samples.empty()) throw ValidationError("batch has no samples");
  if (batch.device_id.size() > 0xffff) throw ValidationError("device_id too long");
  validate_samples(batch.samples);

  PlayerLog& log = impl_->get_or_create(batch.player_id);
  std::lock_guard lock(log.mutex);
  log.ensure_scanned();
  if (log.seen.contains({batch.device_id, batch.seq})) return {0, true};
  if (!(batch.samples.front().t > log.last_t)) {
    throw OrderingError("batch seq " + std::to_string(batch.seq) + " for player '" +
                        batch.player_id + "' starts at t=" +
                        text::format_double(batch.samples.front().t) +
                        ", not after stored t=" + text::format_double(log.last_t));
  }
  if (!log.out.is_open()) {
    log.out.open(log.path, std::ios::binary | std::ios::app);
    if (!log.out) throw Error("cannot open " + log.path.string() + " for append");
  }
  const std::string record = encode_record(batch);
  log.out.write(record.data(), static_cast<std::streamsize>(record.size()));
  log.out.flush();
  if (!log.out) throw Error("write failed for " + log.path.string());

  log.committed_bytes += record.size();
  log.sample_count += batch.samples.size();
  ++log.record_count;
  log.last_t = batch.samples.back().t;
  log.seen.emplace(batch.device_id, batch.seq);
  return {batch.samples.size(), false};
}

TelemetryStream StreamStore::load_stream(std::string_view player_id) const {
  PlayerLog* log = impl_->find(player_id);
  if (log == nullptr) throw NotFoundError("unknown player '" + std::string(player_id) + "'");

  std::uint64_t committed = 0;
  {
    std::lock_guard lock(log->mutex);
    log->ensure_scanned();
    committed = log->committed_bytes;
  }
  TelemetryStream stream;
  stream.player_id = std::string(player_id);
  if (committed == 0) return stream;

  std::string bytes;
  {
    std::ifstream in(log->path, std::ios::binary);
    if (!in) throw NotFoundError("missing log for player '" + stream.player_id + "'");
    bytes.resize(committed);
    in.read(bytes.data(), static_cast<std::streamsize>(committed));
    if (static_cast<std::uint64_t>(in.gcount()) != committed) {
      throw IntegrityError("log shorter than committed length",
                           static_cast<std::uint64_t>(in.gcount()));
    }
  }
  scan_records(bytes, [&](std::uint64_t offset, DecodedRecord&& rec) {
    if (!stream.samples.empty() && !rec.samples.empty() &&
        !(rec.samples.front().t > stream.samples.back().t)) {
      throw IntegrityError("record breaks timestamp order", offset);
    }
    try {
      validate_samples(rec.samples);
    } catch (const ValidationError& e) {
      throw IntegrityError(std::string("invalid record contents: ") + e.what(), offset);
    }
    stream.samples.insert(stream.samples.end(), rec.samples.begin(), rec.samples.end());
  });
  return stream;
}

std::vector<std::string> StreamStore::players() const {
  std::lock_guard lock(impl_->map_mutex);
  std::vector<std::string> out;
  out.reserve(impl_->logs.size());
  for (const auto& [id, log] : impl_->logs) out.push_back(id);
  return out;
}

bool StreamStore::contains(std::string_view player_id) const {
  return impl_->find(player_id) != nullptr;
}

void StreamStore::flush_index() const { impl_->write_index(); }

IngestSummary ingest_jsonl(StreamStore& store, std::istream& lines) {
  IngestSummary summary;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    TelemetryBatch batch;
    try {
      batch = parse_telemetry_batch(line);
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
    const AppendAck ack = store.append_batch(batch);
    ++summary.batches;
    summary.accepted_samples += ack.accepted;
    if (ack.duplicate) ++summary.duplicates;
  }
  return summary;
}

IngestSummary ingest_jsonl_file(StreamStore& store, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  return ingest_jsonl(store, in);
}

}  // namespace chairsense::ingest
