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
#include <stdexcept>
#include <string>

namespace chairsense {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (JSON, CSV, event log). `line` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  static constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

  explicit ValidationError(const std::string& what, std::size_t index = kNoIndex);
  /// Offending element (sample, row, ...) or kNoIndex.
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A telemetry batch would break the strictly increasing timestamp order of a stream.
class OrderingError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Persisted data failed a consistency check. `offset` is the byte offset of the bad record.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& what, std::uint64_t offset);
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_objective);
  double last_objective() const noexcept { return last_objective_; }

 private:
  double last_objective_;
};

/// Network failure while replaying telemetry. Resume from (player_index, seq).
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::size_t player_index, std::uint64_t seq);
  std::size_t player_index() const noexcept { return player_index_; }
  std::uint64_t resume_seq() const noexcept { return seq_; }

 private:
  std::size_t player_index_;
  std::uint64_t seq_;
};

}  // namespace chairsense
