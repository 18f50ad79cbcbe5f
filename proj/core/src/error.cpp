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

#include "chairsense/error.hpp"

namespace chairsense {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

ValidationError::ValidationError(const std::string& what, std::size_t index)
    : Error(index == kNoIndex ? what : what + " (index " + std::to_string(index) + ")"),
      index_(index) {}

IntegrityError::IntegrityError(const std::string& what, std::uint64_t offset)
    : Error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

ConvergenceError::ConvergenceError(const std::string& what, double last_objective)
    : Error(what), last_objective_(last_objective) {}

TransportError::TransportError(const std::string& what, std::size_t player_index,
                               std::uint64_t seq)
    : Error(what), player_index_(player_index), seq_(seq) {}

}  // namespace chairsense
