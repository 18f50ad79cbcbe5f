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

#include <chairsense/telemetry.hpp>

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

namespace testing_support {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("chairsense_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// n samples at `rate` Hz starting at t0, with seeded Gaussian channels.
inline chairsense::ingest::TelemetryStream random_stream(const std::string& player, std::size_t n,
                                                         std::uint64_t seed, double rate = 100.0,
                                                         double t0 = 0.0) {
  chairsense::ingest::TelemetryStream s;
  s.player_id = player;
  s.nominal_rate = rate;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& x = s.samples[i];
    x.t = t0 + static_cast<double>(i) / rate;
    for (auto* arr : {&x.acc, &x.gyro, &x.mag})
      for (double& v : *arr) v = g(rng);
  }
  return s;
}

}  // namespace testing_support
