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
#include <benchmark/benchmark.h>
#include <chairsense/eval.hpp>
#include <chairsense/features.hpp>
#include <chairsense/models.hpp>
#include <chairsense/selection.hpp>
#include <chairsense/synth.hpp>

#include <random>

using namespace chairsense;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

void BM_RollingStd(benchmark::State& state) {
  const auto x = gaussian(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(features::rolling_std(x, 100));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RollingStd)->Arg(18'000)->Arg(210'000);

void BM_MovementMask(benchmark::State& state) {
  const auto sd = features::rolling_std(gaussian(18'000, 2), 100);
  for (auto _ : state) benchmark::DoNotOptimize(features::movement_mask(sd));
}
BENCHMARK(BM_MovementMask);

void BM_LassoPath(benchmark::State& state) {
  const int n = 171;
  const int p = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) X(i, j) = g(rng);
    y[i] = X(i, 0) - 0.5 * X(i, 1) + g(rng) > 0 ? 1.0 : 0.0;
  }
  const auto d = selection::standardize(X, y);
  const auto grid = selection::default_alpha_grid(d);
  for (auto _ : state) benchmark::DoNotOptimize(selection::lasso_path(d, grid));
}
BENCHMARK(BM_LassoPath)->Arg(31);

void BM_FitModel(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(90, 8);
  Eigen::VectorXd y(90);
  for (int i = 0; i < 90; ++i) {
    for (int j = 0; j < 8; ++j) X(i, j) = g(rng);
    y[i] = X(i, 0) + 0.5 * g(rng) > 0 ? 1.0 : 0.0;
  }
  const auto spec = models::default_model_specs(1)[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(spec.name());
  for (auto _ : state) benchmark::DoNotOptimize(models::fit(spec, X, y));
}
BENCHMARK(BM_FitModel)->DenseRange(0, 4);

void BM_RocAuc(benchmark::State& state) {
  const auto p = gaussian(static_cast<std::size_t>(state.range(0)), 5);
  std::vector<double> y(p.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i % 2);
  for (auto _ : state) benchmark::DoNotOptimize(eval::roc_auc(y, p));
}
BENCHMARK(BM_RocAuc)->Arg(100)->Arg(10'000);

void BM_GeneratePlayer(benchmark::State& state) {
  auto cfg = synth::default_config();
  cfg.durations.assign(cfg.n_players, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(synth::generate_player(cfg, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_GeneratePlayer)->Arg(180)->Arg(2100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
