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
#include <chairsense/eval.hpp>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles/auc_oracle.hpp"

using namespace chairsense;
using namespace chairsense::eval;

namespace {

/// players x sessions rows;  moves column 0 for high-label players.
features::FeatureMatrix player_matrix(std::uint64_t seed, int players, int sessions, double shift, int p = 3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  features::FeatureMatrix m;
  for (int j = 0; j < p; ++j) m.columns.push_back("f" + std::to_string(j));
  m.values.resize(players * sessions, p);
  int r = 0;
  for (int pl = 0; pl < players; ++pl) {
    const bool label = pl % 2 == 1;
    char id[8];
    std::snprintf(id, sizeof id, "p%02d", pl + 1);
    for (int s = 0; s < sessions; ++s, ++r) {
      for (int j = 0; j < p; ++j) m.values(r, j) = g(rng);
      if (label) m.values(r, 0) += shift;
      features::SessionMeta meta;
      meta.player_id = id;
      meta.session_index = static_cast<std::size_t>(s);
      meta.label = label;
      m.meta.push_back(meta);
    }
  }
  return m;
}

std::vector<double> v(std::initializer_list<double> x) { return x; }

}  // namespace

TEST(Metrics, AccuracyExamples) {
  EXPECT_DOUBLE_EQ(accuracy(v({0, 1, 1, 0}), v({0.4, 0.9, 0.2, 0.1})), 0.75);
  EXPECT_DOUBLE_EQ(accuracy(v({0, 1}), v({0.0, 1.0})), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(v({0, 1, 0, 1}), v({0.5, 0.5, 0.5, 0.5})), 0.5);
  EXPECT_THROW(accuracy(v({0, 1}), v({0.5})), ValidationError);
}

TEST(Metrics, AucExamples) {
  EXPECT_DOUBLE_EQ(roc_auc(v({0, 0, 1, 1}), v({0.1, 0.4, 0.35, 0.8})), 0.75);
  EXPECT_DOUBLE_EQ(roc_auc(v({0, 0, 1, 1}), v({0.1, 0.2, 0.3, 0.8})), 1.0);
  EXPECT_DOUBLE_EQ(roc_auc(v({0, 1, 0, 1}), v({0.3, 0.3, 0.3, 0.3})), 0.5);
  EXPECT_THROW(roc_auc(v({1, 1}), v({0.2, 0.3})), ValidationError);
}

TEST(Metrics, AucMatchesPairCount) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<double> y(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<double>(rng() % 2);
      p[i] = static_cast<double>(rng() % 20) / 19.0;  // coarse grid forces ties
    }
    y[0] = 0;
    y[1] = 1;
    EXPECT_EQ(roc_auc(y, p), oracle::auc_pairs(y, p)) << t;
    std::vector<double> q(n);
    std::transform(p.begin(), p.end(), q.begin(), [](double x) { return std::exp(3 * x) - 7; });
    EXPECT_EQ(roc_auc(y, q), roc_auc(y, p));
  }
}

TEST(Metrics, LogLossExamples) {
  EXPECT_NEAR(log_loss(v({0, 1, 1}), v({0.5, 0.5, 0.5})), std::log(2.0), 1e-15);
  EXPECT_NEAR(log_loss(v({1}), v({0.0})), -std::log(1e-15), 1e-9);
  EXPECT_NEAR(log_loss(v({1}), v({0.0})), 34.539, 1e-3);
  EXPECT_NEAR(log_loss(v({1, 0}), v({1.0, 0.0})), -std::log1p(-1e-15), 1e-18);
  EXPECT_THROW(log_loss(v({1, 0}), v({1.0})), ValidationError);
}

TEST(Metrics, PerfectAccuracyBoundsLogLoss) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> y(30), p(30);
    for (std::size_t i = 0; i < 30; ++i) {
      y[i] = static_cast<double>(rng() % 2);
      p[i] = y[i] > 0 ? 0.5 + 0.5 * u(rng) : 0.4999 * u(rng);
    }
    ASSERT_EQ(accuracy(y, p), 1.0);
    EXPECT_LE(log_loss(y, p), std::log(2.0));
  }
}

TEST(Split, NineteenPlayers) {
  const auto m = player_matrix(1, 19, 2, 0.0);
  const auto players = player_labels(m);
  ASSERT_EQ(players.size(), 19u);
  const auto a = make_split(players, 77);
  EXPECT_EQ(a.train_players.size(), 9u);
  EXPECT_EQ(a.test_players.size(), 10u);
  EXPECT_TRUE(std::is_sorted(a.train_players.begin(), a.train_players.end()));
  std::vector<std::string> both;
  std::set_intersection(a.train_players.begin(), a.train_players.end(), a.test_players.begin(),
                        a.test_players.end(), std::back_inserter(both));
  EXPECT_TRUE(both.empty());
  const auto b = make_split(players, 77);
  EXPECT_EQ(a.train_players, b.train_players);
  EXPECT_EQ(a.test_players, b.test_players);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = make_split(players, seed);
    for (const auto* side : {&s.train_players, &s.test_players}) {
      std::set<bool> labels;
      for (const auto& id : *side) labels.insert((std::stoi(id.substr(1)) - 1) % 2 == 1);
      EXPECT_EQ(labels.size(), 2u);
    }
  }
}

TEST(Split, Errors) {
  const std::vector<PlayerLabel> two{{"a", false}, {"b", true}};
  EXPECT_THROW(make_split(two, 1), ValidationError);
  const std::vector<PlayerLabel> lopsided{{"a", false}, {"b", false}, {"c", false}, {"d", true}};
  EXPECT_THROW(make_split(lopsided, 1), ValidationError);

  auto m = player_matrix(1, 4, 2, 0.0);
  m.meta[1].label = !m.meta[1].label;
  EXPECT_THROW(player_labels(m), ValidationError);
}

TEST(Evaluate, SingleSplitEqualsDirectRun) {
  const auto m = player_matrix(3, 10, 4, 1.5);
  const auto specs = models::default_model_specs(5);
  EvalOptions opts;
  opts.n_splits = 1;
  opts.master_seed = 41;
  const auto report = repeated_eval(m, specs, opts);
  ASSERT_EQ(report.n_splits(), 1u);
  const auto plan = make_split(player_labels(m), 41 ^ 0u);
  const auto direct = evaluate_split(m, specs, plan);
  EXPECT_EQ(report.splits[0].plan.train_players, plan.train_players);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    EXPECT_EQ(report.splits[0].scores[k].roc_auc, direct.scores[k].roc_auc);
    EXPECT_EQ(report.splits[0].scores[k].log_loss, direct.scores[k].log_loss);
    EXPECT_EQ(report.models[k].mean.accuracy, direct.scores[k].accuracy);
  }
  EXPECT_EQ(report.leakage_violations, 0u);
}

TEST(Evaluate, OverlappingPlanIsRejected) {
  const auto m = player_matrix(3, 6, 3, 1.0);
  SplitPlan bad;
  bad.train_players = {"p01", "p02", "p03"};
  bad.test_players = {"p03", "p04", "p05", "p06"};
  const auto specs = models::default_model_specs();
  EXPECT_THROW(evaluate_split(m, specs, bad), Error);
}

TEST(Evaluate, ThreadCountDoesNotChangeReport) {
  const auto m = player_matrix(4, 12, 3, 1.0);
  const auto specs = models::default_model_specs(2);
  EvalOptions opts;
  opts.n_splits = 12;
  opts.master_seed = 9;
  const auto one = repeated_eval(m, specs, opts);
  opts.threads = 4;
  const auto four = repeated_eval(m, specs, opts);
  EXPECT_EQ(report_json(one), report_json(four));
  EXPECT_EQ(report_csv(one), report_csv(four));
}

TEST(Evaluate, StrongSignalAndPermutationNull) {
  const auto m = player_matrix(5, 19, 6, 2.0);
  const auto specs = models::default_model_specs(2026);
  EvalOptions opts;
  opts.n_splits = 50;
  opts.master_seed = 2026;
  const auto signal = repeated_eval(m, specs, opts);
  EXPECT_GE(signal.models[2].mean.roc_auc, 0.85);
  EXPECT_EQ(signal.leakage_violations, 0u);

  // Rows are independent noise apart from column 0, so after a player-level
  // permutation nothing separates the classes.
  opts.n_splits = 200;
  const auto null = repeated_eval(permute_player_labels(player_matrix(6, 19, 6, 0.0), 11), specs, opts);
  for (const auto& s : null.models) {
    EXPECT_GE(s.mean.roc_auc, 0.4) << s.spec.name();
    EXPECT_LE(s.mean.roc_auc, 0.6) << s.spec.name();
  }
}

TEST(Evaluate, PermutationKeepsPlayerConsistency) {
  const auto m = player_matrix(7, 19, 4, 0.0);
  const auto perm = permute_player_labels(m, 3);
  EXPECT_NO_THROW(player_labels(perm));
  EXPECT_EQ(perm.labels().sum(), m.labels().sum());
  EXPECT_TRUE(perm.values == m.values);
  EXPECT_EQ(report_csv(repeated_eval(m, models::default_model_specs(), {2, 0, 1, 1e-15, 1000}))
                .substr(0, 32),
            "model,accuracy,roc_auc,log_loss\n");
}

TEST(Evaluate, ReportJsonShape) {
  const auto m = player_matrix(8, 8, 3, 1.0);
  EvalOptions opts;
  opts.n_splits = 3;
  const auto report = repeated_eval(m, models::default_model_specs(1), opts);
  const auto doc = nlohmann::json::parse(report_json(report));
  EXPECT_EQ(doc.at("format"), "chairsense.eval");
  EXPECT_EQ(doc.at("splits").size(), 3u);
  EXPECT_EQ(doc.at("models").size(), 5u);
}
