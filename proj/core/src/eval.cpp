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
#include "chairsense/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "chairsense/error.hpp"
#include "text.hpp"

namespace chairsense::eval {

using features::FeatureMatrix;
using json = nlohmann::json;

namespace {

void check_pair(std::span<const double> y, std::span<const double> p) {
  if (y.size() != p.size()) throw ValidationError("label and score lengths differ");
  if (y.empty()) throw ValidationError("empty evaluation set");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) throw ValidationError("labels must be 0 or 1", i);
    if (!std::isfinite(p[i])) throw ValidationError("non-finite score", i);
  }
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<std::size_t>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[static_cast<Eigen::Index>(rows[i])];
  return out;
}

json scores_json(const ModelScores& s) {
  return {{"accuracy", s.accuracy}, {"roc_auc", s.roc_auc}, {"log_loss", s.log_loss}};
}

}  // namespace

double accuracy(std::span<const double> y, std::span<const double> p, double threshold) {
  check_pair(y, p);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) hits += ((p[i] >= threshold) == (y[i] == 1.0)) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(y.size());
}

double roc_auc(std::span<const double> y, std::span<const double> p) {
  check_pair(y, p);
  const std::size_t n = y.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  // Midranks (1-based) summed over positives; values are half-integers so exact.
  double rank_sum = 0.0;
  std::size_t n1 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && p[order[j]] == p[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (y[order[k]] == 1.0) {
        rank_sum += mid;
        ++n1;
      }
    }
    i = j;
  }
  const std::size_t n0 = n - n1;
  if (n1 == 0 || n0 == 0) throw ValidationError("roc_auc needs both classes");
  const double u = rank_sum - 0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);
  return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

double log_loss(std::span<const double> y, std::span<const double> p, double eps) {
  if (y.size() != p.size()) throw ValidationError("label and score lengths differ");
  if (y.empty()) throw ValidationError("empty evaluation set");
  if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("log_loss eps must be in (0, 0.5)");
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) throw ValidationError("labels must be 0 or 1", i);
    if (std::isnan(p[i])) throw ValidationError("NaN score", i);
    const double q = std::clamp(p[i], eps, 1.0 - eps);
    total -= y[i] == 1.0 ? std::log(q) : std::log1p(-q);
  }
  return total / static_cast<double>(y.size());
}

std::vector<PlayerLabel> player_labels(const FeatureMatrix& matrix) {
  std::map<std::string, bool> labels;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    const auto& m = matrix.meta[i];
    auto [it, inserted] = labels.emplace(m.player_id, m.label);
    if (!inserted && it->second != m.label)
      throw ValidationError("player " + m.player_id + " has sessions with different labels", i);
  }
  std::vector<PlayerLabel> out;
  out.reserve(labels.size());
  for (const auto& [id, label] : labels) out.push_back({id, label});
  return out;
}

SplitPlan make_split(std::span<const PlayerLabel> players, std::uint64_t seed, int max_retries) {
  std::size_t positives = 0;
  std::set<std::string> seen;
  for (const auto& p : players) {
    if (!seen.insert(p.id).second) throw ValidationError("duplicate player id " + p.id);
    positives += p.label ? 1 : 0;
  }
  const std::size_t negatives = players.size() - positives;
  if (positives < 2 || negatives < 2)
    throw ValidationError("each class needs at least two players to split (have " +
                          std::to_string(negatives) + " low, " + std::to_string(positives) + " high)");
  const std::size_t n = players.size();
  const std::size_t n_train = n / 2;
  std::mt19937_64 rng(models::mix_seed(seed));
  std::vector<std::size_t> order(n);
  for (int attempt = 0; attempt < std::max(1, max_retries); ++attempt) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t train_pos = 0;
    std::size_t test_pos = 0;
    for (std::size_t i = 0; i < n; ++i) (i < n_train ? train_pos : test_pos) += players[order[i]].label ? 1 : 0;
    const std::size_t n_test = n - n_train;
    if (train_pos == 0 || train_pos == n_train || test_pos == 0 || test_pos == n_test) continue;
    SplitPlan plan;
    plan.seed = seed;
    for (std::size_t i = 0; i < n; ++i)
      (i < n_train ? plan.train_players : plan.test_players).push_back(players[order[i]].id);
    std::sort(plan.train_players.begin(), plan.train_players.end());
    std::sort(plan.test_players.begin(), plan.test_players.end());
    return plan;
  }
  throw ValidationError("no class-balanced split found after " + std::to_string(max_retries) + " draws");
}

SplitRecord evaluate_split(const FeatureMatrix& matrix, std::span<const models::ModelSpec> specs,
                           const SplitPlan& plan, double epsilon) {
  const std::set<std::string> train(plan.train_players.begin(), plan.train_players.end());
  const std::set<std::string> test(plan.test_players.begin(), plan.test_players.end());
  for (const auto& id : test)
    if (train.count(id)) throw ValidationError("player " + id + " is on both sides of the split");

  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    const auto& id = matrix.meta[i].player_id;
    if (train.count(id)) train_rows.push_back(i);
    else if (test.count(id)) test_rows.push_back(i);
  }
  if (train_rows.empty() || test_rows.empty()) throw ValidationError("split leaves an empty side");

  const Eigen::VectorXd y = matrix.labels();
  const Eigen::MatrixXd X_train = gather_rows(matrix.values, train_rows);
  const Eigen::VectorXd y_train = gather(y, train_rows);
  const Eigen::MatrixXd X_test = gather_rows(matrix.values, test_rows);
  const Eigen::VectorXd y_test = gather(y, test_rows);

  SplitRecord record;
  record.plan = plan;
  record.scores.reserve(specs.size());
  for (const auto& spec : specs) {
    const models::TrainedModel model = models::fit(spec, X_train, y_train);
    const Eigen::VectorXd p = model.predict_proba(X_test);
    ModelScores s;
    s.accuracy = accuracy(as_span(y_test), as_span(p));
    s.roc_auc = roc_auc(as_span(y_test), as_span(p));
    s.log_loss = log_loss(as_span(y_test), as_span(p), epsilon);
    record.scores.push_back(s);
  }
  return record;
}

EvalReport repeated_eval(const FeatureMatrix& matrix, std::span<const models::ModelSpec> specs,
                         const EvalOptions& options) {
  if (specs.empty()) throw ValidationError("no models to evaluate");
  if (options.n_splits == 0) throw ValidationError("n_splits must be positive");
  if (matrix.cols() == 0) throw ValidationError("no feature columns to evaluate");
  const std::vector<PlayerLabel> players = player_labels(matrix);

  EvalReport report;
  report.features = matrix.columns;
  report.master_seed = options.master_seed;
  report.epsilon = options.epsilon;
  report.splits.resize(options.n_splits);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= options.n_splits) return;
      try {
        const SplitPlan plan = make_split(players, options.master_seed ^ static_cast<std::uint64_t>(i),
                                          options.max_split_retries);
        report.splits[i] = evaluate_split(matrix, specs, plan, options.epsilon);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed = true;
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(options.n_splits)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  // Leakage audit over the finished plans.
  for (const auto& split : report.splits) {
    std::vector<std::string> both;
    std::set_intersection(split.plan.train_players.begin(), split.plan.train_players.end(),
                          split.plan.test_players.begin(), split.plan.test_players.end(),
                          std::back_inserter(both));
    report.leakage_violations += both.size();
  }

  const double n = static_cast<double>(options.n_splits);
  for (std::size_t m = 0; m < specs.size(); ++m) {
    ModelSummary summary;
    summary.spec = specs[m];
    for (const auto& split : report.splits) {
      summary.mean.accuracy += split.scores[m].accuracy;
      summary.mean.roc_auc += split.scores[m].roc_auc;
      summary.mean.log_loss += split.scores[m].log_loss;
    }
    summary.mean.accuracy /= n;
    summary.mean.roc_auc /= n;
    summary.mean.log_loss /= n;
    report.models.push_back(summary);
  }
  return report;
}

std::string report_json(const EvalReport& report) {
  json models = json::array();
  for (const auto& m : report.models) {
    json spec = json::parse(models::spec_to_json(m.spec));
    spec["name"] = m.spec.name();
    spec["mean"] = scores_json(m.mean);
    models.push_back(std::move(spec));
  }
  json splits = json::array();
  for (const auto& s : report.splits) {
    json scores = json::object();
    for (std::size_t m = 0; m < report.models.size() && m < s.scores.size(); ++m)
      scores[report.models[m].spec.name()] = scores_json(s.scores[m]);
    splits.push_back({{"seed", s.plan.seed},
                      {"train_players", s.plan.train_players},
                      {"test_players", s.plan.test_players},
                      {"scores", std::move(scores)}});
  }
  json doc = {{"format", "chairsense.eval"},
              {"version", 1},
              {"master_seed", report.master_seed},
              {"n_splits", report.n_splits()},
              {"epsilon", report.epsilon},
              {"features", report.features},
              {"leakage_violations", report.leakage_violations},
              {"models", std::move(models)},
              {"splits", std::move(splits)}};
  return doc.dump(1) + "\n";
}

std::string report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "model,accuracy,roc_auc,log_loss\n";
  for (const auto& m : report.models) {
    out << m.spec.name() << ',' << text::format_double(m.mean.accuracy) << ','
        << text::format_double(m.mean.roc_auc) << ',' << text::format_double(m.mean.log_loss) << '\n';
  }
  return out.str();
}

FeatureMatrix permute_player_labels(const FeatureMatrix& matrix, std::uint64_t seed) {
  std::vector<PlayerLabel> players = player_labels(matrix);
  std::vector<bool> labels;
  for (const auto& p : players) labels.push_back(p.label);
  std::mt19937_64 rng(models::mix_seed(seed));
  std::shuffle(labels.begin(), labels.end(), rng);
  std::map<std::string, bool> assigned;
  for (std::size_t i = 0; i < players.size(); ++i) assigned[players[i].id] = labels[i];
  FeatureMatrix out = matrix;
  for (auto& m : out.meta) m.label = assigned.at(m.player_id);
  return out;
}

}  // namespace chairsense::eval
