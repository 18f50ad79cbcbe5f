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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chairsense/error.hpp>
#include <chairsense/eval.hpp>
#include <chairsense/features.hpp>
#include <chairsense/gamelog.hpp>
#include <chairsense/ingest_server.hpp>
#include <chairsense/models.hpp>
#include <chairsense/replay.hpp>
#include <chairsense/selection.hpp>
#include <chairsense/stream_store.hpp>
#include <chairsense/synth.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles/auc_oracle.hpp"
#include "oracles/lasso_oracle.hpp"
#include "oracles/naive_std.hpp"
#include "oracles/svm_kkt.hpp"
#include "support/helpers.hpp"
#include "support/planted.hpp"

using namespace chairsense;

namespace {

// Tolerances and budgets.
constexpr double kStdRelTol = 1e-9;
constexpr double kStdBudgetSeconds = 5.0;
constexpr int kStdSeries = 10'000;
constexpr double kLassoRelTol = 1e-6;
constexpr double kKktTol = 1e-6;
constexpr int kLassoProblems = 500;
constexpr double kSelectionBudgetSeconds = 10.0;
constexpr int kAucTrials = 1000;
constexpr double kMetricTol = 1e-12;
constexpr double kGradRelTol = 1e-6;
constexpr double kSmoKktTol = 1e-3;
constexpr double kImportanceFloor = 0.9;
constexpr std::size_t kExpectedSessions = 171;
constexpr std::size_t kFeatureCap = 8;
constexpr std::size_t kSplits = 200;
constexpr std::uint64_t kProtocolSeed = 2026;
constexpr double kSignalAucFloor = 0.85;
constexpr double kNullLow = 0.4;
constexpr double kNullHigh = 0.6;
constexpr double kPipelineBudgetSeconds = 300.0;
constexpr int kIngestPlayers = 10;
constexpr std::size_t kIngestSamples = 6000;  // 60 s at 100 Hz

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome rolling_std_oracle() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  double elapsed = 0.0;
  std::size_t compared = 0;
  for (int t = 0; t < kStdSeries; ++t) {
    const std::size_t n = 100 + rng() % 4901;
    const std::size_t w = 2 + rng() % 99;
    const double offset = std::uniform_real_distribution<double>(-1e3, 1e3)(rng);
    const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-3.0, 2.0)(rng));
    std::normal_distribution<double> g(offset, scale);
    std::vector<double> x(n);
    for (double& v : x) v = g(rng);

    const auto t0 = Clock::now();
    const auto got = features::rolling_std(x, w);
    elapsed += seconds_since(t0);

    const auto want = oracle::naive_rolling_std(x, w);
    if (got.size() != want.size()) return {false, "length mismatch in series " + std::to_string(t)};
    for (std::size_t i = 0; i < got.size(); ++i) {
      worst = std::max(worst, std::abs(got[i] - want[i]) / std::abs(want[i]));
    }
    compared += got.size();
  }
  return {worst <= kStdRelTol && elapsed < kStdBudgetSeconds,
          std::to_string(kStdSeries) + " series, " + std::to_string(compared) + " windows, max rel err " +
              fmt(worst) + ", implementation time " + fmt(elapsed, 3) + " s"};
}

// ---------------------------------------------------------------------------

selection::StandardizedDesign random_design(std::mt19937_64& rng, int n, int p) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd beta(p);
  for (int j = 0; j < p; ++j) beta[j] = rng() % 2 ? g(rng) : 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = g(rng);
  if (p > 2) X.col(2) = 0.6 * X.col(0) + 0.8 * X.col(2);
  Eigen::VectorXd y = X * beta;
  for (int i = 0; i < n; ++i) y[i] += g(rng);
  return selection::standardize(X, y);
}

Outcome lasso_oracle() {
  std::mt19937_64 rng(202);
  double worst_obj = 0.0;
  double worst_kkt = 0.0;
  bool zeros_ok = true;
  for (int t = 0; t < kLassoProblems; ++t) {
    const int p = 1 + t % 6;
    const int n = p + 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(50 - p - 1));
    const auto d = random_design(rng, n, p);
    const double amax = selection::alpha_max(d);
    const double alpha = amax * std::uniform_real_distribution<double>(0.005, 1.0)(rng);
    const auto sol = selection::lasso_fit(d, alpha);
    const auto want = oracle::lasso_sign_patterns(d.X, d.y, alpha);
    const double got = oracle::lasso_objective(d.X, d.y, sol.w, alpha);
    worst_obj = std::max(worst_obj, std::abs(got - want.objective) / std::abs(want.objective));

    const Eigen::VectorXd grad = d.X.transpose() * (d.y - d.X * sol.w) / static_cast<double>(n);
    for (Eigen::Index j = 0; j < grad.size(); ++j) {
      const double r = std::abs(sol.w[j]) > selection::kSupportThreshold
                           ? std::abs(grad[j] - alpha * (sol.w[j] > 0 ? 1.0 : -1.0))
                           : std::max(0.0, std::abs(grad[j]) - alpha);
      worst_kkt = std::max(worst_kkt, r);
    }
    for (double scale : {1.0, 1.0 + 1e-9, 2.0}) {
      zeros_ok = zeros_ok && (selection::lasso_fit(d, amax * scale).w.array() == 0.0).all();
    }
  }
  return {worst_obj <= kLassoRelTol && worst_kkt <= kKktTol && zeros_ok,
          std::to_string(kLassoProblems) + " problems, max rel objective gap " + fmt(worst_obj) + ", max KKT residual " +
              fmt(worst_kkt) + ", zero at alpha_max: " + (zeros_ok ? "yes" : "no")};
}

// ---------------------------------------------------------------------------

Outcome ic_selection() {
  const auto t0 = Clock::now();
  const auto data = testing_support::planted_regression(42);
  const auto d = selection::standardize(data.X, data.y);
  const auto r = selection::select_features(selection::lasso_path(d, selection::default_alpha_grid(d)), d.n(), d.names);
  const double elapsed = seconds_since(t0);
  std::set<std::size_t> a, b;
  for (const auto& f : r.aic_support) a.insert(f.column);
  for (const auto& f : r.bic_support) b.insert(f.column);
  const bool core = a.count(0) && a.count(1) && a.count(2) && b.count(0) && b.count(1) && b.count(2);
  const bool nested = std::includes(a.begin(), a.end(), b.begin(), b.end());
  return {core && nested && elapsed < kSelectionBudgetSeconds,
          "AIC k=" + std::to_string(a.size()) + ", BIC k=" + std::to_string(b.size()) + ", true features in both: " +
              (core ? "yes" : "no") + ", BIC within AIC: " + (nested ? "yes" : "no") + ", " + fmt(elapsed, 3) + " s"};
}

// ---------------------------------------------------------------------------

Outcome metrics() {
  std::mt19937_64 rng(404);
  int exact = 0;
  for (int t = 0; t < kAucTrials; ++t) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<double> y(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<double>(rng() % 2);
      p[i] = t % 2 ? std::uniform_real_distribution<double>(0.0, 1.0)(rng) : static_cast<double>(rng() % 10) / 9.0;
    }
    y[0] = 0.0;  // both classes present
    y[1] = 1.0;
    exact += eval::roc_auc(y, p) == oracle::auc_pairs(y, p);
  }
  struct Fixed {
    const char* name;
    double got;
    double want;
  };
  using V = std::vector<double>;
  const Fixed fixed[] = {
      {"accuracy example", eval::accuracy(V{0, 1, 1, 0}, V{0.4, 0.9, 0.2, 0.1}), 0.75},
      {"accuracy perfect", eval::accuracy(V{0, 1, 1}, V{0.1, 0.8, 0.9}), 1.0},
      {"accuracy ties", eval::accuracy(V{0, 1, 0, 1}, V{0.5, 0.5, 0.5, 0.5}), 0.5},
      {"auc example", eval::roc_auc(V{0, 0, 1, 1}, V{0.1, 0.4, 0.35, 0.8}), 0.75},
      {"auc ties", eval::roc_auc(V{0, 1, 0, 1}, V{0.2, 0.2, 0.2, 0.2}), 0.5},
      {"log_loss half", eval::log_loss(V{0, 1, 1, 0}, V{0.5, 0.5, 0.5, 0.5}), std::log(2.0)},
      {"log_loss clipped", eval::log_loss(V{1}, V{0.0}), -std::log(1e-15)},
      {"log_loss confident", eval::log_loss(V{1, 0}, V{1.0, 0.0}), -std::log1p(-1e-15)},
  };
  std::string bad;
  for (const auto& f : fixed) {
    if (std::abs(f.got - f.want) > kMetricTol * std::max(1.0, std::abs(f.want))) bad += std::string(" ") + f.name;
  }
  return {exact == kAucTrials && bad.empty(), std::to_string(exact) + "/" + std::to_string(kAucTrials) +
                                                  " AUC exact matches, fixed examples " +
                                                  (bad.empty() ? "all match" : "mismatch:" + bad)};
}

// ---------------------------------------------------------------------------

Outcome classifier_sanity() {
  // Logistic gradient against central differences.
  const auto lr_data = testing_support::planted_classification(505, 60, 4, 0);
  std::mt19937_64 rng(505);
  std::normal_distribution<double> g(0.0, 1.0);
  double grad_err = 0.0;
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd theta(5);
    for (Eigen::Index j = 0; j < 5; ++j) theta[j] = g(rng);
    const auto lg = models::logistic::loss_and_gradient(theta, lr_data.X, lr_data.y, 1e-4);
    for (Eigen::Index j = 0; j < 5; ++j) {
      const double h = 1e-5;
      Eigen::VectorXd up = theta, down = theta;
      up[j] += h;
      down[j] -= h;
      const double fd = (models::logistic::loss_and_gradient(up, lr_data.X, lr_data.y, 1e-4).loss -
                         models::logistic::loss_and_gradient(down, lr_data.X, lr_data.y, 1e-4).loss) /
                        (2 * h);
      grad_err = std::max(grad_err, std::abs(fd - lg.gradient[j]) / std::max(1.0, std::abs(lg.gradient[j])));
    }
  }

  // XOR: the four corners through fit(), plus a direct SMO solve for KKT.
  Eigen::MatrixXd xor_x(4, 2);
  xor_x << 0, 0, 1, 1, 0, 1, 1, 0;
  Eigen::VectorXd xor_y(4);
  xor_y << 0, 0, 1, 1;
  const models::ModelSpec svm_spec{models::SvmParams{}, 1};
  const auto svm_model = models::fit(svm_spec, xor_x, xor_y);
  const auto& svm_state = std::get<models::SvmModel>(svm_model.state());
  const Eigen::MatrixXd z = svm_model.scaler().apply(xor_x);
  int correct = 0;
  for (Eigen::Index i = 0; i < 4; ++i) correct += (svm_state.decision(z.row(i)) > 0.0) == (xor_y[i] > 0.5);
  const double xor_accuracy = correct / 4.0;

  const auto jitter = testing_support::xor_problem(505);
  const auto jitter_model = models::fit(svm_spec, jitter.X, jitter.y);
  const double jitter_accuracy = eval::accuracy(eval::as_span(jitter.y), eval::as_span(jitter_model.predict_proba(jitter.X)));
  const auto& js = std::get<models::SvmModel>(jitter_model.state());
  const Eigen::MatrixXd jz = jitter_model.scaler().apply(jitter.X);
  const Eigen::MatrixXd K = models::svm::rbf_kernel(jz, jz, js.gamma);
  const Eigen::VectorXd ypm = 2.0 * jitter.y.array() - 1.0;
  const auto smo = models::svm::solve_smo(K, ypm, 1.0, 1e-3, 10'000'000);
  double kkt = oracle::svm_kkt_violation(K, ypm, smo.alpha, smo.b, 1.0);
  const Eigen::MatrixXd Kx = models::svm::rbf_kernel(z, z, svm_state.gamma);
  const Eigen::VectorXd xpm = 2.0 * xor_y.array() - 1.0;
  const auto smo4 = models::svm::solve_smo(Kx, xpm, 1.0, 1e-3, 10'000'000);
  kkt = std::max(kkt, oracle::svm_kkt_violation(Kx, xpm, smo4.alpha, smo4.b, 1.0));

  // Planted-feature forest importance.
  const auto planted = testing_support::planted_classification(505, 200, 6, 4);
  const auto rf = models::fit({models::ForestParams{}, 505}, planted.X, planted.y);
  const double importance = models::rf_feature_importance(rf)[4];

  // Determinism of every kind under a fixed seed.
  Eigen::VectorXd noisy = planted.y;
  for (Eigen::Index i = 0; i < noisy.size(); i += 6) noisy[i] = 1.0 - noisy[i];
  bool deterministic = true;
  for (const auto& spec : models::default_model_specs(505)) {
    const auto a = models::fit(spec, planted.X, noisy).predict_proba(planted.X);
    const auto b = models::fit(spec, planted.X, noisy).predict_proba(planted.X);
    deterministic = deterministic && a == b;
  }

  const bool pass = grad_err <= kGradRelTol && kkt <= kSmoKktTol && xor_accuracy == 1.0 && jitter_accuracy == 1.0 &&
                    importance > kImportanceFloor && deterministic;
  return {pass, "gradient rel err " + fmt(grad_err) + ", SMO KKT " + fmt(kkt) + ", XOR accuracy " + fmt(xor_accuracy) +
                    " (jittered " + fmt(jitter_accuracy) + "), planted RF importance " + fmt(importance) +
                    ", deterministic: " + (deterministic ? "yes" : "no")};
}

// ---------------------------------------------------------------------------

struct ProtocolResult {
  std::vector<std::string> features;
  eval::EvalReport report;
};

/// Selection on the given labels (AIC support, capped), then repeated evaluation.
ProtocolResult run_protocol(const features::FeatureMatrix& matrix) {
  const auto d = selection::standardize(matrix.values, matrix.labels(), matrix.columns);
  const auto r = selection::select_features(selection::lasso_path(d, selection::default_alpha_grid(d)), d.n(), d.names);
  ProtocolResult out;
  out.features = selection::cap_support(r.aic_support, kFeatureCap);
  if (out.features.empty()) throw Error("AIC selected no features");
  eval::EvalOptions opts;
  opts.n_splits = kSplits;
  opts.master_seed = kProtocolSeed;
  opts.threads = std::max(1u, std::thread::hardware_concurrency());
  const auto specs = models::default_model_specs(kProtocolSeed);
  out.report = eval::repeated_eval(matrix.select_columns(out.features), specs, opts);
  return out;
}

features::FeatureMatrix cohort_matrix(const synth::CohortConfig& config) {
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  const auto cohort = synth::generate_cohort(config, threads);
  std::vector<gamelog::Session> sessions;
  for (const auto& p : cohort.players) {
    auto stream = std::make_shared<const ingest::TelemetryStream>(p.stream);
    auto s = gamelog::build_sessions(stream, p.events, p.meta);
    sessions.insert(sessions.end(), s.begin(), s.end());
  }
  return features::build_feature_matrix(sessions, {}, threads);
}

double model_auc(const eval::EvalReport& report, models::ModelKind kind) {
  for (const auto& m : report.models)
    if (m.spec.kind() == kind) return m.mean.roc_auc;
  throw NotFoundError("model missing from report");
}

std::string all_aucs(const eval::EvalReport& report) {
  std::string s;
  for (const auto& m : report.models) s += (s.empty() ? "" : ", ") + m.spec.name() + " " + fmt(m.mean.roc_auc, 3);
  return s;
}

std::size_t audited_overlaps(const eval::EvalReport& report) {
  std::size_t shared = 0;
  for (const auto& split : report.splits) {
    const std::set<std::string> train(split.plan.train_players.begin(), split.plan.train_players.end());
    for (const auto& id : split.plan.test_players) shared += train.count(id);
  }
  return shared;
}

std::vector<eval::EvalReport> g_reports;  // handed from the pipeline criterion to the leakage audit

Outcome end_to_end() {
  const auto t0 = Clock::now();
  const auto matrix = cohort_matrix(synth::default_config());
  const auto signal = run_protocol(matrix);
  const auto null = run_protocol(eval::permute_player_labels(matrix, kProtocolSeed));
  const double elapsed = seconds_since(t0);
  g_reports = {signal.report, null.report};

  const double signal_auc = model_auc(signal.report, models::ModelKind::RandomForest);
  const double null_auc = model_auc(null.report, models::ModelKind::RandomForest);

  // Context lines; not part of the verdict.
  std::set<std::string> families;
  for (const auto& f : signal.features) {
    if (f.rfind("moving_death_", 0) == 0) families.insert("moving_death");
    else if (f.rfind("moving_shootout_", 0) == 0) families.insert("moving_shootout");
    else if (f.rfind("med_", 0) == 0) families.insert("med_std");
    else if (f.rfind("moving_acc_", 0) == 0 || f.rfind("moving_gyro_", 0) == 0) families.insert("moving");
  }
  std::string names;
  for (const auto& f : signal.features) names += (names.empty() ? "" : " ") + f;
  std::cout << "  INFO signal features: " << names << " (" << families.size() << "/4 planted families)\n";
  std::cout << "  INFO signal AUC: " << all_aucs(signal.report) << "\n";
  std::cout << "  INFO null AUC:   " << all_aucs(null.report) << "\n";
  const auto null_cohort = run_protocol(cohort_matrix(synth::null_config()));
  std::cout << "  INFO identical-class cohort AUC: " << all_aucs(null_cohort.report) << "\n";

  const bool pass = matrix.rows() == kExpectedSessions && signal_auc >= kSignalAucFloor && null_auc >= kNullLow &&
                    null_auc <= kNullHigh && elapsed < kPipelineBudgetSeconds;
  return {pass, std::to_string(matrix.rows()) + " sessions, RF AUC signal " + fmt(signal_auc) + " (>= " +
                    fmt(kSignalAucFloor) + "), permuted null " + fmt(null_auc) + " (in [" + fmt(kNullLow) + ", " +
                    fmt(kNullHigh) + "]), " + fmt(elapsed, 3) + " s"};
}

Outcome no_leakage() {
  if (g_reports.empty()) return {false, "no evaluation reports (end-to-end criterion did not run)"};
  std::size_t reported = 0;
  std::size_t audited = 0;
  std::size_t splits = 0;
  for (const auto& r : g_reports) {
    reported += r.leakage_violations;
    audited += audited_overlaps(r);
    splits += r.n_splits();
  }
  return {reported == 0 && audited == 0 && splits > 0,
          std::to_string(splits) + " splits, shared players: reported " + std::to_string(reported) + ", re-audited " +
              std::to_string(audited)};
}

// ---------------------------------------------------------------------------

bool same_bytes(const ingest::TelemetryStream& a, const ingest::TelemetryStream& b) {
  return a.samples.size() == b.samples.size() &&
         std::memcmp(a.samples.data(), b.samples.data(), a.samples.size() * sizeof(ingest::SensorSample)) == 0;
}

Outcome ingest_robustness() {
  auto config = synth::default_config();
  config.n_players = kIngestPlayers;
  config.n_high = kIngestPlayers / 2;
  config.durations.assign(kIngestPlayers, 180.0);
  std::vector<ingest::TelemetryStream> streams;
  for (int i = 0; i < kIngestPlayers; ++i) {
    auto s = synth::generate_player(config, static_cast<std::size_t>(i)).stream;
    s.samples.resize(kIngestSamples);
    streams.push_back(std::move(s));
  }

  testing_support::TempDir dir;
  ingest::StreamStore store(dir.path() / "store");
  ingest::IngestServer server(store);
  replay::ReplayOptions opts;
  opts.port = server.start("127.0.0.1", 0);
  opts.concurrency = kIngestPlayers;

  const auto first = replay::replay_streams(streams, opts);
  int equal_after_first = 0;
  for (const auto& s : streams) equal_after_first += same_bytes(store.load_stream(s.player_id), s);

  const auto second = replay::replay_streams(streams, opts);
  int equal_after_second = 0;
  for (const auto& s : streams) equal_after_second += same_bytes(store.load_stream(s.player_id), s);
  server.stop();

  const std::size_t expected_batches = static_cast<std::size_t>(kIngestPlayers) * (kIngestSamples / 100);
  const bool pass = first.accepted_batches == expected_batches && first.duplicate_batches == 0 &&
                    second.accepted_batches == 0 && second.duplicate_batches == expected_batches &&
                    equal_after_first == kIngestPlayers && equal_after_second == kIngestPlayers;
  return {pass, std::to_string(kIngestPlayers) + " concurrent players x 60 s: " + std::to_string(first.accepted_batches) +
                    " batches accepted, " + std::to_string(equal_after_first) + " streams byte-equal; replay: " +
                    std::to_string(second.duplicate_batches) + " duplicates, " +
                    std::to_string(second.accepted_batches) + " accepted, " + std::to_string(equal_after_second) +
                    " streams byte-equal"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"rolling_std_oracle", rolling_std_oracle},
      {"lasso_oracle", lasso_oracle},
      {"information_criterion_selection", ic_selection},
      {"metric_correctness", metrics},
      {"classifier_sanity", classifier_sanity},
      {"end_to_end_reproduction", end_to_end},
      {"no_leakage_audit", no_leakage},
      {"ingest_robustness", ingest_robustness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "/" << criteria.size() << "] " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
