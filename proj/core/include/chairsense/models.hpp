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

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chairsense::models {

enum class ModelKind : std::uint8_t { LogReg, SvmRbf, RandomForest, Knn, GaussianNB };

std::string_view to_string(ModelKind kind) noexcept;
/// Accepts the names produced by to_string. Throws NotFoundError.
ModelKind model_kind_from_string(std::string_view name);

struct LogRegParams {
  double l2 = 1e-4;          ///< penalty on weights, not on the intercept
  double tolerance = 1e-8;   ///< gradient infinity-norm
  int max_iterations = 200;  ///< Newton steps
};

struct SvmParams {
  double C = 1.0;
  std::optional<double> gamma;  ///< default 1 / (p * mean feature variance)
  double tolerance = 1e-3;      ///< maximal violating pair gap
  long max_iterations = 10'000'000;
  int platt_folds = 5;
};

struct ForestParams {
  int n_trees = 100;
  int max_depth = 2;      ///< negative: unlimited
  bool bootstrap = true;
  int max_features = 0;   ///< features tried per split; 0: ceil(sqrt(p))
};

struct KnnParams {
  int k = 3;
};

struct NaiveBayesParams {
  double var_floor = 1e-9;  ///< relative to the mean feature variance
};

using Hyperparameters = std::variant<LogRegParams, SvmParams, ForestParams, KnnParams, NaiveBayesParams>;

struct ModelSpec {
  Hyperparameters params;
  std::uint64_t seed = 0;

  ModelKind kind() const noexcept { return static_cast<ModelKind>(params.index()); }
  std::string name() const { return std::string(to_string(kind())); }
};

/// The five classifiers with their default hyperparameters.
std::vector<ModelSpec> default_model_specs(std::uint64_t seed = 0);

/// Per-column affine map fitted on training data; zero-variance columns keep scale 1.
struct Scaler {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Scaler fit(const Eigen::MatrixXd& X);
  static Scaler identity(Eigen::Index p);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
};

struct LogRegModel {
  Eigen::VectorXd w;
  double b = 0.0;
  int iterations = 0;
};

struct SvmModel {
  Eigen::MatrixXd support_vectors;  ///< scaled feature space
  Eigen::VectorXd dual_coef;        ///< alpha_i * y_i (y in {-1, +1})
  double b = 0.0;
  double gamma = 1.0;
  double platt_a = -1.0;  ///< P(y=1|f) = 1 / (1 + exp(a f + b))
  double platt_b = 0.0;

  double decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

struct TreeNode {
  int feature = -1;  ///< -1 for leaves
  double threshold = 0.0;
  int left = -1;   ///< x[feature] <= threshold
  int right = -1;
  double p1 = 0.0;         ///< weighted share of class 1
  double weight = 0.0;     ///< weighted sample count
  double impurity = 0.0;   ///< Gini
};

struct Tree {
  std::vector<TreeNode> nodes;  ///< nodes[0] is the root

  double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

struct ForestModel {
  std::vector<Tree> trees;
  Eigen::Index n_features = 0;
};

struct KnnModel {
  Eigen::MatrixXd X;  ///< scaled training rows
  Eigen::VectorXd y;
  int k = 3;
};

struct NaiveBayesModel {
  double prior1 = 0.5;
  Eigen::MatrixXd mean;      ///< 2 x p, row = class
  Eigen::MatrixXd variance;  ///< 2 x p, floored
};

using ModelState = std::variant<LogRegModel, SvmModel, ForestModel, KnnModel, NaiveBayesModel>;

/// Immutable fitted classifier; the scaler is applied before the state.
class TrainedModel {
 public:
  TrainedModel(ModelSpec spec, Scaler scaler, ModelState state);

  ModelKind kind() const noexcept { return spec_.kind(); }
  const ModelSpec& spec() const noexcept { return spec_; }
  const Scaler& scaler() const noexcept { return scaler_; }
  const ModelState& state() const noexcept { return state_; }
  Eigen::Index n_features() const noexcept { return scaler_.mean.size(); }

  /// P(class 1) per row. Throws ValidationError on a column-count mismatch.
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const;

 private:
  ModelSpec spec_;
  Scaler scaler_;
  ModelState state_;
};

/// Fits one classifier on labels in {0, 1}. Deterministic for a given spec
/// and data. Throws ValidationError for n < 4, a single class, non-binary
/// labels or non-finite features.
TrainedModel fit(const ModelSpec& spec, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

inline Eigen::VectorXd predict_proba(const TrainedModel& model, const Eigen::MatrixXd& X) {
  return model.predict_proba(X);
}

/// Mean decrease in Gini impurity per feature, averaged over trees and
/// normalized to sum to 1. Throws ValidationError for other kinds.
Eigen::VectorXd rf_feature_importance(const TrainedModel& model);

/// JSON object {"kind": ..., "seed": ..., "hyperparameters": {...}}; absent
/// hyperparameters keep their defaults.
std::string spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json(std::string_view json_text);

/// Versioned JSON document with hyperparameters, scaling constants and state.
std::string save_model_json(const TrainedModel& model);
TrainedModel load_model_json(std::string_view json_text);

namespace logistic {

struct LossGradient {
  double loss = 0.0;
  Eigen::VectorXd gradient;  ///< p weights followed by the intercept
};

/// Mean logistic loss plus (l2 / 2) ||w||^2 at theta = (w, b).
LossGradient loss_and_gradient(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y, double l2);

LogRegModel train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LogRegParams& params);

}  // namespace logistic

namespace svm {

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double gamma);

struct SmoResult {
  Eigen::VectorXd alpha;
  double b = 0.0;  ///< f(x) = sum_i alpha_i y_i K(x_i, x) + b
  long iterations = 0;
  std::vector<double> dual_objective;  ///< per iteration, when traced
};

/// Dual soft-margin SVM on a precomputed kernel with labels in {-1, +1},
/// using second-order working-set selection.
SmoResult solve_smo(const Eigen::MatrixXd& K, const Eigen::VectorXd& y_pm, double C,
                    double tolerance, long max_iterations, bool trace = false);

/// Maximum-likelihood sigmoid fit P(y=1|f) = 1 / (1 + exp(a f + b)).
std::pair<double, double> fit_platt(const Eigen::VectorXd& decision, const Eigen::VectorXd& y01);

SvmModel train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const SvmParams& params,
               std::uint64_t seed);

}  // namespace svm

namespace forest {

/// Grows one CART tree on weighted rows (weight 0 excludes a row).
Tree grow_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const Eigen::VectorXd& weights,
               const ForestParams& params, std::mt19937_64& rng);

ForestModel train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const ForestParams& params,
                  std::uint64_t seed);

/// Unnormalized per-feature impurity decrease of one tree.
Eigen::VectorXd tree_impurity_decrease(const Tree& tree, Eigen::Index n_features);

}  // namespace forest

/// SplitMix64 finalizer; used to derive independent RNG seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace chairsense::models
