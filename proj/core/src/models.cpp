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
#include "chairsense/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chairsense/error.hpp"

namespace chairsense::models {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::LogReg:
      return "logreg";
    case ModelKind::SvmRbf:
      return "svm_rbf";
    case ModelKind::RandomForest:
      return "random_forest";
    case ModelKind::Knn:
      return "knn";
    case ModelKind::GaussianNB:
      return "gaussian_nb";
  }
  return "?";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (auto k : {ModelKind::LogReg, ModelKind::SvmRbf, ModelKind::RandomForest, ModelKind::Knn,
                 ModelKind::GaussianNB}) {
    if (to_string(k) == name) return k;
  }
  throw NotFoundError("unknown model kind '" + std::string(name) + "'");
}

std::vector<ModelSpec> default_model_specs(std::uint64_t seed) {
  return {ModelSpec{LogRegParams{}, seed}, ModelSpec{SvmParams{}, seed},
          ModelSpec{ForestParams{}, seed}, ModelSpec{KnnParams{}, seed},
          ModelSpec{NaiveBayesParams{}, seed}};
}

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Scaler Scaler::fit(const Eigen::MatrixXd& X) {
  Scaler s;
  const double n = static_cast<double>(X.rows());
  s.mean = X.colwise().mean();
  s.scale.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double var = n > 1 ? (X.col(j).array() - s.mean[j]).square().sum() / (n - 1) : 0.0;
    s.scale[j] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Scaler Scaler::identity(Eigen::Index p) {
  return {Eigen::RowVectorXd::Zero(p), Eigen::RowVectorXd::Ones(p)};
}

Eigen::MatrixXd Scaler::apply(const Eigen::MatrixXd& X) const {
  return (X.rowwise() - mean).array().rowwise() / scale.array();
}

double SvmModel::decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  const Eigen::VectorXd d2 = (support_vectors.rowwise() - x).rowwise().squaredNorm();
  return dual_coef.dot((-gamma * d2.array()).exp().matrix()) + b;
}

double Tree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  int at = 0;
  while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
    const auto& node = nodes[static_cast<std::size_t>(at)];
    at = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(at)].p1;
}

TrainedModel::TrainedModel(ModelSpec spec, Scaler scaler, ModelState state)
    : spec_(std::move(spec)), scaler_(std::move(scaler)), state_(std::move(state)) {
  if (spec_.params.index() != state_.index()) {
    throw ValidationError("TrainedModel: hyperparameters and state are of different kinds");
  }
  if (scaler_.mean.size() != scaler_.scale.size()) throw ValidationError("TrainedModel: bad scaler");
}

namespace {

double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

struct ProbaVisitor {
  const Eigen::MatrixXd& Z;

  Eigen::VectorXd operator()(const LogRegModel& m) const {
    Eigen::VectorXd z = Z * m.w;
    return z.unaryExpr([&](double v) { return sigmoid(v + m.b); });
  }

  Eigen::VectorXd operator()(const SvmModel& m) const {
    Eigen::VectorXd out(Z.rows());
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
      const double f = m.decision(Z.row(i));
      out[i] = sigmoid(-(m.platt_a * f + m.platt_b));
    }
    return out;
  }

  Eigen::VectorXd operator()(const ForestModel& m) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(Z.rows());
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
      double sum = 0.0;
      for (const auto& t : m.trees) sum += t.predict(Z.row(i));
      out[i] = m.trees.empty() ? 0.5 : sum / static_cast<double>(m.trees.size());
    }
    return out;
  }

  Eigen::VectorXd operator()(const KnnModel& m) const {
    const auto n = m.X.rows();
    const auto k = static_cast<Eigen::Index>(std::min<Eigen::Index>(m.k, n));
    Eigen::VectorXd out(Z.rows());
    std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
      for (Eigen::Index r = 0; r < n; ++r) {
        dist[static_cast<std::size_t>(r)] = {(m.X.row(r) - Z.row(i)).squaredNorm(), r};
      }
      // pair ordering breaks distance ties by training-row index
      std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
      double votes = 0.0;
      for (Eigen::Index r = 0; r < k; ++r) votes += m.y[dist[static_cast<std::size_t>(r)].second];
      out[i] = votes / static_cast<double>(k);
    }
    return out;
  }

  Eigen::VectorXd operator()(const NaiveBayesModel& m) const {
    Eigen::VectorXd out(Z.rows());
    const double log_prior[2] = {std::log(1.0 - m.prior1), std::log(m.prior1)};
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
      double ll[2];
      for (int c = 0; c < 2; ++c) {
        const auto var = m.variance.row(c).array();
        const auto diff = Z.row(i).array() - m.mean.row(c).array();
        ll[c] = log_prior[c] - 0.5 * ((2.0 * M_PI * var).log() + diff.square() / var).sum();
      }
      out[i] = sigmoid(ll[1] - ll[0]);
    }
    return out;
  }
};

void check_training_data(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw ValidationError("fit: X and y row counts differ");
  if (X.rows() < 4) throw ValidationError("fit: need at least 4 rows");
  if (X.cols() < 1) throw ValidationError("fit: need at least 1 feature");
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (!X.row(i).allFinite()) throw ValidationError("fit: non-finite feature value", static_cast<std::size_t>(i));
    if (y[i] != 0.0 && y[i] != 1.0) throw ValidationError("fit: labels must be 0 or 1", static_cast<std::size_t>(i));
  }
  const double ones = y.sum();
  if (ones == 0.0 || ones == static_cast<double>(y.size())) {
    throw ValidationError("fit: training labels contain a single class");
  }
}

NaiveBayesModel train_naive_bayes(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const NaiveBayesParams& params) {
  const Eigen::Index p = X.cols();
  NaiveBayesModel m;
  m.mean = Eigen::MatrixXd::Zero(2, p);
  m.variance = Eigen::MatrixXd::Zero(2, p);
  const Eigen::RowVectorXd overall_mean = X.colwise().mean();
  const double mean_var = ((X.rowwise() - overall_mean).array().square().colwise().sum() /
                           static_cast<double>(X.rows()))
                              .mean();
  const double floor = mean_var > 0.0 ? params.var_floor * mean_var : params.var_floor;
  for (int c = 0; c < 2; ++c) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (y[i] == static_cast<double>(c)) rows.push_back(i);
    }
    const double nc = static_cast<double>(rows.size());
    for (Eigen::Index j = 0; j < p; ++j) {
      double s = 0.0;
      for (auto i : rows) s += X(i, j);
      const double mu = s / nc;
      double ss = 0.0;
      for (auto i : rows) ss += (X(i, j) - mu) * (X(i, j) - mu);
      m.mean(c, j) = mu;
      m.variance(c, j) = std::max(ss / nc, floor);
    }
  }
  m.prior1 = y.sum() / static_cast<double>(y.size());
  return m;
}

}  // namespace

Eigen::VectorXd TrainedModel::predict_proba(const Eigen::MatrixXd& X) const {
  if (X.cols() != n_features()) {
    throw ValidationError("predict_proba: expected " + std::to_string(n_features()) +
                          " columns, got " + std::to_string(X.cols()));
  }
  const Eigen::MatrixXd Z = scaler_.apply(X);
  return std::visit(ProbaVisitor{Z}, state_);
}

TrainedModel fit(const ModelSpec& spec, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  check_training_data(X, y);
  switch (spec.kind()) {
    case ModelKind::LogReg: {
      Scaler s = Scaler::fit(X);
      auto state = logistic::train(s.apply(X), y, std::get<LogRegParams>(spec.params));
      return {spec, std::move(s), std::move(state)};
    }
    case ModelKind::SvmRbf: {
      Scaler s = Scaler::fit(X);
      auto state = svm::train(s.apply(X), y, std::get<SvmParams>(spec.params), spec.seed);
      return {spec, std::move(s), std::move(state)};
    }
    case ModelKind::RandomForest: {
      // Threshold splits are invariant to per-column affine maps.
      auto state = forest::train(X, y, std::get<ForestParams>(spec.params), spec.seed);
      return {spec, Scaler::identity(X.cols()), std::move(state)};
    }
    case ModelKind::Knn: {
      const auto& params = std::get<KnnParams>(spec.params);
      if (params.k < 1) throw ValidationError("knn: k must be positive");
      Scaler s = Scaler::fit(X);
      KnnModel state{s.apply(X), y, params.k};
      return {spec, std::move(s), std::move(state)};
    }
    case ModelKind::GaussianNB: {
      auto state = train_naive_bayes(X, y, std::get<NaiveBayesParams>(spec.params));
      return {spec, Scaler::identity(X.cols()), std::move(state)};
    }
  }
  throw ValidationError("fit: unknown model kind");
}

Eigen::VectorXd rf_feature_importance(const TrainedModel& model) {
  const auto* forest = std::get_if<ForestModel>(&model.state());
  if (forest == nullptr) {
    throw ValidationError("rf_feature_importance: model is " + model.spec().name() +
                          ", not random_forest");
  }
  const Eigen::Index p = forest->n_features;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(p);
  for (const auto& tree : forest->trees) total += forest::tree_impurity_decrease(tree, p);
  if (!forest->trees.empty()) total /= static_cast<double>(forest->trees.size());
  const double sum = total.sum();
  if (!(sum > 0.0)) return Eigen::VectorXd::Constant(p, 1.0 / static_cast<double>(p));
  return total / sum;
}

}  // namespace chairsense::models
