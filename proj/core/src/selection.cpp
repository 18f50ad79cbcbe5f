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
#include "chairsense/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>

#include "chairsense/error.hpp"
#include "text.hpp"

namespace chairsense::selection {

StandardizedDesign standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               std::vector<std::string> names) {
  const Eigen::Index n = X.rows();
  if (n < 2) throw ValidationError("standardize: need at least 2 rows");
  if (X.cols() < 1) throw ValidationError("standardize: need at least 1 column");
  if (y.size() != n) throw ValidationError("standardize: X and y row counts differ");
  if (names.empty()) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(names.size()) != X.cols()) {
    throw ValidationError("standardize: name count does not match columns");
  }
  if (!X.allFinite() || !y.allFinite()) throw ValidationError("standardize: non-finite input");

  StandardizedDesign d;
  std::vector<double> means;
  std::vector<double> stds;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    const double sd = std::sqrt((X.col(j).array() - mean).square().sum() / static_cast<double>(n - 1));
    if (!(sd > 0.0) || sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
      d.warnings.push_back("column '" + names[static_cast<std::size_t>(j)] +
                           "' has zero variance and was dropped");
      continue;
    }
    d.kept.push_back(static_cast<std::size_t>(j));
    d.names.push_back(names[static_cast<std::size_t>(j)]);
    means.push_back(mean);
    stds.push_back(sd);
  }
  const auto p = static_cast<Eigen::Index>(d.kept.size());
  d.X.resize(n, p);
  d.column_means.resize(p);
  d.column_stds.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto src = static_cast<Eigen::Index>(d.kept[static_cast<std::size_t>(j)]);
    d.column_means[j] = means[static_cast<std::size_t>(j)];
    d.column_stds[j] = stds[static_cast<std::size_t>(j)];
    d.X.col(j) = (X.col(src).array() - d.column_means[j]) / d.column_stds[j];
  }
  d.y_mean = y.mean();
  d.y = y.array() - d.y_mean;
  return d;
}

double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& w, double alpha) {
  const double n = static_cast<double>(X.rows());
  return (y - X * w).squaredNorm() / (2.0 * n) + alpha * w.lpNorm<1>();
}

double alpha_max(const StandardizedDesign& design) {
  if (design.p() == 0) return 0.0;
  return (design.X.transpose() * design.y).cwiseAbs().maxCoeff() / static_cast<double>(design.n());
}

namespace {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

std::size_t support_size(const Eigen::VectorXd& w) {
  return static_cast<std::size_t>((w.array().abs() > kSupportThreshold).count());
}

}  // namespace

LassoSolution lasso_fit(const StandardizedDesign& design, double alpha, const LassoOptions& options,
                        const Eigen::VectorXd* warm_start) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("lasso_fit: alpha must be >= 0");
  const auto& X = design.X;
  const auto& y = design.y;
  const Eigen::Index p = X.cols();
  const double n = static_cast<double>(X.rows());
  if (X.rows() == 0) throw ValidationError("lasso_fit: empty design");

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  if (warm_start != nullptr) {
    if (warm_start->size() != p) throw ValidationError("lasso_fit: warm start has wrong length");
    w = *warm_start;
  }
  // w = 0 is optimal here; return it exactly instead of an iterate with rounding residue.
  if (alpha >= alpha_max(design)) {
    LassoSolution zero;
    zero.alpha = alpha;
    zero.w = Eigen::VectorXd::Zero(p);
    zero.rss = y.squaredNorm();
    zero.objective = zero.rss / (2.0 * n);
    if (options.record_objective) zero.objective_trace.push_back(zero.objective);
    return zero;
  }
  const Eigen::VectorXd curvature = X.colwise().squaredNorm().transpose() / n;
  Eigen::VectorXd r = y - X * w;

  LassoSolution sol;
  sol.alpha = alpha;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double c = curvature[j];
      const double old = w[j];
      double updated = 0.0;
      if (c > 0.0) {
        const double rho = X.col(j).dot(r) / n + c * old;
        updated = soft_threshold(rho, alpha) / c;
      }
      if (updated != old) {
        r.noalias() -= (updated - old) * X.col(j);
        w[j] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    if (options.record_objective) sol.objective_trace.push_back(lasso_objective(X, y, w, alpha));
    if (max_change < options.tolerance) {
      sol.sweeps = sweep;
      sol.w = std::move(w);
      sol.rss = (y - X * sol.w).squaredNorm();
      sol.k = support_size(sol.w);
      sol.objective = sol.rss / (2.0 * n) + alpha * sol.w.lpNorm<1>();
      return sol;
    }
  }
  throw ConvergenceError("lasso_fit: no convergence after " + std::to_string(options.max_sweeps) +
                             " sweeps at alpha=" + text::format_double(alpha),
                         lasso_objective(X, y, w, alpha));
}

std::vector<double> default_alpha_grid(const StandardizedDesign& design, std::size_t points,
                                       double min_ratio) {
  if (points == 0) throw ValidationError("alpha grid needs at least one point");
  if (!(min_ratio > 0.0 && min_ratio < 1.0)) throw ValidationError("min_ratio must be in (0, 1)");
  const double top = alpha_max(design);
  if (!(top > 0.0)) throw ValidationError("alpha_max is zero: target is uncorrelated with every column");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = top;
    return grid;
  }
  const double step = std::log(min_ratio) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = top * std::exp(step * static_cast<double>(i));
  grid[0] = top;
  return grid;
}

std::vector<LassoSolution> lasso_path(const StandardizedDesign& design, std::span<const double> grid,
                                      const LassoOptions& options) {
  if (grid.empty()) throw ValidationError("lasso_path: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw ValidationError("lasso_path: grid values must be positive", i);
    if (i > 0 && grid[i] > grid[i - 1]) throw ValidationError("lasso_path: grid must be descending", i);
  }
  std::vector<LassoSolution> path;
  path.reserve(grid.size());
  for (double alpha : grid) {
    const Eigen::VectorXd* warm = path.empty() ? nullptr : &path.back().w;
    path.push_back(lasso_fit(design, alpha, options, warm));
  }
  return path;
}

namespace {

double gaussian_fit_term(const LassoSolution& s, std::size_t n) {
  if (n == 0) throw ValidationError("information criterion needs n > 0");
  if (!(s.rss > 0.0)) return -std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  return nn * std::log(s.rss / nn);
}

}  // namespace

double aic(const LassoSolution& solution, std::size_t n) {
  const double fit = gaussian_fit_term(solution, n);
  return std::isinf(fit) ? fit : fit + 2.0 * static_cast<double>(solution.k);
}

double bic(const LassoSolution& solution, std::size_t n) {
  const double fit = gaussian_fit_term(solution, n);
  return std::isinf(fit) ? fit
                         : fit + std::log(static_cast<double>(n)) * static_cast<double>(solution.k);
}

namespace {

std::size_t argmin_score(const std::vector<double>& scores, const std::vector<LassoSolution>& path) {
  std::size_t best = scores.size();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isinf(scores[i])) continue;
    if (best == scores.size() || scores[i] < scores[best] ||
        (scores[i] == scores[best] && path[i].alpha > path[best].alpha)) {
      best = i;
    }
  }
  if (best == scores.size()) throw ValidationError("select_features: every path entry is degenerate (rss = 0)");
  return best;
}

std::vector<SelectedFeature> support_of(const LassoSolution& s, std::span<const std::string> names) {
  std::vector<SelectedFeature> out;
  for (Eigen::Index j = 0; j < s.w.size(); ++j) {
    if (std::abs(s.w[j]) > kSupportThreshold) {
      out.push_back({names[static_cast<std::size_t>(j)], static_cast<std::size_t>(j), s.w[j]});
    }
  }
  return out;
}

}  // namespace

SelectionResult select_features(std::vector<LassoSolution> path, std::size_t n,
                                std::span<const std::string> names) {
  if (path.empty()) throw ValidationError("select_features: empty path");
  for (const auto& s : path) {
    if (static_cast<std::size_t>(s.w.size()) != names.size()) {
      throw ValidationError("select_features: name count does not match coefficients");
    }
  }
  SelectionResult r;
  r.names.assign(names.begin(), names.end());
  for (const auto& s : path) {
    r.aic.push_back(aic(s, n));
    r.bic.push_back(bic(s, n));
  }
  r.aic_index = argmin_score(r.aic, path);
  r.bic_index = argmin_score(r.bic, path);
  r.aic_support = support_of(path[r.aic_index], names);
  r.bic_support = support_of(path[r.bic_index], names);
  r.path = std::move(path);
  return r;
}

std::vector<std::string> cap_support(std::span<const SelectedFeature> support, std::size_t max_features) {
  std::vector<SelectedFeature> ranked(support.begin(), support.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    const double fa = std::abs(a.coefficient);
    const double fb = std::abs(b.coefficient);
    return fa != fb ? fa > fb : a.column < b.column;
  });
  if (ranked.size() > max_features) ranked.resize(max_features);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.column < b.column; });
  std::vector<std::string> out;
  for (auto& f : ranked) out.push_back(f.name);
  return out;
}

std::string selection_report_csv(const SelectionResult& result) {
  std::string out = "alpha,aic,bic,k";
  for (const auto& n : result.names) out += "," + n;
  out += '\n';
  for (std::size_t i = 0; i < result.path.size(); ++i) {
    const auto& s = result.path[i];
    out += text::format_double(s.alpha) + "," + text::format_double(result.aic[i]) + "," +
           text::format_double(result.bic[i]) + "," + std::to_string(s.k);
    for (Eigen::Index j = 0; j < s.w.size(); ++j) out += "," + text::format_double(s.w[j]);
    out += '\n';
  }
  return out;
}

std::string supports_json(const SelectionResult& result, std::span<const std::string> model_features) {
  using nlohmann::json;
  auto describe = [&](std::size_t index, const std::vector<SelectedFeature>& support,
                      const std::vector<double>& scores) {
    json features = json::array();
    for (const auto& f : support) features.push_back({{"name", f.name}, {"coefficient", f.coefficient}});
    return json{{"alpha", result.path[index].alpha},
                {"score", scores[index]},
                {"k", result.path[index].k},
                {"features", std::move(features)}};
  };
  json doc{{"format", "chairsense.supports"},
           {"version", 1},
           {"aic", describe(result.aic_index, result.aic_support, result.aic)},
           {"bic", describe(result.bic_index, result.bic_support, result.bic)},
           {"model_features", std::vector<std::string>(model_features.begin(), model_features.end())}};
  return doc.dump(2) + "\n";
}

std::vector<std::string> model_features_from_json(std::string_view json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text.begin(), json_text.end());
    return doc.at("model_features").get<std::vector<std::string>>();
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("supports: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("supports: ") + e.what());
  }
}

}  // namespace chairsense::selection
