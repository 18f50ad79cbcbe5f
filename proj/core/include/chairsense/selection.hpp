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
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace chairsense::selection {

/// Columns z-scored (mean 0, sample std 1), target centered. Zero-variance
/// columns are dropped; `kept` maps design columns back to raw columns.
struct StandardizedDesign {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  Eigen::VectorXd column_means;
  Eigen::VectorXd column_stds;
  double y_mean = 0.0;
  std::vector<std::size_t> kept;
  std::vector<std::string> names;
  std::vector<std::string> warnings;

  std::size_t n() const noexcept { return static_cast<std::size_t>(X.rows()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(X.cols()); }
};

/// Throws ValidationError when n < 2 or shapes disagree. Missing names are
/// generated as x0, x1, ...
StandardizedDesign standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               std::vector<std::string> names = {});

/// Coefficients with |w| at or below this are treated as exact zeros.
inline constexpr double kSupportThreshold = 1e-12;

struct LassoOptions {
  double tolerance = 1e-8;  ///< max coefficient change in one sweep
  int max_sweeps = 10000;
  bool record_objective = false;
};

struct LassoSolution {
  double alpha = 0.0;
  Eigen::VectorXd w;
  double rss = 0.0;
  std::size_t k = 0;  ///< support size
  int sweeps = 0;
  double objective = 0.0;
  std::vector<double> objective_trace;  ///< after each sweep, when recorded
};

/// (1 / 2n) ||y - Xw||^2 + alpha ||w||_1
double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& w, double alpha);

/// Smallest alpha whose solution is identically zero: max_j |x_j' y| / n.
double alpha_max(const StandardizedDesign& design);

/// Cyclic coordinate descent with soft-thresholding. Throws ConvergenceError
/// (with the last objective) when max_sweeps is exhausted.
LassoSolution lasso_fit(const StandardizedDesign& design, double alpha,
                        const LassoOptions& options = {},
                        const Eigen::VectorXd* warm_start = nullptr);

/// Geometric grid from alpha_max down to min_ratio * alpha_max, descending.
std::vector<double> default_alpha_grid(const StandardizedDesign& design, std::size_t points = 100,
                                       double min_ratio = 1e-3);

/// Solutions along a positive, descending grid, each warm-started from the last.
std::vector<LassoSolution> lasso_path(const StandardizedDesign& design,
                                      std::span<const double> grid,
                                      const LassoOptions& options = {});

/// Gaussian profile likelihood with variance rss / n; constants dropped.
/// AIC = n ln(rss/n) + 2k, BIC = n ln(rss/n) + ln(n) k. Both return -inf
/// for rss == 0, which marks the solution as degenerate.
double aic(const LassoSolution& solution, std::size_t n);
double bic(const LassoSolution& solution, std::size_t n);

struct SelectedFeature {
  std::string name;
  std::size_t column = 0;  ///< design column
  double coefficient = 0.0;
};

struct SelectionResult {
  std::vector<LassoSolution> path;
  std::vector<double> aic;
  std::vector<double> bic;
  std::size_t aic_index = 0;
  std::size_t bic_index = 0;
  std::vector<SelectedFeature> aic_support;
  std::vector<SelectedFeature> bic_support;
  std::vector<std::string> names;
};

/// Minimizes AIC and BIC over the path; ties go to the larger alpha.
/// Degenerate (rss == 0) entries are skipped; throws if all are degenerate.
SelectionResult select_features(std::vector<LassoSolution> path, std::size_t n,
                                std::span<const std::string> names);

/// At most `max_features` names from `support`, largest |coefficient|
/// first (ties by column), returned in column order.
std::vector<std::string> cap_support(std::span<const SelectedFeature> support,
                                     std::size_t max_features);

/// alpha, AIC, BIC, k, then one coefficient column per feature.
std::string selection_report_csv(const SelectionResult& result);

/// AIC/BIC supports plus the capped list used for model training.
std::string supports_json(const SelectionResult& result, std::span<const std::string> model_features);

/// Reads back the `model_features` list written by supports_json.
std::vector<std::string> model_features_from_json(std::string_view json_text);

}  // namespace chairsense::selection
