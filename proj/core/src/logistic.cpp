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
#include <Eigen/Cholesky>
#include <cmath>

#include "chairsense/error.hpp"
#include "chairsense/models.hpp"

namespace chairsense::models::logistic {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

LossGradient loss_and_gradient(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y, double l2) {
  const Eigen::Index p = X.cols();
  if (theta.size() != p + 1) throw ValidationError("logistic: theta must have p + 1 entries");
  const double n = static_cast<double>(X.rows());
  const auto w = theta.head(p);
  const double b = theta[p];
  const Eigen::VectorXd z = (X * w).array() + b;

  LossGradient out;
  Eigen::VectorXd residual(X.rows());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    loss += softplus(z[i]) - y[i] * z[i];
    residual[i] = sigmoid(z[i]) - y[i];
  }
  out.loss = loss / n + 0.5 * l2 * w.squaredNorm();
  out.gradient.resize(p + 1);
  out.gradient.head(p) = X.transpose() * residual / n + l2 * w;
  out.gradient[p] = residual.sum() / n;
  return out;
}

LogRegModel train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LogRegParams& params) {
  const Eigen::Index p = X.cols();
  const double n = static_cast<double>(X.rows());
  Eigen::MatrixXd design(X.rows(), p + 1);
  design << X, Eigen::VectorXd::Ones(X.rows());

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p + 1);
  LossGradient cur = loss_and_gradient(theta, X, y, params.l2);
  for (int it = 0; it < params.max_iterations; ++it) {
    if (cur.gradient.lpNorm<Eigen::Infinity>() < params.tolerance) {
      return {theta.head(p), theta[p], it};
    }
    const Eigen::VectorXd z = design * theta;
    Eigen::VectorXd s(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double q = sigmoid(z[i]);
      s[i] = q * (1.0 - q);
    }
    Eigen::MatrixXd H = design.transpose() * s.asDiagonal() * design / n;
    H.diagonal().head(p).array() += params.l2;
    H.diagonal().array() += 1e-12;
    const Eigen::VectorXd step = H.ldlt().solve(-cur.gradient);

    // Backtracking keeps the objective decreasing when far from the optimum;
    // close to it, loss differences drown in rounding and full steps are taken.
    double t = 1.0;
    const double slope = cur.gradient.dot(step);
    const bool near_optimum = cur.gradient.lpNorm<Eigen::Infinity>() < 1e-6;
    LossGradient next;
    for (int k = 0; k < 60; ++k) {
      next = loss_and_gradient(theta + t * step, X, y, params.l2);
      if (near_optimum || next.loss <= cur.loss + 1e-4 * t * slope) break;
      t *= 0.5;
    }
    theta += t * step;
    cur = std::move(next);
  }
  if (cur.gradient.lpNorm<Eigen::Infinity>() < params.tolerance) {
    return {theta.head(p), theta[p], params.max_iterations};
  }
  throw ConvergenceError("logistic regression: gradient norm " +
                             std::to_string(cur.gradient.lpNorm<Eigen::Infinity>()) + " after " +
                             std::to_string(params.max_iterations) + " Newton steps",
                         cur.loss);
}

}  // namespace chairsense::models::logistic
