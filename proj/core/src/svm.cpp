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
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <tuple>

#include "chairsense/error.hpp"
#include "chairsense/models.hpp"

namespace chairsense::models::svm {

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double gamma) {
  const Eigen::VectorXd a2 = A.rowwise().squaredNorm();
  const Eigen::VectorXd b2 = B.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = (-2.0 * A * B.transpose()).colwise() + a2;
  d2.rowwise() += b2.transpose();
  return (-gamma * d2.array().max(0.0)).exp().matrix();
}

namespace {

constexpr double kTau = 1e-12;

double dual_value(const Eigen::VectorXd& alpha, const Eigen::VectorXd& grad) {
  // With G = Q alpha - e, the minimized objective is 0.5 alpha'(G - e).
  return -0.5 * alpha.dot(grad.array().matrix() - Eigen::VectorXd::Ones(alpha.size()));
}

}  // namespace

SmoResult solve_smo(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C, double tolerance,
                    long max_iterations, bool trace) {
  const Eigen::Index n = K.rows();
  if (K.cols() != n || y.size() != n) throw ValidationError("solve_smo: shape mismatch");
  if (!(C > 0.0)) throw ValidationError("solve_smo: C must be positive");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y[i] != 1.0 && y[i] != -1.0) throw ValidationError("solve_smo: labels must be +-1");
  }
  SmoResult res;
  Eigen::VectorXd& alpha = res.alpha;
  alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd G = Eigen::VectorXd::Constant(n, -1.0);
  auto Q = [&](Eigen::Index i, Eigen::Index j) { return y[i] * y[j] * K(i, j); };
  auto in_up = [&](Eigen::Index t) { return (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0); };
  auto in_low = [&](Eigen::Index t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C); };

  long iter = 0;
  while (true) {
    Eigen::Index i = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * G[t] >= gmax) {
        gmax = -y[t] * G[t];
        i = t;
      }
    }
    Eigen::Index j = -1;
    double gmin = std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[t] * G[t];
      gmin = std::min(gmin, v);
      const double b = gmax - v;
      if (i >= 0 && b > 0.0) {
        double a = K(i, i) + K(t, t) - 2.0 * K(i, t);
        if (a <= 0.0) a = kTau;
        const double score = -(b * b) / a;
        if (score <= best) {
          best = score;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax - gmin < tolerance) break;
    if (++iter > max_iterations) {
      throw ConvergenceError("solve_smo: no convergence after " + std::to_string(max_iterations) +
                                 " iterations",
                             dual_value(alpha, G));
    }

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
    if (quad <= 0.0) quad = kTau;
    if (y[i] != y[j]) {
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (Eigen::Index t = 0; t < n; ++t) G[t] += Q(t, i) * di + Q(t, j) * dj;
    if (trace) res.dual_objective.push_back(dual_value(alpha, G));
  }
  res.iterations = iter;

  // Offset from free vectors, otherwise the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int n_free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (alpha[t] >= C) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      sum_free += yg;
      ++n_free;
    }
  }
  const double rho = n_free > 0 ? sum_free / n_free : (ub + lb) / 2.0;
  res.b = -rho;
  return res;
}

std::pair<double, double> fit_platt(const Eigen::VectorXd& f, const Eigen::VectorXd& y01) {
  const Eigen::Index n = f.size();
  const double prior1 = y01.sum();
  const double prior0 = static_cast<double>(n) - prior1;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) t[i] = y01[i] > 0.5 ? hi : lo;

  auto objective = [&](double A, double B) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = f[i] * A + B;
      v += z >= 0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return v;
  };
  double A = 0.0;
  double B = std::log((prior0 + 1.0) / (prior1 + 1.0));
  double fval = objective(A, B);
  for (int it = 0; it < 100; ++it) {
    double h11 = 1e-12, h22 = 1e-12, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = f[i] * A + B;
      double p, q;
      if (z >= 0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += f[i] * f[i] * d2;
      h22 += d2;
      h21 += f[i] * d2;
      const double d1 = t[i] - p;
      g1 += f[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;
    double step = 1.0;
    while (step >= 1e-10) {
      const double nA = A + step * dA;
      const double nB = B + step * dB;
      const double nf = objective(nA, nB);
      if (nf < fval + 1e-4 * step * gd) {
        A = nA;
        B = nB;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < 1e-10) break;
  }
  return {A, B};
}

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& M, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), M.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = M.row(rows[r]);
  return out;
}

Eigen::MatrixXd take(const Eigen::MatrixXd& K, const std::vector<Eigen::Index>& rows,
                     const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = K(rows[r], cols[c]);
    }
  }
  return out;
}

// Out-of-fold decision values; nullopt when some fold cannot be trained.
std::optional<Eigen::VectorXd> cross_val_decision(const Eigen::MatrixXd& K, const Eigen::VectorXd& y_pm,
                                                  const SvmParams& params, std::uint64_t seed) {
  const Eigen::Index n = K.rows();
  const int folds = params.platt_folds;
  if (folds < 2 || n < 2 * folds) return std::nullopt;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(mix_seed(seed));
  std::shuffle(order.begin(), order.end(), rng);

  Eigen::VectorXd out(n);
  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, held;
    for (std::size_t r = 0; r < order.size(); ++r) {
      (static_cast<int>(r % static_cast<std::size_t>(folds)) == f ? held : train).push_back(order[r]);
    }
    Eigen::VectorXd y_train(static_cast<Eigen::Index>(train.size()));
    for (std::size_t r = 0; r < train.size(); ++r) y_train[static_cast<Eigen::Index>(r)] = y_pm[train[r]];
    if (y_train.maxCoeff() == y_train.minCoeff()) return std::nullopt;
    const SmoResult sub = solve_smo(take(K, train, train), y_train, params.C, params.tolerance,
                                    params.max_iterations);
    const Eigen::MatrixXd cross = take(K, held, train);
    const Eigen::VectorXd dec = cross * sub.alpha.cwiseProduct(y_train);
    for (std::size_t r = 0; r < held.size(); ++r) out[held[r]] = dec[static_cast<Eigen::Index>(r)] + sub.b;
  }
  return out;
}

}  // namespace

SvmModel train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const SvmParams& params,
               std::uint64_t seed) {
  SvmModel m;
  if (params.gamma) {
    m.gamma = *params.gamma;
  } else {
    const Eigen::RowVectorXd mu = X.colwise().mean();
    const double mean_var = ((X.rowwise() - mu).array().square().colwise().sum() /
                             static_cast<double>(X.rows()))
                                .mean();
    m.gamma = mean_var > 0.0 ? 1.0 / (static_cast<double>(X.cols()) * mean_var) : 1.0;
  }
  if (!(m.gamma > 0.0)) throw ValidationError("svm: gamma must be positive");
  const Eigen::VectorXd y_pm = 2.0 * y01.array() - 1.0;
  const Eigen::MatrixXd K = rbf_kernel(X, X, m.gamma);
  const SmoResult sol = solve_smo(K, y_pm, params.C, params.tolerance, params.max_iterations);

  std::vector<Eigen::Index> sv;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (sol.alpha[i] > 0.0) sv.push_back(i);
  }
  m.support_vectors = take_rows(X, sv);
  m.dual_coef.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t r = 0; r < sv.size(); ++r) {
    m.dual_coef[static_cast<Eigen::Index>(r)] = sol.alpha[sv[r]] * y_pm[sv[r]];
  }
  m.b = sol.b;

  auto decision = cross_val_decision(K, y_pm, params, seed);
  if (!decision) decision = K * sol.alpha.cwiseProduct(y_pm) + Eigen::VectorXd::Constant(X.rows(), sol.b);
  std::tie(m.platt_a, m.platt_b) = fit_platt(*decision, y01);
  return m;
}

}  // namespace chairsense::models::svm
