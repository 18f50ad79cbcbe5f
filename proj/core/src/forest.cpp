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
#include <numeric>

#include "chairsense/error.hpp"
#include "chairsense/models.hpp"

namespace chairsense::models::forest {

namespace {

double gini(double w1, double w) {
  if (w <= 0.0) return 0.0;
  const double p = w1 / w;
  return 2.0 * p * (1.0 - p);
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double decrease = -1.0;  ///< weighted parent impurity minus weighted children
};

struct Builder {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd& y;
  const Eigen::VectorXd& weights;
  const ForestParams& params;
  std::mt19937_64& rng;
  Tree tree;
  int n_try = 1;

  // Best split of `rows` on one feature, or decrease -1 if the feature is constant there.
  Split best_on_feature(const std::vector<Eigen::Index>& rows, int f, double w, double w1) const {
    std::vector<Eigen::Index> sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [&](Eigen::Index a, Eigen::Index b) {
      return X(a, f) != X(b, f) ? X(a, f) < X(b, f) : a < b;
    });
    Split best;
    best.feature = f;
    const double parent = w * gini(w1, w);
    double lw = 0.0;
    double lw1 = 0.0;
    for (std::size_t r = 0; r + 1 < sorted.size(); ++r) {
      const Eigen::Index i = sorted[r];
      lw += weights[i];
      lw1 += weights[i] * y[i];
      const double here = X(i, f);
      const double next = X(sorted[r + 1], f);
      if (!(next > here)) continue;
      const double rw = w - lw;
      const double children = lw * gini(lw1, lw) + rw * gini(w1 - lw1, rw);
      const double decrease = parent - children;
      if (decrease > best.decrease) {
        best.decrease = decrease;
        best.threshold = here + (next - here) / 2.0;
        if (!(best.threshold < next)) best.threshold = here;
      }
    }
    return best;
  }

  int grow(const std::vector<Eigen::Index>& rows, int depth) {
    double w = 0.0;
    double w1 = 0.0;
    for (auto i : rows) {
      w += weights[i];
      w1 += weights[i] * y[i];
    }
    const int id = static_cast<int>(tree.nodes.size());
    TreeNode node;
    node.weight = w;
    node.p1 = w > 0.0 ? w1 / w : 0.0;
    node.impurity = gini(w1, w);
    tree.nodes.push_back(node);

    const bool depth_left = params.max_depth < 0 || depth < params.max_depth;
    if (!depth_left || node.impurity <= 0.0 || rows.size() < 2) return id;

    // Visit features in random order until n_try non-constant ones were scored.
    std::vector<int> order(static_cast<std::size_t>(X.cols()));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Split best;
    int scored = 0;
    for (int f : order) {
      if (scored >= n_try) break;
      const Split s = best_on_feature(rows, f, w, w1);
      if (s.decrease < 0.0) continue;
      ++scored;
      if (s.decrease > best.decrease) best = s;
    }
    if (best.feature < 0) return id;

    std::vector<Eigen::Index> left, right;
    for (auto i : rows) (X(i, best.feature) <= best.threshold ? left : right).push_back(i);
    if (left.empty() || right.empty()) return id;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    auto& self = tree.nodes[static_cast<std::size_t>(id)];
    self.feature = best.feature;
    self.threshold = best.threshold;
    self.left = l;
    self.right = r;
    return id;
  }
};

}  // namespace

Tree grow_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const Eigen::VectorXd& weights,
               const ForestParams& params, std::mt19937_64& rng) {
  const auto p = static_cast<int>(X.cols());
  Builder b{X, y01, weights, params, rng, {}, 1};
  b.n_try = params.max_features > 0 ? std::min(params.max_features, p)
                                    : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p))));
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (weights[i] > 0.0) rows.push_back(i);
  }
  if (rows.empty()) throw ValidationError("grow_tree: no rows with positive weight");
  b.grow(rows, 0);
  return std::move(b.tree);
}

ForestModel train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01, const ForestParams& params,
                  std::uint64_t seed) {
  if (params.n_trees < 1) throw ValidationError("random_forest: n_trees must be positive");
  ForestModel m;
  m.n_features = X.cols();
  m.trees.reserve(static_cast<std::size_t>(params.n_trees));
  const Eigen::Index n = X.rows();
  for (int t = 0; t < params.n_trees; ++t) {
    // Independent stream per tree so results do not depend on scheduling.
    std::mt19937_64 rng(mix_seed(seed ^ static_cast<std::uint64_t>(t)));
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(n);
    if (params.bootstrap) {
      weights.setZero();
      std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
      for (Eigen::Index k = 0; k < n; ++k) weights[pick(rng)] += 1.0;
    }
    m.trees.push_back(grow_tree(X, y01, weights, params, rng));
  }
  return m;
}

Eigen::VectorXd tree_impurity_decrease(const Tree& tree, Eigen::Index n_features) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_features);
  if (tree.nodes.empty()) return out;
  const double root = tree.nodes.front().weight;
  for (const auto& node : tree.nodes) {
    if (node.feature < 0) continue;
    const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
    const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
    const double decrease =
        node.weight * node.impurity - l.weight * l.impurity - r.weight * r.impurity;
    out[node.feature] += decrease / root;
  }
  return out;
}

}  // namespace chairsense::models::forest
