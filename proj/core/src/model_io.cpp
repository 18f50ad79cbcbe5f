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
#include <nlohmann/json.hpp>

#include "chairsense/error.hpp"
#include "chairsense/models.hpp"

namespace chairsense::models {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
json vec(const Eigen::RowVectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec(Eigen::RowVectorXd(m.row(i))));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::VectorXd to_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd to_mat(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  Eigen::MatrixXd m(rows, cols);
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows) throw ValidationError("model json: bad matrix");
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto r = to_vec(data[static_cast<std::size_t>(i)]);
    if (r.size() != cols) throw ValidationError("model json: bad matrix row");
    m.row(i) = r.transpose();
  }
  return m;
}

json params_json(const Hyperparameters& h) {
  struct V {
    json operator()(const LogRegParams& p) const {
      return {{"l2", p.l2}, {"tolerance", p.tolerance}, {"max_iterations", p.max_iterations}};
    }
    json operator()(const SvmParams& p) const {
      json j{{"C", p.C}, {"tolerance", p.tolerance}, {"max_iterations", p.max_iterations},
             {"platt_folds", p.platt_folds}};
      j["gamma"] = p.gamma ? json(*p.gamma) : json(nullptr);
      return j;
    }
    json operator()(const ForestParams& p) const {
      return {{"n_trees", p.n_trees}, {"max_depth", p.max_depth}, {"bootstrap", p.bootstrap},
              {"max_features", p.max_features}};
    }
    json operator()(const KnnParams& p) const { return {{"k", p.k}}; }
    json operator()(const NaiveBayesParams& p) const { return {{"var_floor", p.var_floor}}; }
  };
  return std::visit(V{}, h);
}

json state_json(const ModelState& s) {
  struct V {
    json operator()(const LogRegModel& m) const {
      return {{"w", vec(m.w)}, {"b", m.b}, {"iterations", m.iterations}};
    }
    json operator()(const SvmModel& m) const {
      return {{"support_vectors", mat(m.support_vectors)}, {"dual_coef", vec(m.dual_coef)},
              {"b", m.b}, {"gamma", m.gamma}, {"platt_a", m.platt_a}, {"platt_b", m.platt_b}};
    }
    json operator()(const ForestModel& m) const {
      json trees = json::array();
      for (const auto& t : m.trees) {
        json nodes = json::array();
        for (const auto& n : t.nodes) {
          nodes.push_back({n.feature, n.threshold, n.left, n.right, n.p1, n.weight, n.impurity});
        }
        trees.push_back(std::move(nodes));
      }
      return {{"n_features", m.n_features}, {"trees", std::move(trees)}};
    }
    json operator()(const KnnModel& m) const {
      return {{"X", mat(m.X)}, {"y", vec(m.y)}, {"k", m.k}};
    }
    json operator()(const NaiveBayesModel& m) const {
      return {{"prior1", m.prior1}, {"mean", mat(m.mean)}, {"variance", mat(m.variance)}};
    }
  };
  return std::visit(V{}, s);
}

Hyperparameters params_from_json(ModelKind kind, const json& h) {
  switch (kind) {
    case ModelKind::LogReg: {
      LogRegParams p;
      p.l2 = h.value("l2", p.l2);
      p.tolerance = h.value("tolerance", p.tolerance);
      p.max_iterations = h.value("max_iterations", p.max_iterations);
      return p;
    }
    case ModelKind::SvmRbf: {
      SvmParams p;
      p.C = h.value("C", p.C);
      p.tolerance = h.value("tolerance", p.tolerance);
      p.max_iterations = h.value("max_iterations", p.max_iterations);
      p.platt_folds = h.value("platt_folds", p.platt_folds);
      if (h.contains("gamma") && !h.at("gamma").is_null()) p.gamma = h.at("gamma").get<double>();
      return p;
    }
    case ModelKind::RandomForest: {
      ForestParams p;
      p.n_trees = h.value("n_trees", p.n_trees);
      p.max_depth = h.value("max_depth", p.max_depth);
      p.bootstrap = h.value("bootstrap", p.bootstrap);
      p.max_features = h.value("max_features", p.max_features);
      return p;
    }
    case ModelKind::Knn: {
      KnnParams p;
      p.k = h.value("k", p.k);
      return p;
    }
    case ModelKind::GaussianNB: {
      NaiveBayesParams p;
      p.var_floor = h.value("var_floor", p.var_floor);
      return p;
    }
  }
  throw ValidationError("unknown model kind");
}

}  // namespace

std::string spec_to_json(const ModelSpec& spec) {
  return json{{"kind", to_string(spec.kind())},
              {"seed", spec.seed},
              {"hyperparameters", params_json(spec.params)}}
      .dump();
}

ModelSpec spec_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model spec: ") + e.what());
  }
  try {
    ModelSpec spec;
    const ModelKind kind = model_kind_from_string(doc.at("kind").get<std::string>());
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.params = params_from_json(kind, doc.value("hyperparameters", json::object()));
    return spec;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model spec: ") + e.what());
  }
}

std::string save_model_json(const TrainedModel& model) {
  json doc{{"format", "chairsense.model"},
           {"version", kFormatVersion},
           {"kind", to_string(model.kind())},
           {"seed", model.spec().seed},
           {"hyperparameters", params_json(model.spec().params)},
           {"scaler", {{"mean", vec(model.scaler().mean)}, {"scale", vec(model.scaler().scale)}}},
           {"state", state_json(model.state())}};
  return doc.dump();
}

TrainedModel load_model_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model json: ") + e.what());
  }
  try {
    if (doc.at("format") != "chairsense.model") throw ValidationError("model json: wrong format tag");
    if (doc.at("version").get<int>() != kFormatVersion) {
      throw ValidationError("model json: unsupported version " + doc.at("version").dump());
    }
    const ModelKind kind = model_kind_from_string(doc.at("kind").get<std::string>());
    const json& h = doc.at("hyperparameters");
    const json& s = doc.at("state");
    ModelSpec spec;
    spec.seed = doc.at("seed").get<std::uint64_t>();
    Scaler scaler{to_vec(doc.at("scaler").at("mean")).transpose(),
                  to_vec(doc.at("scaler").at("scale")).transpose()};
    switch (kind) {
      case ModelKind::LogReg: {
        spec.params = LogRegParams{h.at("l2"), h.at("tolerance"), h.at("max_iterations")};
        LogRegModel m{to_vec(s.at("w")), s.at("b"), s.at("iterations")};
        return {spec, scaler, m};
      }
      case ModelKind::SvmRbf: {
        SvmParams p;
        p.C = h.at("C");
        p.tolerance = h.at("tolerance");
        p.max_iterations = h.at("max_iterations");
        p.platt_folds = h.at("platt_folds");
        if (!h.at("gamma").is_null()) p.gamma = h.at("gamma").get<double>();
        spec.params = p;
        SvmModel m;
        m.support_vectors = to_mat(s.at("support_vectors"));
        m.dual_coef = to_vec(s.at("dual_coef"));
        m.b = s.at("b");
        m.gamma = s.at("gamma");
        m.platt_a = s.at("platt_a");
        m.platt_b = s.at("platt_b");
        return {spec, scaler, m};
      }
      case ModelKind::RandomForest: {
        spec.params = ForestParams{h.at("n_trees"), h.at("max_depth"), h.at("bootstrap"),
                                   h.at("max_features")};
        ForestModel m;
        m.n_features = s.at("n_features");
        for (const auto& t : s.at("trees")) {
          Tree tree;
          for (const auto& n : t) {
            tree.nodes.push_back({n.at(0), n.at(1), n.at(2), n.at(3), n.at(4), n.at(5), n.at(6)});
          }
          m.trees.push_back(std::move(tree));
        }
        return {spec, scaler, std::move(m)};
      }
      case ModelKind::Knn: {
        spec.params = KnnParams{h.at("k")};
        KnnModel m{to_mat(s.at("X")), to_vec(s.at("y")), s.at("k")};
        return {spec, scaler, std::move(m)};
      }
      case ModelKind::GaussianNB: {
        spec.params = NaiveBayesParams{h.at("var_floor")};
        NaiveBayesModel m{s.at("prior1"), to_mat(s.at("mean")), to_mat(s.at("variance"))};
        return {spec, scaler, std::move(m)};
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model json: ") + e.what());
  }
  throw ValidationError("model json: unknown kind");
}

}  // namespace chairsense::models
