// Copyright 2026 The PiNet Authors
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

#include "pinet/model.hpp"

#include <cmath>
#include <string>

#include "pinet/error.hpp"

namespace pinet {

namespace {

void append(std::vector<Var>& out, const std::vector<Var>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

PropagationSpec make_spec(PropagationMode mode) {
  return mode == PropagationMode::kLearned ? PropagationSpec::learned()
                                           : PropagationSpec::fixed(mode);
}

GcnHead init_head(int in, int hidden1, int hidden2, PropagationMode mode,
                  Rng& rng) {
  GcnHead h;
  h.w0 = glorot_uniform(in, hidden1, rng);
  h.w1 = glorot_uniform(hidden1, hidden2, rng);
  h.layers = {make_spec(mode), make_spec(mode)};
  return h;
}

void check_features(const Graph& g, const GcnHead& head) {
  if (static_cast<Eigen::Index>(g.feature_dim()) != head.w0.rows()) {
    throw DimensionError("graph has " + std::to_string(g.feature_dim()) +
                         " features, model expects " +
                         std::to_string(head.w0.rows()));
  }
}

}  // namespace

std::vector<Var> GcnHead::parameters() const {
  std::vector<Var> out{w0, w1};
  for (const auto& layer : layers) {
    if (layer.is_learned()) {
      out.push_back(layer.p_raw);
      out.push_back(layer.q_raw);
    }
  }
  return out;
}

GcnHead GcnHead::clone() const {
  return GcnHead{w0.clone_leaf(), w1.clone_leaf(),
                 {layers[0].clone(), layers[1].clone()}};
}

std::vector<Var> PiNetParams::parameters() const {
  std::vector<Var> out = attention.parameters();
  append(out, features.parameters());
  out.push_back(w_dense);
  return out;
}

PiNetParams PiNetParams::clone() const {
  return PiNetParams{attention.clone(), features.clone(), w_dense.clone_leaf()};
}

std::vector<Var> BaselineParams::parameters() const {
  std::vector<Var> out = gcn.parameters();
  out.push_back(w_dense);
  return out;
}

BaselineParams BaselineParams::clone() const {
  return BaselineParams{gcn.clone(), w_dense.clone_leaf(), max_vertices};
}

Var gcn_head(const Graph& g, const GcnHead& head) {
  check_features(g, head);
  const Var x = Var::constant(g.features());
  const Var a1 = build_propagation(g.adjacency(), head.layers[0]);
  const Var h1 = relu(matmul(a1, matmul(x, head.w0)));
  const Var a2 = head.layers[1].mode == head.layers[0].mode &&
                         !head.layers[1].is_learned()
                     ? a1
                     : build_propagation(g.adjacency(), head.layers[1]);
  return relu(matmul(a2, matmul(h1, head.w1)));
}

Var pinet_forward(const Graph& g, const PiNetParams& params) {
  const Var attention = row_softmax(transpose(gcn_head(g, params.attention)));
  const Var embedded = matmul(attention, gcn_head(g, params.features));
  const Var flat = flatten_rows(embedded);
  if (flat.cols() != params.w_dense.rows()) {
    throw DimensionError("pinet_forward: dense layer expects " +
                         std::to_string(params.w_dense.rows()) +
                         " inputs, got " + std::to_string(flat.cols()));
  }
  return row_softmax(matmul(flat, params.w_dense));
}

Var gcn_mean_forward(const Graph& g, const BaselineParams& params) {
  const Var pooled = mean_rows(gcn_head(g, params.gcn));
  return row_softmax(matmul(pooled, params.w_dense));
}

Var gcn_dense_forward(const Graph& g, const BaselineParams& params) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  if (n > params.max_vertices) {
    throw CapacityError("gcn_dense_forward: graph has " + std::to_string(n) +
                        " vertices, padding width is " +
                        std::to_string(params.max_vertices));
  }
  const Var padded = pad_rows(gcn_head(g, params.gcn), params.max_vertices);
  return row_softmax(matmul(flatten_rows(padded), params.w_dense));
}

Var glorot_uniform(int rows, int cols, Rng& rng) {
  if (rows <= 0 || cols <= 0) {
    throw ParameterError("glorot_uniform: dimensions must be positive");
  }
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix w(rows, cols);
  // Fill row by row so the draw order does not depend on storage order.
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) w(i, j) = dist(rng);
  }
  return Var::parameter(std::move(w));
}

PiNetParams init_pinet_params(const ModelConfig& c, Rng& rng) {
  if (c.num_classes <= 0) throw ParameterError("num_classes must be positive");
  PiNetParams p;
  p.attention =
      init_head(c.feature_dim, c.hidden1, c.attention_hidden2, c.prop_mode, rng);
  p.features = init_head(c.feature_dim, c.hidden1, c.hidden2, c.prop_mode, rng);
  p.w_dense = glorot_uniform(c.attention_hidden2 * c.hidden2, c.num_classes, rng);
  return p;
}

BaselineParams init_baseline_params(const ModelConfig& c, Rng& rng) {
  if (c.num_classes <= 0) throw ParameterError("num_classes must be positive");
  BaselineParams p;
  p.gcn = init_head(c.feature_dim, c.hidden1, c.hidden2, c.prop_mode, rng);
  if (c.kind == ModelKind::kGcnDense) {
    if (c.max_vertices <= 0) {
      throw ParameterError("gcn-dense needs a positive max_vertices");
    }
    p.max_vertices = c.max_vertices;
    p.w_dense = glorot_uniform(c.max_vertices * c.hidden2, c.num_classes, rng);
  } else {
    p.w_dense = glorot_uniform(c.hidden2, c.num_classes, rng);
  }
  return p;
}

Model Model::init(const ModelConfig& config, Rng& rng) {
  if (config.kind == ModelKind::kPiNet) {
    return Model(config, init_pinet_params(config, rng));
  }
  return Model(config, init_baseline_params(config, rng));
}

Model::Model(ModelConfig config, PiNetParams params)
    : config_(config), params_(std::move(params)) {}

Model::Model(ModelConfig config, BaselineParams params)
    : config_(config), params_(std::move(params)) {}

Var Model::forward(const Graph& g) const {
  switch (config_.kind) {
    case ModelKind::kPiNet:
      return pinet_forward(g, std::get<PiNetParams>(params_));
    case ModelKind::kGcnMean:
      return gcn_mean_forward(g, std::get<BaselineParams>(params_));
    case ModelKind::kGcnDense:
      return gcn_dense_forward(g, std::get<BaselineParams>(params_));
  }
  throw ParameterError("unknown model kind");
}

int Model::predict(const Graph& g) const { return argmax(forward(g).value()); }

std::vector<Var> Model::parameters() const {
  return std::visit([](const auto& p) { return p.parameters(); }, params_);
}

std::vector<std::string> Model::parameter_names() const {
  std::vector<std::string> out;
  auto collect = [&out](const std::string& name, const GcnHead& head) {
    out.push_back(name + ".w0");
    out.push_back(name + ".w1");
    for (int l = 0; l < 2; ++l) {
      if (head.layers[static_cast<std::size_t>(l)].is_learned()) {
        out.push_back(name + ".p_raw" + std::to_string(l));
        out.push_back(name + ".q_raw" + std::to_string(l));
      }
    }
  };
  if (const auto* p = pinet()) {
    collect("attention", p->attention);
    collect("features", p->features);
  } else if (const auto* b = baseline()) {
    collect("gcn", b->gcn);
  }
  out.push_back("w_dense");
  return out;
}

std::vector<LearnedPropagation> Model::learned_propagation() const {
  std::vector<LearnedPropagation> out;
  auto collect = [&out](const std::string& name, const GcnHead& head) {
    for (int l = 0; l < 2; ++l) {
      const auto& spec = head.layers[static_cast<std::size_t>(l)];
      if (spec.is_learned()) out.push_back({name, l, spec.p(), spec.q()});
    }
  };
  if (const auto* p = pinet()) {
    collect("attention", p->attention);
    collect("features", p->features);
  } else if (const auto* b = baseline()) {
    collect("gcn", b->gcn);
  }
  return out;
}

Model Model::clone() const {
  return std::visit(
      [this](const auto& p) { return Model(config_, p.clone()); }, params_);
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "pinet") return ModelKind::kPiNet;
  if (name == "gcn-mean") return ModelKind::kGcnMean;
  if (name == "gcn-dense") return ModelKind::kGcnDense;
  throw ParameterError("unknown model kind '" + name +
                       "' (pinet | gcn-mean | gcn-dense)");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPiNet:
      return "pinet";
    case ModelKind::kGcnMean:
      return "gcn-mean";
    case ModelKind::kGcnDense:
      return "gcn-dense";
  }
  return "unknown";
}

int argmax(const Matrix& row) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < row.size(); ++j) {
    if (row.data()[j] > row.data()[best]) best = j;
  }
  return static_cast<int>(best);
}

}  // namespace pinet
