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

#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "pinet/autodiff.hpp"
#include "pinet/graph.hpp"
#include "pinet/propagation.hpp"
#include "pinet/rng.hpp"

namespace pinet {

enum class ModelKind { kPiNet, kGcnMean, kGcnDense };

/// Two-layer message-passing network
///   relu(Ã₂ · relu(Ã₁ · X · W0) · W1)
/// where each layer has its own propagation spec.
struct GcnHead {
  Var w0;  // F × h1
  Var w1;  // h1 × h2
  std::array<PropagationSpec, 2> layers;

  std::vector<Var> parameters() const;
  GcnHead clone() const;
};

/// Attention head, feature head and the output dense layer.
struct PiNetParams {
  GcnHead attention;  // h2 = attention dimensions
  GcnHead features;
  Var w_dense;  // (h2_attention · h2_features) × C

  std::vector<Var> parameters() const;
  PiNetParams clone() const;
};

/// Shared GCN body of the GCN+Mean and GCN+Dense baselines.
struct BaselineParams {
  GcnHead gcn;
  Var w_dense;  // h2 × C (mean) or (max_vertices · h2) × C (dense)
  Eigen::Index max_vertices = 0;

  std::vector<Var> parameters() const;
  BaselineParams clone() const;
};

struct ModelConfig {
  ModelKind kind = ModelKind::kPiNet;
  int feature_dim = 0;
  int num_classes = 0;
  int hidden1 = 32;
  int hidden2 = 64;
  /// Output width of the attention head (PiNet only).
  int attention_hidden2 = 64;
  PropagationMode prop_mode = PropagationMode::kSymNormAPlusI;
  /// Padding width for GCN+Dense; the dataset's largest vertex count.
  int max_vertices = 0;
};

Var gcn_head(const Graph& g, const GcnHead& head);

/// softmax( flatten_rows( softmax_rows(ψ_Aᵀ) · ψ_X ) · W_D ), a 1×C
/// probability row. The inner softmax normalises each attention dimension
/// over the vertices.
Var pinet_forward(const Graph& g, const PiNetParams& params);

/// Column mean of the GCN embeddings, dense layer, softmax.
Var gcn_mean_forward(const Graph& g, const BaselineParams& params);

/// GCN embeddings zero-padded to `max_vertices` rows, flattened row-wise,
/// dense layer, softmax. Order-sensitive by construction. Throws
/// CapacityError when the graph is larger than the padding width.
Var gcn_dense_forward(const Graph& g, const BaselineParams& params);

/// rows×cols weights uniform in ±sqrt(6 / (rows + cols)).
Var glorot_uniform(int rows, int cols, Rng& rng);

PiNetParams init_pinet_params(const ModelConfig& config, Rng& rng);
BaselineParams init_baseline_params(const ModelConfig& config, Rng& rng);

/// Learned (p, q) of one propagation layer.
struct LearnedPropagation {
  std::string head;
  int layer = 0;
  double p = 0.0;
  double q = 0.0;
};

/// A model of any kind with its parameters.
class Model {
 public:
  static Model init(const ModelConfig& config, Rng& rng);
  Model(ModelConfig config, PiNetParams params);
  Model(ModelConfig config, BaselineParams params);

  const ModelConfig& config() const { return config_; }
  Var forward(const Graph& g) const;
  /// Argmax of the forward pass; ties go to the lowest class index.
  int predict(const Graph& g) const;
  std::vector<Var> parameters() const;
  /// "head.w0", "head.p_raw1", ..., "w_dense", aligned with parameters().
  std::vector<std::string> parameter_names() const;
  std::vector<LearnedPropagation> learned_propagation() const;
  /// Deep copy with independent parameter leaves.
  Model clone() const;

  const PiNetParams* pinet() const {
    return std::get_if<PiNetParams>(&params_);
  }
  const BaselineParams* baseline() const {
    return std::get_if<BaselineParams>(&params_);
  }

 private:
  ModelConfig config_;
  std::variant<PiNetParams, BaselineParams> params_;
};

/// Names accepted on the command line: "pinet", "gcn-mean", "gcn-dense".
ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

int argmax(const Matrix& row);

}  // namespace pinet
