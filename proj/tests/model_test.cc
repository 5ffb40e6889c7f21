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

#include <cmath>

#include "gtest/gtest.h"
#include "pinet/error.hpp"
#include "pinet/gradcheck.hpp"
#include "pinet/model.hpp"
#include "test_util.hpp"

namespace pinet {
namespace {

using ::pinet::testing::random_graph;

ModelConfig small_config(ModelKind kind, PropagationMode mode, int features = 3,
                         int classes = 3) {
  ModelConfig c;
  c.kind = kind;
  c.feature_dim = features;
  c.num_classes = classes;
  c.hidden1 = 5;
  c.hidden2 = 4;
  c.attention_hidden2 = 3;
  c.prop_mode = mode;
  c.max_vertices = 12;
  return c;
}

void expect_probability_row(const Matrix& out) {
  ASSERT_EQ(out.rows(), 1);
  EXPECT_GE(out.minCoeff(), 0.0);
  EXPECT_NEAR(out.sum(), 1.0, 1e-12);
}

TEST(GcnHeadTest, ZeroFeaturesGiveZeroOutput) {
  Rng rng(1);
  const auto params = init_pinet_params(small_config(ModelKind::kPiNet,
                                                     PropagationMode::kSymNormAPlusI),
                                        rng);
  const Graph g = random_graph(6, 0.5, 3, rng).with_features(Matrix::Zero(6, 3));
  EXPECT_EQ(gcn_head(g, params.features).value(), Matrix::Zero(6, 4));
}

TEST(GcnHeadTest, SingleEdgeHandEvaluation) {
  // Ã = [[.5,.5],[.5,.5]] is idempotent, so both layers yield Ã.
  const Graph g = Graph::from_edges(2, {{0, 1}}, Matrix::Identity(2, 2));
  GcnHead head{Var::parameter(Matrix::Identity(2, 2)),
               Var::parameter(Matrix::Identity(2, 2)),
               {PropagationSpec::fixed(PropagationMode::kSymNormAPlusI),
                PropagationSpec::fixed(PropagationMode::kSymNormAPlusI)}};
  EXPECT_TRUE(gcn_head(g, head).value().isApprox(Matrix::Constant(2, 2, 0.5), 1e-15));
}

TEST(GcnHeadTest, RowEquivariance) {
  Rng rng(2);
  for (auto mode : {PropagationMode::kRawA, PropagationMode::kSymNormAPlusI,
                    PropagationMode::kLearned}) {
    const auto params = init_pinet_params(small_config(ModelKind::kPiNet, mode), rng);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = random_graph(2 + trial % 9, 0.4, 3, rng);
      const auto perm = Permutation::random(g.num_vertices(), rng);
      const Matrix base = gcn_head(g, params.features).value();
      const Matrix moved = gcn_head(permute(g, perm), params.features).value();
      EXPECT_LE((moved - perm.as_matrix() * base).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(GcnHeadTest, FeatureWidthMismatch) {
  Rng rng(3);
  const auto params = init_pinet_params(
      small_config(ModelKind::kPiNet, PropagationMode::kRawA), rng);
  EXPECT_THROW(gcn_head(random_graph(4, 0.5, 2, rng), params.features), DimensionError);
  EXPECT_THROW(pinet_forward(random_graph(4, 0.5, 2, rng), params), DimensionError);
}

TEST(PiNetForwardTest, ProbabilityRowAndAttentionNormalisation) {
  Rng rng(4);
  const auto params = init_pinet_params(
      small_config(ModelKind::kPiNet, PropagationMode::kSymNormAPlusI), rng);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_graph(1 + trial % 12, 0.3, 3, rng);
    expect_probability_row(pinet_forward(g, params).value());
    const Matrix attention =
        row_softmax(transpose(gcn_head(g, params.attention))).value();
    for (Eigen::Index r = 0; r < attention.rows(); ++r) {
      EXPECT_NEAR(attention.row(r).sum(), 1.0, 1e-12);
    }
  }
}

TEST(PiNetForwardTest, PermutationInvariant) {
  Rng rng(5);
  for (auto mode : {PropagationMode::kRawA, PropagationMode::kAPlusI,
                    PropagationMode::kSymNormA, PropagationMode::kSymNormAPlusI,
                    PropagationMode::kLearned}) {
    for (int trial = 0; trial < 20; ++trial) {
      auto params = init_pinet_params(small_config(ModelKind::kPiNet, mode), rng);
      const Graph g = random_graph(2 + trial % 15, 0.3, 3, rng, trial % 3);
      const Graph h = permute(g, Permutation::random(g.num_vertices(), rng));
      const Matrix diff = pinet_forward(g, params).value() - pinet_forward(h, params).value();
      EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(PiNetForwardTest, SingleVertexIgnoresAttentionWeights) {
  Rng rng(6);
  const auto config = small_config(ModelKind::kPiNet, PropagationMode::kSymNormAPlusI);
  auto params = init_pinet_params(config, rng);
  const Graph g = random_graph(1, 0.0, 3, rng);
  const Matrix before = pinet_forward(g, params).value();
  params.attention.w0.value_mut() = testing::random_matrix(3, 5, rng);
  params.attention.w1.value_mut() = testing::random_matrix(5, 3, rng);
  EXPECT_TRUE(pinet_forward(g, params).value().isApprox(before, 1e-14));
}

TEST(GcnMeanForwardTest, InvariantAndSingleVertex) {
  Rng rng(7);
  const auto params = init_baseline_params(
      small_config(ModelKind::kGcnMean, PropagationMode::kSymNormAPlusI), rng);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_graph(2 + trial % 10, 0.4, 3, rng);
    const Graph h = permute(g, Permutation::random(g.num_vertices(), rng));
    const Matrix out = gcn_mean_forward(g, params).value();
    expect_probability_row(out);
    EXPECT_LE((out - gcn_mean_forward(h, params).value()).cwiseAbs().maxCoeff(), 1e-9);
  }
  const Graph single = random_graph(1, 0.0, 3, rng);
  const Matrix row = gcn_head(single, params.gcn).value();
  EXPECT_TRUE(mean_rows(Var::constant(row)).value().isApprox(row));
}

TEST(GcnMeanForwardTest, EqualsPiNetWithUniformAttention) {
  // One attention dimension with zero weights gives uniform vertex weights.
  Rng rng(8);
  auto config = small_config(ModelKind::kGcnMean, PropagationMode::kSymNormAPlusI);
  const auto baseline = init_baseline_params(config, rng);
  config.kind = ModelKind::kPiNet;
  config.attention_hidden2 = 1;
  auto pinet = init_pinet_params(config, rng);
  pinet.attention.w0.value_mut().setZero();
  pinet.attention.w1.value_mut().setZero();
  pinet.features = baseline.gcn;
  pinet.w_dense = baseline.w_dense;
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_graph(3 + trial, 0.4, 3, rng);
    EXPECT_TRUE(pinet_forward(g, pinet).value().isApprox(
        gcn_mean_forward(g, baseline).value(), 1e-12));
  }
}

TEST(GcnDenseForwardTest, PaddingCapacityAndOrderSensitivity) {
  Rng rng(9);
  const auto config = small_config(ModelKind::kGcnDense, PropagationMode::kSymNormAPlusI);
  const auto params = init_baseline_params(config, rng);
  EXPECT_EQ(params.w_dense.rows(), 12 * 4);

  const Graph full = random_graph(12, 0.4, 3, rng);
  expect_probability_row(gcn_dense_forward(full, params).value());
  EXPECT_THROW(gcn_dense_forward(random_graph(13, 0.4, 3, rng), params), CapacityError);

  const Graph zero = random_graph(5, 0.4, 3, rng).with_features(Matrix::Zero(5, 3));
  EXPECT_TRUE(gcn_dense_forward(zero, params).value().isApprox(
      Matrix::Constant(1, 3, 1.0 / 3.0), 1e-15));

  // Witness: some relabelling changes the output.
  const Graph g = random_graph(8, 0.4, 3, rng);
  double max_change = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Graph h = permute(g, Permutation::random(8, rng));
    max_change = std::max(max_change, (gcn_dense_forward(g, params).value() -
                                       gcn_dense_forward(h, params).value())
                                          .cwiseAbs()
                                          .maxCoeff());
  }
  EXPECT_GT(max_change, 1e-6);
}

TEST(InitTest, DeterministicBoundedAndCentred) {
  Rng a(10), b(10);
  const auto config = small_config(ModelKind::kPiNet, PropagationMode::kLearned);
  const auto pa = init_pinet_params(config, a);
  const auto pb = init_pinet_params(config, b);
  const auto va = pa.parameters();
  const auto vb = pb.parameters();
  ASSERT_EQ(va.size(), vb.size());
  for (std::size_t i = 0; i < va.size(); ++i) EXPECT_EQ(va[i].value(), vb[i].value());
  EXPECT_EQ(pa.attention.layers[0].p_raw.scalar(), 0.0);
  EXPECT_EQ(pa.features.layers[1].q_raw.scalar(), 0.0);

  Rng rng(11);
  const Var w = glorot_uniform(32, 64, rng);
  const double limit = std::sqrt(6.0 / 96.0);
  EXPECT_LE(w.value().cwiseAbs().maxCoeff(), limit);
  // Mean of 2048 uniforms on ±limit has standard deviation limit/sqrt(3·2048).
  const double sigma = limit / std::sqrt(3.0 * 2048.0);
  EXPECT_LE(std::abs(w.value().mean()), 3.0 * sigma);

  EXPECT_THROW(glorot_uniform(0, 4, rng), ParameterError);
  auto bad = config;
  bad.num_classes = 0;
  EXPECT_THROW(init_pinet_params(bad, rng), ParameterError);
}

TEST(ModelTest, ParametersCloneAndLearnedReport) {
  Rng rng(12);
  const Model m =
      Model::init(small_config(ModelKind::kPiNet, PropagationMode::kLearned), rng);
  // 2 weights + 2 (p, q) pairs per head, plus the dense layer.
  EXPECT_EQ(m.parameters().size(), 2u * (2 + 4) + 1);
  const auto learned = m.learned_propagation();
  ASSERT_EQ(learned.size(), 4u);
  for (const auto& l : learned) {
    EXPECT_DOUBLE_EQ(l.p, 0.5);
    EXPECT_DOUBLE_EQ(l.q, 0.5);
  }
  Model copy = m.clone();
  copy.parameters()[0].value_mut().setZero();
  EXPECT_NE(m.parameters()[0].value(), copy.parameters()[0].value());

  const Model fixed =
      Model::init(small_config(ModelKind::kGcnMean, PropagationMode::kRawA), rng);
  EXPECT_TRUE(fixed.learned_propagation().empty());
  EXPECT_EQ(fixed.parameters().size(), 3u);
  EXPECT_EQ(fixed.parameter_names(),
            (std::vector<std::string>{"gcn.w0", "gcn.w1", "w_dense"}));
  const auto names = m.parameter_names();
  ASSERT_EQ(names.size(), m.parameters().size());
  EXPECT_EQ(names[2], "attention.p_raw0");
  EXPECT_EQ(names[7], "features.w1");
  EXPECT_EQ(names.back(), "w_dense");
}

TEST(ModelTest, ArgmaxTiesGoToLowestIndex) {
  Matrix row(1, 4);
  row << 0.1, 0.4, 0.4, 0.1;
  EXPECT_EQ(argmax(row), 1);
  EXPECT_EQ(parse_model_kind("gcn-dense"), ModelKind::kGcnDense);
  EXPECT_THROW(parse_model_kind("diffpool"), ParameterError);
}

TEST(ModelGradientTest, FullPiNetLossMatchesFiniteDifferences) {
  Rng rng(13);
  for (int n = 1; n <= 6; ++n) {
    const Model m =
        Model::init(small_config(ModelKind::kPiNet, PropagationMode::kLearned), rng);
    const Graph g = random_graph(static_cast<std::size_t>(n), 0.5, 3, rng).with_label(n % 3);
    const auto r = model_gradcheck(m, g, 1e-6);
    EXPECT_LT(r.max_relative_error, 1e-5) << "n=" << n << " param " << r.worst_param << " a=" << r.analytic << " fd=" << r.numeric;
  }
}

TEST(ModelGradientTest, BaselinesMatchFiniteDifferences) {
  Rng rng(14);
  for (auto kind : {ModelKind::kGcnMean, ModelKind::kGcnDense}) {
    const Model m = Model::init(small_config(kind, PropagationMode::kLearned), rng);
    const Graph g = random_graph(5, 0.5, 3, rng).with_label(1);
    EXPECT_LT(model_gradcheck(m, g).max_relative_error, 1e-5);
  }
}

TEST(ModelGradientTest, ReferenceLossMatchesForward) {
  Rng rng(15);
  for (auto kind : {ModelKind::kPiNet, ModelKind::kGcnMean, ModelKind::kGcnDense}) {
    for (auto mode : {PropagationMode::kRawA, PropagationMode::kAPlusI,
                      PropagationMode::kSymNormA, PropagationMode::kSymNormAPlusI,
                      PropagationMode::kLearned}) {
      const Model m = Model::init(small_config(kind, mode), rng);
      const Graph g = random_graph(7, 0.4, 3, rng, 1).with_label(2);
      std::vector<ExtendedMatrix> values;
      for (const auto& p : m.parameters()) values.push_back(p.value().cast<long double>());
      const double forward = cross_entropy(m.forward(g), g.label()).scalar();
      EXPECT_NEAR(static_cast<double>(reference_loss(m, g, values)), forward, 1e-12);
    }
  }
  const Model m = Model::init(small_config(ModelKind::kPiNet, PropagationMode::kRawA), rng);
  EXPECT_THROW(reference_loss(m, testing::path3().with_features(Matrix::Ones(3, 3)), {}),
               std::exception);
}

}  // namespace
}  // namespace pinet
