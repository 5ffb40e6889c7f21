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
#include "pinet/autodiff.hpp"
#include "pinet/error.hpp"
#include "pinet/gradcheck.hpp"
#include "pinet/optimizer.hpp"
#include "pinet/rng.hpp"
#include "test_util.hpp"

namespace pinet {
namespace {

using ::pinet::testing::random_matrix;

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Weighted sum with fixed random weights makes every output entry matter.
Var probe(const Var& out, Rng& rng) {
  return sum(hadamard(out, Var::constant(random_matrix(out.rows(), out.cols(), rng))));
}

TEST(MatmulTest, Values) {
  const Var a = Var::constant(mat({{1, 2}, {3, 4}}));
  const Var b = Var::constant(mat({{0, 1}, {1, 0}}));
  EXPECT_EQ(matmul(a, b).value(), mat({{2, 1}, {4, 3}}));
  const Var m = Var::constant(mat({{5, -1}, {2, 7}}));
  EXPECT_EQ(matmul(Var::constant(Matrix::Identity(2, 2)), m).value(), m.value());
  EXPECT_THROW(matmul(a, Var::constant(Matrix::Zero(3, 1))), DimensionError);
}

TEST(MatmulTest, GradientOfSumMatchesFiniteDifferences) {
  Rng rng(1);
  Var a = Var::parameter(random_matrix(3, 4, rng));
  Var b = Var::parameter(random_matrix(4, 2, rng));
  const auto r = finite_difference_check([&] { return sum(matmul(a, b)); }, {a, b});
  EXPECT_LT(r.max_relative_error, 1e-6);
}

TEST(ElementwiseTest, Values) {
  const Matrix m = mat({{1, -2}, {3, 0.5}});
  const Var v = Var::constant(m);
  EXPECT_EQ(add(v, Var::constant(Matrix::Zero(2, 2))).value(), m);
  EXPECT_EQ(transpose(transpose(v)).value(), m);
  EXPECT_EQ(scale(v, 2.0).value(), 2.0 * m);
  EXPECT_EQ(hadamard(v, v).value(), m.cwiseProduct(m));
  EXPECT_THROW(add(v, Var::constant(Matrix::Zero(1, 2))), DimensionError);
  EXPECT_THROW(hadamard(v, Var::constant(Matrix::Zero(2, 1))), DimensionError);
}

TEST(ElementwiseTest, GradientsMatchFiniteDifferences) {
  Rng rng(2);
  Var a = Var::parameter(random_matrix(3, 2, rng));
  Var b = Var::parameter(random_matrix(3, 2, rng));
  Rng probe_rng(3);
  const Var w1 = Var::constant(random_matrix(3, 2, probe_rng));
  const Var w2 = Var::constant(random_matrix(2, 3, probe_rng));
  auto f = [&] {
    Var x = add(hadamard(a, b), scale(a, -1.5));
    return add(sum(hadamard(x, w1)), sum(hadamard(transpose(b), w2)));
  };
  EXPECT_LT(finite_difference_check(f, {a, b}).max_relative_error, 1e-6);
}

TEST(ReluTest, ValuesAndSubgradient) {
  EXPECT_EQ(relu(Var::constant(mat({{-1, 2}}))).value(), mat({{0, 2}}));
  const Matrix pos = mat({{0.5, 3}});
  EXPECT_EQ(relu(Var::constant(pos)).value(), pos);

  Var x = Var::parameter(mat({{0.0, 1.0, -1.0}}));
  backward(sum(relu(x)));
  EXPECT_EQ(x.grad(), mat({{0.0, 1.0, 0.0}}));
}

TEST(ReluTest, GradientAwayFromKink) {
  Rng rng(4);
  Matrix m = random_matrix(4, 3, rng);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (std::abs(m.data()[i]) < 1e-3) m.data()[i] = 0.5;
  }
  Var x = Var::parameter(m);
  Rng probe_rng(5);
  const Var w = Var::constant(random_matrix(4, 3, probe_rng));
  auto f = [&] { return sum(hadamard(relu(x), w)); };
  EXPECT_LT(finite_difference_check(f, {x}).max_relative_error, 1e-6);
}

TEST(RowSoftmaxTest, Values) {
  EXPECT_TRUE(row_softmax(Var::constant(mat({{0, 0}}))).value().isApprox(mat({{0.5, 0.5}})));
  const Matrix r = row_softmax(Var::constant(mat({{std::log(2.0), 0}}))).value();
  EXPECT_NEAR(r(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r(0, 1), 1.0 / 3.0, 1e-15);
  const Matrix big = row_softmax(Var::constant(mat({{1000, 0}}))).value();
  EXPECT_TRUE(big.allFinite());
  EXPECT_NEAR(big(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(big(0, 1), 0.0, 1e-15);
}

TEST(RowSoftmaxTest, RowsSumToOneAndShiftInvariant) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = random_matrix(4, 5, rng, 5.0);
    const Matrix s = row_softmax(Var::constant(x)).value();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      EXPECT_NEAR(s.row(i).sum(), 1.0, 1e-12);
    }
    Matrix shifted = x;
    shifted.row(1).array() += 17.25;
    EXPECT_TRUE(row_softmax(Var::constant(shifted)).value().isApprox(s, 1e-12));
  }
}

TEST(RowSoftmaxTest, GradientMatchesFiniteDifferences) {
  Rng rng(7);
  Var x = Var::parameter(random_matrix(3, 4, rng));
  Rng probe_rng(8);
  const Var w = Var::constant(random_matrix(3, 4, probe_rng));
  auto f = [&] { return sum(hadamard(row_softmax(x), w)); };
  EXPECT_LT(finite_difference_check(f, {x}).max_relative_error, 1e-6);
}

TEST(SigmoidTest, ValuesAndDerivative) {
  EXPECT_DOUBLE_EQ(sigmoid_scalar(Var::constant(mat({{0}}))).scalar(), 0.5);
  EXPECT_NEAR(sigmoid_scalar(Var::constant(mat({{30}}))).scalar(), 1.0, 1e-12);
  EXPECT_NEAR(sigmoid_scalar(Var::constant(mat({{-30}}))).scalar(), 0.0, 1e-12);
  Var x = Var::parameter(mat({{0}}));
  backward(sigmoid_scalar(x));
  EXPECT_DOUBLE_EQ(x.grad()(0, 0), 0.25);
  EXPECT_LT(finite_difference_check([&] { return sigmoid_scalar(x); }, {x})
                .max_relative_error,
            1e-8);
  EXPECT_THROW(sigmoid_scalar(Var::constant(Matrix::Zero(1, 2))), DimensionError);
}

TEST(CrossEntropyTest, Values) {
  EXPECT_DOUBLE_EQ(cross_entropy(Var::constant(mat({{1, 0}})), 0).scalar(), 0.0);
  EXPECT_NEAR(cross_entropy(Var::constant(mat({{0.5, 0.5}})), 0).scalar(),
              0.693147180559945, 1e-12);
  EXPECT_NEAR(cross_entropy(Var::constant(mat({{0.0, 1.0}})), 0).scalar(),
              -std::log(kLogFloor), 1e-9);
  EXPECT_THROW(cross_entropy(Var::constant(mat({{0.5, 0.5}})), 2), ParameterError);
}

TEST(CrossEntropyTest, SoftmaxComposedGradientIsResidual) {
  Rng rng(9);
  Var logits = Var::parameter(random_matrix(1, 4, rng));
  const int target = 2;
  backward(cross_entropy(row_softmax(logits), target));
  Matrix expected = row_softmax(Var::constant(logits.value())).value();
  expected(0, target) -= 1.0;
  EXPECT_TRUE(logits.grad().isApprox(expected, 1e-12));
  logits.zero_grad();
  auto f = [&] { return cross_entropy(row_softmax(logits), target); };
  EXPECT_LT(finite_difference_check(f, {logits}).max_relative_error, 1e-6);
}

TEST(ReshapeTest, FlattenMeanPad) {
  const Var m = Var::constant(mat({{1, 2}, {3, 4}, {5, 6}}));
  EXPECT_EQ(flatten_rows(m).value(), mat({{1, 2, 3, 4, 5, 6}}));
  EXPECT_EQ(mean_rows(m).value(), mat({{3, 4}}));
  const Matrix padded = pad_rows(m, 4).value();
  EXPECT_EQ(padded.topRows(3), m.value());
  EXPECT_EQ(padded.row(3), Matrix::Zero(1, 2));
  EXPECT_THROW(pad_rows(m, 2), CapacityError);

  Rng rng(10);
  Var x = Var::parameter(random_matrix(3, 2, rng));
  Rng probe_rng(11);
  auto f = [&] {
    Rng r = probe_rng;
    return add(add(probe(flatten_rows(x), r), probe(mean_rows(x), r)),
               probe(pad_rows(x, 5), r));
  };
  EXPECT_LT(finite_difference_check(f, {x}).max_relative_error, 1e-6);
}

TEST(BackwardTest, SumGivesOnes) {
  Var w = Var::parameter(Matrix::Constant(2, 3, 0.7));
  backward(sum(w));
  EXPECT_EQ(w.grad(), Matrix::Ones(2, 3));
}

TEST(BackwardTest, UnreachableLeafHasZeroGradient) {
  Var used = Var::parameter(Matrix::Ones(1, 1));
  Var unused = Var::parameter(Matrix::Ones(2, 2));
  backward(scale(used, 3.0));
  EXPECT_EQ(used.grad(), Matrix::Constant(1, 1, 3.0));
  EXPECT_EQ(unused.grad(), Matrix::Zero(2, 2));
}

TEST(BackwardTest, NonScalarLossRejected) {
  Var w = Var::parameter(Matrix::Ones(2, 2));
  EXPECT_THROW(backward(w), ContractError);
}

TEST(BackwardTest, LeafUsedTwiceAccumulatesBothPaths) {
  Rng rng(12);
  const Matrix m = random_matrix(2, 2, rng);
  Var x = Var::parameter(m);
  backward(sum(add(x, x)));
  Var y = Var::parameter(m);
  backward(sum(scale(y, 2.0)));
  EXPECT_EQ(x.grad(), y.grad());

  // x·x reaches x through both operands.
  Var z = Var::parameter(m);
  backward(sum(matmul(z, z)));
  const Matrix ones = Matrix::Ones(2, 2);
  EXPECT_TRUE(z.grad().isApprox(ones * m.transpose() + m.transpose() * ones));
}

TEST(BackwardTest, GradientsAccumulateAcrossCallsUntilZeroed) {
  Var w = Var::parameter(Matrix::Ones(1, 1));
  backward(scale(w, 2.0));
  backward(scale(w, 2.0));
  EXPECT_EQ(w.grad()(0, 0), 4.0);
  zero_grad({w});
  EXPECT_FALSE(w.has_grad());
}

TEST(FiniteDifferenceCheckTest, QuadraticAndLinear) {
  Var x = Var::parameter(Matrix::Ones(3, 2));
  auto quad = [&] { return sum(hadamard(x, x)); };
  EXPECT_LT(finite_difference_check(quad, {x}).max_relative_error, 1e-9);
  EXPECT_EQ(x.value(), Matrix::Ones(3, 2));  // restored

  Var y = Var::parameter(Matrix::Constant(2, 2, 0.3));
  auto lin = [&] { return scale(sum(y), 4.0); };
  EXPECT_LT(finite_difference_check(lin, {y}).max_relative_error, 1e-9);
  EXPECT_THROW(finite_difference_check(lin, {y}, 0.0), ParameterError);
}

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  const Matrix m = Matrix::Constant(2, 2, 0.25);
  std::vector<Var> params{Var::parameter(m)};
  AdamState state;
  backward(scale(sum(params[0]), 0.0));
  adam_step(params, state);
  EXPECT_EQ(params[0].value(), m);
  EXPECT_EQ(state.step_count, 1);
}

TEST(AdamTest, FirstStepMovesBySignTimesLr) {
  // First bias-corrected step is lr * g / (|g| + eps).
  Rng rng(13);
  const Matrix m = random_matrix(3, 3, rng);
  std::vector<Var> params{Var::parameter(m)};
  const Matrix weights = random_matrix(3, 3, rng);
  backward(sum(hadamard(params[0], Var::constant(weights))));
  AdamState state;
  AdamConfig config;
  adam_step(params, state, config);
  const Matrix delta = params[0].value() - m;
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    const double g = weights.data()[i];
    EXPECT_NEAR(delta.data()[i], -config.lr * (g > 0 ? 1.0 : -1.0), 1e-9);
  }
}

TEST(AdamTest, SameInputsGiveBitIdenticalTrajectories) {
  auto run = [] {
    Rng rng(14);
    std::vector<Var> params{Var::parameter(random_matrix(2, 3, rng))};
    const Var target = Var::constant(random_matrix(2, 3, rng));
    Optimizer opt(OptimizerKind::kAdam, 1e-2);
    for (int s = 0; s < 25; ++s) {
      zero_grad(params);
      const Var diff = add(params[0], scale(target, -1.0));
      backward(sum(hadamard(diff, diff)));
      opt.step(params);
    }
    return Matrix(params[0].value());
  };
  EXPECT_EQ(run(), run());
}

TEST(SgdTest, StepsAgainstGradient) {
  std::vector<Var> params{Var::parameter(Matrix::Constant(1, 2, 1.0))};
  backward(sum(scale(params[0], 3.0)));
  Optimizer opt(OptimizerKind::kSgd, 0.1);
  opt.step(params);
  EXPECT_TRUE(params[0].value().isApprox(Matrix::Constant(1, 2, 0.7)));
  EXPECT_THROW(Optimizer(OptimizerKind::kSgd, 0.0), ParameterError);
  EXPECT_EQ(parse_optimizer_kind("adam"), OptimizerKind::kAdam);
  EXPECT_THROW(parse_optimizer_kind("rmsprop"), ParameterError);
}

}  // namespace
}  // namespace pinet
