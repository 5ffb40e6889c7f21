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

#include "pinet/gradcheck.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "pinet/error.hpp"

namespace pinet {

namespace {

using Ext = long double;
using ExtVector = Eigen::Matrix<Ext, Eigen::Dynamic, 1>;

template <typename NumericFn>
GradCheckResult compare(const std::function<Var()>& loss_fn,
                        std::vector<Var>& params, double epsilon,
                        NumericFn numeric_at) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  zero_grad(params);
  backward(loss_fn());
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (const auto& p : params) analytic.push_back(p.grad());
  zero_grad(params);

  GradCheckResult result;
  result.per_param.assign(params.size(), 0.0);
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (Eigen::Index i = 0; i < analytic[k].size(); ++i) {
      const double numeric = numeric_at(k, i);
      const double exact = analytic[k].data()[i];
      const double denom =
          std::max({std::abs(exact), std::abs(numeric), 1e-8});
      const double rel = std::abs(exact - numeric) / denom;
      ++result.coordinates;
      result.per_param[k] = std::max(result.per_param[k], rel);
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_param = k;
        result.worst_index = i;
        result.analytic = exact;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

ExtendedMatrix relu(const ExtendedMatrix& m) { return m.cwiseMax(Ext(0)); }

Ext sigmoid(Ext x) {
  return x >= 0 ? 1 / (1 + std::exp(-x)) : std::exp(x) / (1 + std::exp(x));
}

ExtendedMatrix softmax_rows(const ExtendedMatrix& m) {
  ExtendedMatrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Ext top = m.row(r).maxCoeff();
    Ext total = 0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out(r, c) = std::exp(m(r, c) - top);
      total += out(r, c);
    }
    out.row(r) /= total;
  }
  return out;
}

ExtendedMatrix propagation(const Matrix& adjacency, const PropagationSpec& spec,
                           const ExtendedMatrix* p_raw,
                           const ExtendedMatrix* q_raw) {
  const ExtendedMatrix a = adjacency.cast<Ext>();
  const auto n = a.rows();
  const Ext eps = spec.epsilon;
  Ext p = 0, q = 0;
  switch (spec.mode) {
    case PropagationMode::kRawA:
      return a;
    case PropagationMode::kAPlusI:
      return a + ExtendedMatrix::Identity(n, n);
    case PropagationMode::kSymNormA:
      q = 0;
      break;
    case PropagationMode::kSymNormAPlusI:
      q = 1;
      break;
    case PropagationMode::kLearned:
      p = sigmoid((*p_raw)(0, 0));
      q = sigmoid((*q_raw)(0, 0));
      break;
  }
  ExtendedMatrix b = a;
  b.diagonal().array() += q;
  const ExtVector deg = a.rowwise().sum();
  ExtVector s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Ext d = p + (1 - p) * (deg(i) + q);
    s(i) = 1 / std::sqrt(d > eps ? d : eps);
  }
  return s.asDiagonal() * b * s.asDiagonal();
}

// Consumes head parameters in GcnHead::parameters() order.
ExtendedMatrix head_forward(const Graph& g, const GcnHead& head,
                            const std::vector<ExtendedMatrix>& values,
                            std::size_t& cursor) {
  const ExtendedMatrix& w0 = values.at(cursor++);
  const ExtendedMatrix& w1 = values.at(cursor++);
  std::array<ExtendedMatrix, 2> a;
  for (std::size_t l = 0; l < 2; ++l) {
    const ExtendedMatrix* p = nullptr;
    const ExtendedMatrix* q = nullptr;
    if (head.layers[l].is_learned()) {
      p = &values.at(cursor++);
      q = &values.at(cursor++);
    }
    a[l] = propagation(g.adjacency(), head.layers[l], p, q);
  }
  const ExtendedMatrix x = g.features().cast<Ext>();
  const ExtendedMatrix h1 = relu(a[0] * (x * w0));
  return relu(a[1] * (h1 * w1));
}

ExtendedMatrix flatten(const ExtendedMatrix& m) {
  ExtendedMatrix out(1, m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.block(0, r * m.cols(), 1, m.cols()) = m.row(r);
  }
  return out;
}

}  // namespace

GradCheckResult finite_difference_check(const std::function<Var()>& loss_fn,
                                        std::vector<Var> params,
                                        double epsilon) {
  return compare(loss_fn, params, epsilon, [&](std::size_t k, Eigen::Index i) {
    Matrix& x = params[k].value_mut();
    const double saved = x.data()[i];
    x.data()[i] = saved + epsilon;
    const double up = loss_fn().scalar();
    x.data()[i] = saved - epsilon;
    const double down = loss_fn().scalar();
    x.data()[i] = saved;
    return (up - down) / (2.0 * epsilon);
  });
}

GradCheckResult finite_difference_check(const std::function<Var()>& loss_fn,
                                        std::vector<Var> params,
                                        const ExtendedLoss& reference,
                                        double epsilon) {
  std::vector<ExtendedMatrix> values;
  for (const auto& p : params) values.push_back(p.value().cast<Ext>());
  const Ext step = epsilon;
  return compare(loss_fn, params, epsilon, [&](std::size_t k, Eigen::Index i) {
    Ext& x = values[k].data()[i];
    const Ext saved = x;
    x = saved + step;
    const Ext up = reference(values);
    x = saved - step;
    const Ext down = reference(values);
    x = saved;
    return static_cast<double>((up - down) / (2 * step));
  });
}

namespace {

// Everything before the dense layer, as a 1 x k row; advances `cursor` past
// the parameters it used.
ExtendedMatrix dense_input(const Model& model, const Graph& g,
                           const std::vector<ExtendedMatrix>& values,
                           std::size_t& cursor) {
  if (const auto* p = model.pinet()) {
    const ExtendedMatrix att = head_forward(g, p->attention, values, cursor);
    const ExtendedMatrix feat = head_forward(g, p->features, values, cursor);
    return flatten(softmax_rows(att.transpose()) * feat);
  }
  const auto* b = model.baseline();
  const ExtendedMatrix h = head_forward(g, b->gcn, values, cursor);
  if (model.config().kind == ModelKind::kGcnMean) return h.colwise().mean();
  ExtendedMatrix padded = ExtendedMatrix::Zero(b->max_vertices, h.cols());
  padded.topRows(h.rows()) = h;
  return flatten(padded);
}

Ext dense_loss(const ExtendedMatrix& input, const ExtendedMatrix& w, int label) {
  const Ext prob = softmax_rows(input * w)(0, label);
  return -std::log(prob > Ext(kLogFloor) ? prob : Ext(kLogFloor));
}

}  // namespace

long double reference_loss(const Model& model, const Graph& g,
                           const std::vector<ExtendedMatrix>& values) {
  std::size_t cursor = 0;
  const ExtendedMatrix input = dense_input(model, g, values, cursor);
  if (cursor + 1 != values.size()) {
    throw DimensionError("reference_loss: expected " +
                         std::to_string(cursor + 1) +
                         " parameter matrices, got " +
                         std::to_string(values.size()));
  }
  return dense_loss(input, values.back(), g.label());
}

GradCheckResult model_gradcheck(const Model& model, const Graph& g,
                                double epsilon) {
  auto loss = [&] { return cross_entropy(model.forward(g), g.label()); };
  // Perturbing only the dense weights leaves its input unchanged, and those
  // are most of the coordinates; reuse the input computed at the base point.
  std::vector<ExtendedMatrix> base;
  for (const auto& p : model.parameters()) base.push_back(p.value().cast<Ext>());
  std::size_t cursor = 0;
  const ExtendedMatrix base_input = dense_input(model, g, base, cursor);
  auto reference = [&](const std::vector<ExtendedMatrix>& values) {
    const bool body_unchanged =
        std::equal(values.begin(), values.end() - 1, base.begin());
    if (body_unchanged) return dense_loss(base_input, values.back(), g.label());
    return reference_loss(model, g, values);
  };
  return finite_difference_check(loss, model.parameters(), reference, epsilon);
}

}  // namespace pinet
