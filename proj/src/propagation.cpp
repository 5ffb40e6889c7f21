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

#include "pinet/propagation.hpp"

#include <cmath>

#include "pinet/error.hpp"
#include "pinet/graph.hpp"

namespace pinet {

namespace {

void require_symmetric(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("propagation: adjacency must be square");
  }
  if ((a.array() != a.transpose().array()).any()) {
    throw ContractError("propagation: adjacency is not symmetric");
  }
}

Eigen::VectorXd inv_sqrt_clamped(const Eigen::VectorXd& d, double epsilon) {
  return d.unaryExpr([epsilon](double v) {
    return 1.0 / std::sqrt(v > epsilon ? v : epsilon);
  });
}

double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

PropagationMode parse_propagation_mode(const std::string& name) {
  if (name == "raw_A") return PropagationMode::kRawA;
  if (name == "A_plus_I") return PropagationMode::kAPlusI;
  if (name == "sym_norm_A") return PropagationMode::kSymNormA;
  if (name == "sym_norm_A_plus_I") return PropagationMode::kSymNormAPlusI;
  if (name == "learned") return PropagationMode::kLearned;
  throw ParameterError(
      "unknown propagation mode '" + name +
      "' (raw_A | A_plus_I | sym_norm_A | sym_norm_A_plus_I | learned)");
}

std::string to_string(PropagationMode mode) {
  switch (mode) {
    case PropagationMode::kRawA:
      return "raw_A";
    case PropagationMode::kAPlusI:
      return "A_plus_I";
    case PropagationMode::kSymNormA:
      return "sym_norm_A";
    case PropagationMode::kSymNormAPlusI:
      return "sym_norm_A_plus_I";
    case PropagationMode::kLearned:
      return "learned";
  }
  return "unknown";
}

PropagationSpec PropagationSpec::fixed(PropagationMode mode) {
  if (mode == PropagationMode::kLearned) {
    throw ParameterError("PropagationSpec::fixed: learned is not fixed");
  }
  PropagationSpec s;
  s.mode = mode;
  return s;
}

PropagationSpec PropagationSpec::learned(double p_raw, double q_raw) {
  PropagationSpec s;
  s.mode = PropagationMode::kLearned;
  s.p_raw = Var::parameter(Matrix::Constant(1, 1, p_raw));
  s.q_raw = Var::parameter(Matrix::Constant(1, 1, q_raw));
  return s;
}

double PropagationSpec::p() const { return sigmoid(p_raw.scalar()); }
double PropagationSpec::q() const { return sigmoid(q_raw.scalar()); }

PropagationSpec PropagationSpec::clone() const {
  PropagationSpec s = *this;
  if (is_learned()) {
    s.p_raw = p_raw.clone_leaf();
    s.q_raw = q_raw.clone_leaf();
  }
  return s;
}

Matrix build_fixed(const Matrix& adjacency, PropagationMode mode,
                   double epsilon) {
  require_symmetric(adjacency);
  const auto n = adjacency.rows();
  switch (mode) {
    case PropagationMode::kRawA:
      return adjacency;
    case PropagationMode::kAPlusI:
      return adjacency + Matrix::Identity(n, n);
    case PropagationMode::kSymNormA: {
      const Eigen::VectorXd s =
          inv_sqrt_clamped(adjacency.rowwise().sum(), epsilon);
      return s.asDiagonal() * adjacency * s.asDiagonal();
    }
    case PropagationMode::kSymNormAPlusI: {
      const Matrix a_hat = adjacency + Matrix::Identity(n, n);
      const Eigen::VectorXd s =
          inv_sqrt_clamped(a_hat.rowwise().sum(), epsilon);
      return s.asDiagonal() * a_hat * s.asDiagonal();
    }
    case PropagationMode::kLearned:
      break;
  }
  throw ParameterError("build_fixed: learned mode has no fixed matrix");
}

Var build_learned(const Matrix& adjacency, const PropagationSpec& spec) {
  if (!spec.is_learned()) {
    throw ParameterError("build_learned: spec is not in learned mode");
  }
  require_symmetric(adjacency);
  const Var p_var = sigmoid_scalar(spec.p_raw);
  const Var q_var = sigmoid_scalar(spec.q_raw);
  const double p = p_var.scalar();
  const double q = q_var.scalar();
  const double eps = spec.epsilon;

  const Eigen::VectorXd deg = adjacency.rowwise().sum();
  const Eigen::VectorXd d =
      (p + (1.0 - p) * (deg.array() + q)).matrix();
  const Eigen::VectorXd s = inv_sqrt_clamped(d, eps);
  Matrix b = adjacency;
  b.diagonal().array() += q;
  Matrix out = s.asDiagonal() * b * s.asDiagonal();

  return Var::make(
      std::move(out), {p_var, q_var},
      [b = std::move(b), s, d, deg, p, q, eps](detail::Node& node) {
        const Matrix& g = node.grad;
        const Matrix gb = g.cwiseProduct(b);
        const Eigen::VectorXd ds = gb * s + gb.transpose() * s;
        Eigen::VectorXd dd(d.size());
        for (Eigen::Index k = 0; k < d.size(); ++k) {
          dd(k) = d(k) > eps ? -0.5 * ds(k) * s(k) * s(k) * s(k) : 0.0;
        }
        const double dp = (dd.array() * (1.0 - deg.array() - q)).sum();
        const double dq = (g.diagonal().array() * s.array().square()).sum() +
                          (1.0 - p) * dd.sum();
        auto& pn = *node.parents[0];
        auto& qn = *node.parents[1];
        if (pn.requires_grad) pn.accumulate(Matrix::Constant(1, 1, dp));
        if (qn.requires_grad) qn.accumulate(Matrix::Constant(1, 1, dq));
      });
}

Var build_propagation(const Matrix& adjacency, const PropagationSpec& spec) {
  if (spec.is_learned()) return build_learned(adjacency, spec);
  return Var::constant(build_fixed(adjacency, spec.mode, spec.epsilon));
}

}  // namespace pinet
