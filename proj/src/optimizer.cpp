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

#include "pinet/optimizer.hpp"

#include <cmath>

#include "pinet/error.hpp"

namespace pinet {

OptimizerKind parse_optimizer_kind(const std::string& name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw ParameterError("unknown optimizer '" + name + "' (adam | sgd)");
}

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

void adam_step(std::vector<Var>& params, AdamState& state,
               const AdamConfig& config) {
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
      state.second_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw DimensionError("adam_step: state holds " +
                         std::to_string(state.first_moment.size()) +
                         " moments for " + std::to_string(params.size()) +
                         " parameters");
  }
  ++state.step_count;
  const auto t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Matrix g = params[i].grad();
    Matrix& m = state.first_moment[i];
    Matrix& v = state.second_moment[i];
    if (m.rows() != g.rows() || m.cols() != g.cols()) {
      throw DimensionError("adam_step: moment shape mismatch");
    }
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseAbs2();
    params[i].value_mut().array() -=
        config.lr * (m.array() / c1) /
        ((v.array() / c2).sqrt() + config.epsilon);
  }
}

void sgd_step(std::vector<Var>& params, double lr) {
  for (auto& p : params) {
    if (p.has_grad()) p.value_mut() -= lr * p.node()->grad;
  }
}

Optimizer::Optimizer(OptimizerKind kind, double lr) : kind_(kind) {
  if (!(lr > 0.0)) throw ParameterError("learning rate must be positive");
  config_.lr = lr;
}

void Optimizer::step(std::vector<Var>& params) {
  if (kind_ == OptimizerKind::kAdam) {
    adam_step(params, adam_, config_);
  } else {
    sgd_step(params, config_.lr);
  }
}

}  // namespace pinet
