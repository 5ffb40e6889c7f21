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

#include <cstdint>
#include <string>
#include <vector>

#include "pinet/autodiff.hpp"

namespace pinet {

enum class OptimizerKind { kAdam, kSgd };

OptimizerKind parse_optimizer_kind(const std::string& name);
std::string to_string(OptimizerKind kind);

struct AdamState {
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  std::int64_t step_count = 0;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam update of every parameter from its accumulated
/// gradient. The state is shaped on first use.
void adam_step(std::vector<Var>& params, AdamState& state,
               const AdamConfig& config = {});

/// Plain gradient descent: x -= lr * grad.
void sgd_step(std::vector<Var>& params, double lr);

/// Owns optimiser state for one parameter set.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double lr);

  void step(std::vector<Var>& params);
  const AdamState& adam_state() const { return adam_; }

 private:
  OptimizerKind kind_;
  AdamConfig config_;
  AdamState adam_;
};

}  // namespace pinet
