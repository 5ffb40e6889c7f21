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

#include <string>

#include "pinet/autodiff.hpp"

namespace pinet {

/// Message-passing matrix variants. The string forms ("raw_A", "A_plus_I",
/// "sym_norm_A", "sym_norm_A_plus_I", "learned") are the names accepted on
/// the command line.
enum class PropagationMode {
  kRawA,
  kAPlusI,
  kSymNormA,
  kSymNormAPlusI,
  kLearned,
};

PropagationMode parse_propagation_mode(const std::string& name);
std::string to_string(PropagationMode mode);

inline constexpr double kDiagonalClamp = 1e-12;

/// Selects a propagation matrix. Learned specs own two trainable 1×1
/// scalars whose sigmoids are the normalisation strength p and the
/// self-loop weight q.
struct PropagationSpec {
  PropagationMode mode = PropagationMode::kSymNormAPlusI;
  Var p_raw;
  Var q_raw;
  double epsilon = kDiagonalClamp;

  static PropagationSpec fixed(PropagationMode mode);
  static PropagationSpec learned(double p_raw = 0.0, double q_raw = 0.0);

  bool is_learned() const { return mode == PropagationMode::kLearned; }
  /// Effective p and q; only meaningful in learned mode.
  double p() const;
  double q() const;
  /// Independent copy (fresh trainable leaves for learned mode).
  PropagationSpec clone() const;
};

/// The four fixed variants:
///   raw_A             A
///   A_plus_I          A + I
///   sym_norm_A        D_A^{-1/2} A D_A^{-1/2}
///   sym_norm_A_plus_I D^{-1/2} (A + I) D^{-1/2}, D the degree matrix of A + I
/// Degrees below `epsilon` are clamped before the inverse square root.
/// Throws ContractError for asymmetric input.
Matrix build_fixed(const Matrix& adjacency, PropagationMode mode,
                   double epsilon = kDiagonalClamp);

/// (pI + (1-p)D_q)^{-1/2} (A + qI) (pI + (1-p)D_q)^{-1/2} with
/// D_q = D_A + qI, p = sigmoid(p_raw), q = sigmoid(q_raw). Differentiable
/// in p_raw and q_raw; the clamp has zero gradient where it is active.
Var build_learned(const Matrix& adjacency, const PropagationSpec& spec);

/// Dispatches on spec.mode; fixed modes yield a constant node.
Var build_propagation(const Matrix& adjacency, const PropagationSpec& spec);

}  // namespace pinet
