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

#include <cstddef>
#include <functional>
#include <vector>

#include "pinet/autodiff.hpp"
#include "pinet/graph.hpp"
#include "pinet/model.hpp"

namespace pinet {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_param = 0;
  Eigen::Index worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coordinates = 0;
  /// Largest relative error within each parameter.
  std::vector<double> per_param;
};

/// Compares backward gradients of `loss_fn` against central differences
/// (f(x+eps) - f(x-eps)) / 2eps, coordinate by coordinate over `params`.
/// Relative error uses the denominator max(|analytic|, |numeric|, 1e-8).
/// Parameter values are restored on return.
GradCheckResult finite_difference_check(const std::function<Var()>& loss_fn,
                                        std::vector<Var> params,
                                        double epsilon = 1e-6);

using ExtendedMatrix =
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
/// A loss recomputed from parameter values, one matrix per parameter.
using ExtendedLoss =
    std::function<long double(const std::vector<ExtendedMatrix>&)>;

/// Same comparison, but the central differences are taken on `reference`
/// in long double, with the step applied in long double. A double loss
/// near 1 carries ~1e-16 of rounding, which after division by 2eps swamps
/// gradients below ~1e-5; the extended evaluation pushes that floor down
/// by three orders of magnitude.
GradCheckResult finite_difference_check(const std::function<Var()>& loss_fn,
                                        std::vector<Var> params,
                                        const ExtendedLoss& reference,
                                        double epsilon = 1e-6);

/// Cross-entropy of `model` on `g`, recomputed from scratch in long double
/// with `values` in place of model.parameters(). Independent of the
/// autodiff forward.
long double reference_loss(const Model& model, const Graph& g,
                           const std::vector<ExtendedMatrix>& values);

/// Backward gradients of the model's cross-entropy on `g` against central
/// differences of reference_loss.
GradCheckResult model_gradcheck(const Model& model, const Graph& g,
                                double epsilon = 1e-6);

}  // namespace pinet
