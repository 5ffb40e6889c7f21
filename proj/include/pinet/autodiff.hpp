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

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace pinet {

using Matrix = Eigen::MatrixXd;

namespace detail {

struct Node {
  Matrix value;
  Matrix grad;  // allocated on first accumulation
  bool requires_grad = false;
  bool is_leaf = true;
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into its parents.
  std::function<void(Node&)> backward;

  void accumulate(const Matrix& g) {
    if (grad.size() == 0) {
      grad = g;
    } else {
      grad += g;
    }
  }
};

}  // namespace detail

/// Handle to a node of a define-by-run expression graph.
///
/// Copies share the node. Leaves created with `parameter` persist across
/// forward passes and accumulate gradients until `zero_grad`; interior nodes
/// live as long as something downstream refers to them.
class Var {
 public:
  Var() = default;

  static Var parameter(Matrix value);
  static Var constant(Matrix value);

  /// Interior node. `backward` receives the node whose `grad` is populated
  /// and must accumulate into the parents that require gradients.
  static Var make(Matrix value, std::vector<Var> parents,
                  std::function<void(detail::Node&)> backward);

  bool valid() const { return node_ != nullptr; }
  const Matrix& value() const { return node_->value; }
  /// Mutable payload; intended for optimisers and perturbation oracles
  /// acting on leaves.
  Matrix& value_mut() { return node_->value; }
  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  double scalar() const;

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return node_->grad.size() != 0; }
  /// Accumulated gradient, or zeros of the value's shape when none reached
  /// this node.
  Matrix grad() const;
  void zero_grad() { node_->grad.resize(0, 0); }

  /// Deep copy of a leaf (fresh node, same value, no gradient).
  Var clone_leaf() const;

  detail::Node* node() const { return node_.get(); }
  const std::shared_ptr<detail::Node>& shared() const { return node_; }

 private:
  explicit Var(std::shared_ptr<detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<detail::Node> node_;
};

/// Reverse sweep from a 1×1 loss. Gradients accumulate additively into every
/// reachable leaf that requires them. Throws ContractError for a non-scalar
/// loss.
void backward(const Var& loss);

void zero_grad(const std::vector<Var>& params);

Var matmul(const Var& a, const Var& b);
Var add(const Var& a, const Var& b);
Var hadamard(const Var& a, const Var& b);
Var scale(const Var& a, double c);
Var transpose(const Var& a);
Var relu(const Var& a);
/// exp(x - rowmax) / sum, per row.
Var row_softmax(const Var& a);
Var sigmoid_scalar(const Var& a);
/// -log(max(pred[target], 1e-12)) for a 1×C probability row.
Var cross_entropy(const Var& pred, int target);
/// Sum of all entries, as 1×1.
Var sum(const Var& a);
/// Row-major concatenation of the rows of an m×n matrix into 1×(m·n).
Var flatten_rows(const Var& a);
/// Column means over rows: m×n -> 1×n.
Var mean_rows(const Var& a);
/// Appends zero rows up to `rows` total.
Var pad_rows(const Var& a, Eigen::Index rows);

inline constexpr double kLogFloor = 1e-12;

}  // namespace pinet
