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

#include "pinet/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>

#include "pinet/error.hpp"

namespace pinet {

namespace {

std::string shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void require_same_shape(const char* op, const Var& a, const Var& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape(a.value()) + " vs " + shape(b.value()));
  }
}

detail::Node& parent(detail::Node& n, std::size_t i) { return *n.parents[i]; }

}  // namespace

Var Var::parameter(Matrix value) {
  auto n = std::make_shared<detail::Node>();
  n->value = std::move(value);
  n->requires_grad = true;
  return Var(std::move(n));
}

Var Var::constant(Matrix value) {
  auto n = std::make_shared<detail::Node>();
  n->value = std::move(value);
  return Var(std::move(n));
}

Var Var::make(Matrix value, std::vector<Var> parents,
              std::function<void(detail::Node&)> backward_fn) {
  auto n = std::make_shared<detail::Node>();
  n->value = std::move(value);
  n->is_leaf = false;
  n->requires_grad = std::any_of(parents.begin(), parents.end(),
                                 [](const Var& p) { return p.requires_grad(); });
  if (n->requires_grad) {
    n->parents.reserve(parents.size());
    for (auto& p : parents) n->parents.push_back(p.shared());
    n->backward = std::move(backward_fn);
  }
  return Var(std::move(n));
}

double Var::scalar() const {
  if (rows() != 1 || cols() != 1) {
    throw DimensionError("scalar(): value is " + shape(value()));
  }
  return value()(0, 0);
}

Matrix Var::grad() const {
  if (node_->grad.size() == 0) {
    return Matrix::Zero(node_->value.rows(), node_->value.cols());
  }
  return node_->grad;
}

Var Var::clone_leaf() const {
  auto n = std::make_shared<detail::Node>();
  n->value = node_->value;
  n->requires_grad = node_->requires_grad;
  return Var(std::move(n));
}

void backward(const Var& loss) {
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw ContractError("backward: loss must be 1x1, got " +
                        shape(loss.value()));
  }
  if (!loss.requires_grad()) return;

  // Iterative post-order DFS gives a topological order (parents first).
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, std::size_t>> stack;
  stack.emplace_back(loss.node(), 0);
  visited.insert(loss.node());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      detail::Node* p = node->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) {
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  loss.node()->accumulate(Matrix::Ones(1, 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    if (n->is_leaf) continue;
    if (n->grad.size() != 0 && n->backward) n->backward(*n);
    n->grad.resize(0, 0);
  }
}

void zero_grad(const std::vector<Var>& params) {
  for (const auto& p : params) p.node()->grad.resize(0, 0);
}

Var matmul(const Var& a, const Var& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ " +
                         shape(a.value()) + " * " + shape(b.value()));
  }
  return Var::make(a.value() * b.value(), {a, b}, [](detail::Node& n) {
    auto& pa = parent(n, 0);
    auto& pb = parent(n, 1);
    if (pa.requires_grad) pa.accumulate(n.grad * pb.value.transpose());
    if (pb.requires_grad) pb.accumulate(pa.value.transpose() * n.grad);
  });
}

Var add(const Var& a, const Var& b) {
  require_same_shape("add", a, b);
  return Var::make(a.value() + b.value(), {a, b}, [](detail::Node& n) {
    for (auto& p : n.parents) {
      if (p->requires_grad) p->accumulate(n.grad);
    }
  });
}

Var hadamard(const Var& a, const Var& b) {
  require_same_shape("hadamard", a, b);
  return Var::make(a.value().cwiseProduct(b.value()), {a, b},
                   [](detail::Node& n) {
                     auto& pa = parent(n, 0);
                     auto& pb = parent(n, 1);
                     if (pa.requires_grad) {
                       pa.accumulate(n.grad.cwiseProduct(pb.value));
                     }
                     if (pb.requires_grad) {
                       pb.accumulate(n.grad.cwiseProduct(pa.value));
                     }
                   });
}

Var scale(const Var& a, double c) {
  return Var::make(a.value() * c, {a}, [c](detail::Node& n) {
    parent(n, 0).accumulate(n.grad * c);
  });
}

Var transpose(const Var& a) {
  return Var::make(a.value().transpose(), {a}, [](detail::Node& n) {
    parent(n, 0).accumulate(n.grad.transpose());
  });
}

Var relu(const Var& a) {
  return Var::make(a.value().cwiseMax(0.0), {a}, [](detail::Node& n) {
    auto& p = parent(n, 0);
    // Subgradient at exactly zero is zero.
    p.accumulate((p.value.array() > 0.0).select(n.grad.array(), 0.0).matrix());
  });
}

Var row_softmax(const Var& a) {
  const Matrix& x = a.value();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double m = x.row(i).maxCoeff();
    y.row(i) = (x.row(i).array() - m).exp();
    y.row(i) /= y.row(i).sum();
  }
  return Var::make(std::move(y), {a}, [](detail::Node& n) {
    const Matrix& s = n.value;
    // dx = s * (g - <g, s>) per row.
    Eigen::VectorXd dots = n.grad.cwiseProduct(s).rowwise().sum();
    Matrix dx = s.cwiseProduct(n.grad - dots.replicate(1, s.cols()));
    parent(n, 0).accumulate(dx);
  });
}

Var sigmoid_scalar(const Var& a) {
  if (a.rows() != 1 || a.cols() != 1) {
    throw DimensionError("sigmoid_scalar: expected 1x1, got " +
                         shape(a.value()));
  }
  const double x = a.value()(0, 0);
  const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                            : std::exp(x) / (1.0 + std::exp(x));
  return Var::make(Matrix::Constant(1, 1, s), {a}, [](detail::Node& n) {
    const double v = n.value(0, 0);
    parent(n, 0).accumulate(n.grad * (v * (1.0 - v)));
  });
}

Var cross_entropy(const Var& pred, int target) {
  if (pred.rows() != 1) {
    throw DimensionError("cross_entropy: expected a 1xC row, got " +
                         shape(pred.value()));
  }
  if (target < 0 || target >= pred.cols()) {
    throw ParameterError("cross_entropy: target " + std::to_string(target) +
                         " outside [0, " + std::to_string(pred.cols()) + ")");
  }
  const double p = pred.value()(0, target);
  const bool floored = !(p > kLogFloor);
  const double loss = -std::log(floored ? kLogFloor : p);
  return Var::make(Matrix::Constant(1, 1, loss), {pred},
                   [target, p, floored](detail::Node& n) {
                     auto& pp = parent(n, 0);
                     Matrix g = Matrix::Zero(1, pp.value.cols());
                     if (!floored) g(0, target) = -n.grad(0, 0) / p;
                     pp.accumulate(g);
                   });
}

Var sum(const Var& a) {
  return Var::make(Matrix::Constant(1, 1, a.value().sum()), {a},
                   [](detail::Node& n) {
                     auto& p = parent(n, 0);
                     p.accumulate(Matrix::Constant(p.value.rows(),
                                                   p.value.cols(),
                                                   n.grad(0, 0)));
                   });
}

Var flatten_rows(const Var& a) {
  const Eigen::Index r = a.rows();
  const Eigen::Index c = a.cols();
  Matrix out(1, r * c);
  for (Eigen::Index i = 0; i < r; ++i) out.block(0, i * c, 1, c) = a.value().row(i);
  return Var::make(std::move(out), {a}, [r, c](detail::Node& n) {
    Matrix g(r, c);
    for (Eigen::Index i = 0; i < r; ++i) g.row(i) = n.grad.block(0, i * c, 1, c);
    parent(n, 0).accumulate(g);
  });
}

Var mean_rows(const Var& a) {
  const Eigen::Index r = a.rows();
  if (r == 0) throw DimensionError("mean_rows: no rows");
  Matrix out = a.value().colwise().mean();
  return Var::make(std::move(out), {a}, [r](detail::Node& n) {
    parent(n, 0).accumulate(n.grad.replicate(r, 1) / static_cast<double>(r));
  });
}

Var pad_rows(const Var& a, Eigen::Index rows) {
  if (rows < a.rows()) {
    throw CapacityError("pad_rows: " + std::to_string(a.rows()) +
                        " rows exceed padding width " + std::to_string(rows));
  }
  const Eigen::Index r = a.rows();
  Matrix out = Matrix::Zero(rows, a.cols());
  out.topRows(r) = a.value();
  return Var::make(std::move(out), {a}, [r](detail::Node& n) {
    parent(n, 0).accumulate(n.grad.topRows(r));
  });
}

}  // namespace pinet
