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

#include "pinet/graph.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "pinet/error.hpp"

namespace pinet {

namespace {

void validate_adjacency(const Matrix& a) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << "adjacency must be square, got " << a.rows() << "x" << a.cols();
    throw DimensionError(os.str());
  }
  if (a.rows() < 1) throw DimensionError("graph must have at least one vertex");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0.0) {
      throw ContractError("self-loop at vertex " + std::to_string(i));
    }
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      const double v = a(i, j);
      if (v != 0.0 && v != 1.0) {
        throw ContractError("adjacency entries must be 0 or 1");
      }
      if (v != a(j, i)) {
        std::ostringstream os;
        os << "adjacency is not symmetric at (" << i << ", " << j << ")";
        throw ContractError(os.str());
      }
    }
  }
}

}  // namespace

Graph::Graph(Matrix adjacency, Matrix features, int label)
    : adjacency_(std::move(adjacency)),
      features_(std::move(features)),
      label_(label) {
  validate_adjacency(adjacency_);
  if (features_.size() == 0) features_.resize(adjacency_.rows(), 0);
  if (features_.rows() != adjacency_.rows()) {
    std::ostringstream os;
    os << "feature matrix has " << features_.rows() << " rows for "
       << adjacency_.rows() << " vertices";
    throw DimensionError(os.str());
  }
  if (label_ < 0) throw ParameterError("label must be non-negative");
}

Graph Graph::from_adjacency(Matrix adjacency, int label) {
  return Graph(std::move(adjacency), Matrix(), label);
}

Graph Graph::from_edges(std::size_t n,
                        const std::vector<std::pair<int, int>>& edges,
                        Matrix features, int label) {
  const auto size = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Zero(size, size);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= size || v >= size) {
      throw DimensionError("edge endpoint out of range");
    }
    if (u == v) throw ContractError("self-loops are not allowed");
    if (a(u, v) != 0.0) throw ContractError("parallel edge");
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return Graph(std::move(a), std::move(features), label);
}

std::size_t Graph::num_edges() const {
  return static_cast<std::size_t>(adjacency_.sum() / 2.0 + 0.5);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  const auto n = adjacency_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (adjacency_(i, j) != 0.0) {
        out.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return out;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> out(num_vertices());
  for (Eigen::Index i = 0; i < adjacency_.rows(); ++i) {
    out[static_cast<std::size_t>(i)] =
        static_cast<int>(adjacency_.row(i).sum() + 0.5);
  }
  return out;
}

std::vector<int> Graph::sorted_degrees() const {
  auto d = degrees();
  std::sort(d.begin(), d.end());
  return d;
}

Graph Graph::with_features(Matrix features) const {
  return Graph(adjacency_, std::move(features), label_);
}

Graph Graph::with_label(int label) const {
  return Graph(adjacency_, features_, label);
}

Permutation::Permutation(std::vector<int> mapping)
    : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (int v : mapping_) {
    if (v < 0 || static_cast<std::size_t>(v) >= mapping_.size() ||
        seen[static_cast<std::size_t>(v)]) {
      throw ParameterError("mapping is not a bijection");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<int> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<int>(i);
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(mapping_.size());
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    inv[static_cast<std::size_t>(mapping_[i])] = static_cast<int>(i);
  }
  return Permutation(std::move(inv));
}

Matrix Permutation::as_matrix() const {
  const auto n = static_cast<Eigen::Index>(mapping_.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(mapping_[static_cast<std::size_t>(i)], i) = 1.0;
  return p;
}

Matrix degree_matrix(const Matrix& adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw DimensionError("degree_matrix: adjacency must be square");
  }
  return adjacency.rowwise().sum().asDiagonal();
}

Graph permute(const Graph& g, const Permutation& perm) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  if (static_cast<Eigen::Index>(perm.size()) != n) {
    throw DimensionError("permutation size does not match vertex count");
  }
  const Matrix& a = g.adjacency();
  const Matrix& x = g.features();
  Matrix a2(n, n);
  Matrix x2(n, x.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const int pi = perm[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      a2(pi, perm[static_cast<std::size_t>(j)]) = a(i, j);
    }
    x2.row(pi) = x.row(i);
  }
  return Graph(std::move(a2), std::move(x2), g.label());
}

}  // namespace pinet
