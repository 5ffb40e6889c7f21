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

#include <algorithm>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pinet {

using Matrix = Eigen::MatrixXd;

/// A simple undirected graph with dense adjacency, a vertex feature matrix
/// and a class label.
///
/// Values are immutable after construction. The constructor rejects
/// non-square, asymmetric or non-binary adjacency, self-loops, and feature
/// matrices whose row count differs from the vertex count. A feature matrix
/// with zero columns means "features unset".
class Graph {
 public:
  Graph(Matrix adjacency, Matrix features, int label = 0);

  /// Convenience: graph with N×0 features.
  static Graph from_adjacency(Matrix adjacency, int label = 0);

  /// Builds the adjacency from an undirected edge list over `n` vertices.
  static Graph from_edges(std::size_t n,
                          const std::vector<std::pair<int, int>>& edges,
                          Matrix features = Matrix(), int label = 0);

  const Matrix& adjacency() const { return adjacency_; }
  const Matrix& features() const { return features_; }
  int label() const { return label_; }

  std::size_t num_vertices() const {
    return static_cast<std::size_t>(adjacency_.rows());
  }
  std::size_t feature_dim() const {
    return static_cast<std::size_t>(features_.cols());
  }
  std::size_t num_edges() const;

  /// Undirected edges (i < j), in row-major order.
  std::vector<std::pair<int, int>> edges() const;
  std::vector<int> degrees() const;
  /// Degrees sorted ascending; equal for graphs with equal degree multisets.
  std::vector<int> sorted_degrees() const;

  Graph with_features(Matrix features) const;
  Graph with_label(int label) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.label_ == b.label_ && a.adjacency_ == b.adjacency_ &&
           a.features_.rows() == b.features_.rows() &&
           a.features_.cols() == b.features_.cols() &&
           a.features_ == b.features_;
  }

 private:
  Matrix adjacency_;
  Matrix features_;
  int label_;
};

/// A bijection on {0, ..., N-1}; vertex i moves to position perm[i].
class Permutation {
 public:
  explicit Permutation(std::vector<int> mapping);

  static Permutation identity(std::size_t n);
  template <class Rng>
  static Permutation random(std::size_t n, Rng& rng) {
    std::vector<int> mapping(n);
    for (std::size_t i = 0; i < n; ++i) mapping[i] = static_cast<int>(i);
    std::shuffle(mapping.begin(), mapping.end(), rng);
    return Permutation(std::move(mapping));
  }

  std::size_t size() const { return mapping_.size(); }
  int operator[](std::size_t i) const { return mapping_[i]; }
  const std::vector<int>& mapping() const { return mapping_; }

  Permutation inverse() const;
  /// The N×N matrix P with P(perm[i], i) = 1, so that P·A·Pᵀ relabels A.
  Matrix as_matrix() const;

 private:
  std::vector<int> mapping_;
};

/// Diagonal matrix of row sums. Throws DimensionError for non-square input.
Matrix degree_matrix(const Matrix& adjacency);

/// Relabels vertices: adjacency'[perm(i)][perm(j)] = adjacency[i][j] and
/// features'[perm(i)] = features[i].
Graph permute(const Graph& g, const Permutation& perm);

}  // namespace pinet
