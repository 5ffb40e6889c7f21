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

#include "pinet/random_graph.hpp"

#include "pinet/error.hpp"

namespace pinet {

Graph er_sample(std::size_t n, double edge_probability, Rng& rng) {
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    throw ParameterError("er_sample: edge probability must be in [0, 1]");
  }
  if (n < 1) throw ParameterError("er_sample: n must be >= 1");
  const auto size = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Zero(size, size);
  std::bernoulli_distribution coin(edge_probability);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = i + 1; j < size; ++j) {
      if (coin(rng)) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return Graph::from_adjacency(std::move(a));
}

std::optional<Graph> apply_double_edge_swap(const Graph& g, int a, int b,
                                            int c, int d) {
  const auto n = static_cast<int>(g.num_vertices());
  for (int v : {a, b, c, d}) {
    if (v < 0 || v >= n) return std::nullopt;
  }
  if (a == b || a == c || a == d || b == c || b == d || c == d) {
    return std::nullopt;
  }
  const Matrix& adj = g.adjacency();
  if (adj(a, b) == 0.0 || adj(c, d) == 0.0) return std::nullopt;
  if (adj(a, d) != 0.0 || adj(c, b) != 0.0) return std::nullopt;
  Matrix out = adj;
  out(a, b) = out(b, a) = 0.0;
  out(c, d) = out(d, c) = 0.0;
  out(a, d) = out(d, a) = 1.0;
  out(c, b) = out(b, c) = 1.0;
  return Graph(std::move(out), g.features(), g.label());
}

Graph double_edge_swap(const Graph& g, Rng& rng, int max_tries) {
  const auto edges = g.edges();
  if (edges.size() < 2) return g;
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::bernoulli_distribution flip(0.5);
  for (int t = 0; t < max_tries; ++t) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (flip(rng)) std::swap(a, b);
    if (flip(rng)) std::swap(c, d);
    if (auto swapped = apply_double_edge_swap(g, a, b, c, d)) {
      return *std::move(swapped);
    }
  }
  return g;
}

}  // namespace pinet
