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

#include <set>

#include "pinet/dataset.hpp"
#include "pinet/error.hpp"
#include "pinet/random_graph.hpp"
#include "pinet/rng.hpp"
#include "pinet/wl_hash.hpp"

namespace pinet {

void IsoGenConfig::validate() const {
  if (n_vertices < 1) throw ParameterError("n_vertices must be >= 1");
  if (!(edge_p >= 0.0 && edge_p <= 1.0)) {
    throw ParameterError("edge_p must be in [0, 1]");
  }
  if (n_classes < 2) throw ParameterError("n_classes must be >= 2");
  if (copies_per_class < 1) throw ParameterError("copies_per_class must be >= 1");
  if (rewire_steps < 0) throw ParameterError("rewire_steps must be >= 0");
  if (max_attempts < 1) throw ParameterError("max_attempts must be >= 1");
}

namespace {

// Rewirings tried per missing class before resampling the ER seed.
constexpr int kRewiresPerClass = 20;

std::vector<Graph> distinct_rewirings(const Graph& seed,
                                      const IsoGenConfig& config, Rng& rng) {
  const int steps = config.rewire_steps > 0
                        ? config.rewire_steps
                        : 2 * static_cast<int>(seed.num_edges());
  std::vector<Graph> sources{seed};
  std::set<WlHash> seen{wl_hash(seed)};
  const int budget = kRewiresPerClass * config.n_classes;
  for (int t = 0; t < budget && static_cast<int>(sources.size()) < config.n_classes;
       ++t) {
    Graph g = seed;
    for (int s = 0; s < steps; ++s) g = double_edge_swap(g, rng);
    if (seen.insert(wl_hash(g)).second) sources.push_back(std::move(g));
  }
  return sources;
}

Matrix random_one_hot(int rows, int cols, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, cols - 1);
  Matrix x = Matrix::Zero(rows, cols);
  for (int i = 0; i < rows; ++i) x(i, pick(rng)) = 1.0;
  return x;
}

bool featured_hashes_distinct(const std::vector<Graph>& sources) {
  std::set<WlHash> seen;
  WlOptions opts;
  opts.use_features = true;
  for (const auto& g : sources) {
    if (!seen.insert(wl_hash(g, opts)).second) return false;
  }
  return true;
}

}  // namespace

Dataset generate_iso_dataset(const IsoGenConfig& config) {
  config.validate();
  Rng rng(config.seed);
  constexpr int kFeatureWidth = 2;

  std::vector<Graph> sources;
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    const Graph seed = er_sample(static_cast<std::size_t>(config.n_vertices),
                                 config.edge_p, rng);
    if (seed.num_edges() < 2) continue;
    auto found = distinct_rewirings(seed, config, rng);
    if (static_cast<int>(found.size()) < config.n_classes) continue;
    for (auto& g : found) {
      g = g.with_features(random_one_hot(config.n_vertices, kFeatureWidth, rng));
    }
    if (!featured_hashes_distinct(found)) continue;
    sources = std::move(found);
    break;
  }
  if (sources.empty()) {
    throw GenerationError(
        "could not find " + std::to_string(config.n_classes) +
        " WL-distinct graphs with a shared degree sequence after " +
        std::to_string(config.max_attempts) + " attempts (n=" +
        std::to_string(config.n_vertices) + ", p=" +
        std::to_string(config.edge_p) + "); try another seed");
  }

  Dataset ds;
  ds.name = "ISO";
  ds.num_classes = config.n_classes;
  ds.feature_dim = kFeatureWidth;
  ds.graphs.reserve(static_cast<std::size_t>(config.n_classes) *
                    static_cast<std::size_t>(config.copies_per_class));
  for (int c = 0; c < config.n_classes; ++c) {
    const Graph labelled = sources[static_cast<std::size_t>(c)].with_label(c);
    // The source itself, then independently relabelled copies.
    ds.graphs.push_back(labelled);
    for (int k = 1; k < config.copies_per_class; ++k) {
      const auto perm = Permutation::random(labelled.num_vertices(), rng);
      ds.graphs.push_back(permute(labelled, perm));
    }
  }
  return ds;
}

}  // namespace pinet
