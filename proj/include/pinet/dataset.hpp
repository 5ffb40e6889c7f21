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
#include <filesystem>
#include <string>
#include <vector>

#include "pinet/graph.hpp"

namespace pinet {

/// An ordered collection of labelled graphs sharing a feature width.
struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  int num_classes = 0;
  int feature_dim = 0;

  std::size_t size() const { return graphs.size(); }
  bool empty() const { return graphs.empty(); }
  int max_vertices() const;
  std::vector<int> class_counts() const;
  Dataset subset(const std::vector<std::size_t>& indices) const;

  /// Throws ParameterError unless every feature width equals feature_dim
  /// and every label is below num_classes.
  void validate() const;
};

/// Reads NAME_A.txt, NAME_graph_indicator.txt, NAME_graph_labels.txt and
/// the optional NAME_node_labels.txt from `directory`.
///
/// Edge lines are 1-indexed "i, j" entries; both directions must be present.
/// Graph and node labels are remapped to contiguous indices in sorted order;
/// node labels become one-hot features, and graphs without node labels get a
/// constant 1-wide feature. Throws IoError for a missing file and FormatError
/// (with file and line) for malformed content.
Dataset parse_tu_dataset(const std::filesystem::path& directory,
                         const std::string& name);

/// Writes the dataset in the same layout, 1-indexed, both edge directions.
/// Node labels are written only when every feature row is one-hot.
void write_tu_dataset(const Dataset& dataset,
                      const std::filesystem::path& directory);

struct IsoGenConfig {
  int n_vertices = 20;
  double edge_p = 0.3;
  int n_classes = 5;
  int copies_per_class = 100;
  /// Swaps applied to derive each further class; 0 means 2·|E|.
  int rewire_steps = 0;
  /// ER seed graphs to try before giving up.
  int max_attempts = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Isomorphism benchmark: `n_classes` 1-WL-distinct graphs with one shared
/// degree multiset (an ER sample and double-edge-swap rewirings of it), each
/// vertex given a random one-hot feature of width two. Each class holds the
/// source followed by copies_per_class - 1 independently relabelled copies,
/// classes in order. Labels are the source index. Throws GenerationError when certification fails.
Dataset generate_iso_dataset(const IsoGenConfig& config);

}  // namespace pinet
