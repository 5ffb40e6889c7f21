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
#include <optional>

#include "pinet/graph.hpp"

namespace pinet {

using WlHash = std::uint64_t;

struct WlOptions {
  /// Refinement rounds. Unset means one round per vertex.
  std::optional<int> iterations;
  /// Seed initial colors from feature rows instead of degrees.
  bool use_features = false;
};

/// 1-WL colour-refinement certificate.
///
/// Each round recolours a vertex by a stable 64-bit digest of
/// (own colour, sorted neighbour colours). The result digests the sorted
/// multiset of final colours. Equal for isomorphic inputs; unequal values
/// certify non-isomorphism. Exactly `iterations` rounds always run so that
/// hashes of different graphs are comparable.
WlHash wl_hash(const Graph& g, const WlOptions& options = {});

}  // namespace pinet
