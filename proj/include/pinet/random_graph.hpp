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
#include <optional>

#include "pinet/graph.hpp"
#include "pinet/rng.hpp"

namespace pinet {

/// G(n, p): each unordered pair is an edge independently with probability
/// `edge_probability`. Features are unset.
Graph er_sample(std::size_t n, double edge_probability, Rng& rng);

/// Replaces edges (a,b),(c,d) by (a,d),(c,b). Returns nullopt unless both
/// edges exist, the four endpoints are distinct, and neither new edge exists.
std::optional<Graph> apply_double_edge_swap(const Graph& g, int a, int b,
                                            int c, int d);

/// One degree-preserving rewiring step. Draws random oriented edge pairs up
/// to `max_tries` times and applies the first valid swap; returns `g`
/// unchanged when none is found (including graphs with fewer than two edges).
Graph double_edge_swap(const Graph& g, Rng& rng, int max_tries = 100);

}  // namespace pinet
