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

#include "pinet/wl_hash.hpp"

#include <algorithm>
#include <bit>
#include <vector>

#include "pinet/error.hpp"

namespace pinet {

namespace {

// FNV-1a over 64-bit words, finalised with a splitmix64 mix.
class Digest {
 public:
  void add(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (word >> (8 * i)) & 0xffu;
      state_ *= 0x100000001b3ull;
    }
  }
  std::uint64_t finish() const {
    std::uint64_t z = state_ + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

}  // namespace

WlHash wl_hash(const Graph& g, const WlOptions& options) {
  const auto n = static_cast<int>(g.num_vertices());
  const int rounds = options.iterations.value_or(n);
  if (rounds < 1) throw ParameterError("wl_hash: iterations must be >= 1");

  std::vector<std::vector<int>> neighbours(static_cast<std::size_t>(n));
  for (const auto& [u, v] : g.edges()) {
    neighbours[static_cast<std::size_t>(u)].push_back(v);
    neighbours[static_cast<std::size_t>(v)].push_back(u);
  }

  std::vector<std::uint64_t> colour(static_cast<std::size_t>(n));
  const auto degrees = g.degrees();
  for (int i = 0; i < n; ++i) {
    Digest d;
    if (options.use_features) {
      d.add(1);
      for (Eigen::Index c = 0; c < g.features().cols(); ++c) {
        // +0.0 canonicalises negative zero.
        d.add(std::bit_cast<std::uint64_t>(g.features()(i, c) + 0.0));
      }
    } else {
      d.add(0);
      d.add(static_cast<std::uint64_t>(degrees[static_cast<std::size_t>(i)]));
    }
    colour[static_cast<std::size_t>(i)] = d.finish();
  }

  std::vector<std::uint64_t> next(colour.size());
  std::vector<std::uint64_t> around;
  for (int round = 0; round < rounds; ++round) {
    for (int i = 0; i < n; ++i) {
      const auto& nb = neighbours[static_cast<std::size_t>(i)];
      around.clear();
      for (int j : nb) around.push_back(colour[static_cast<std::size_t>(j)]);
      std::sort(around.begin(), around.end());
      Digest d;
      d.add(colour[static_cast<std::size_t>(i)]);
      d.add(around.size());
      for (auto c : around) d.add(c);
      next[static_cast<std::size_t>(i)] = d.finish();
    }
    colour.swap(next);
  }

  std::sort(colour.begin(), colour.end());
  Digest d;
  d.add(colour.size());
  for (auto c : colour) d.add(c);
  return d.finish();
}

}  // namespace pinet
