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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "pinet/dataset.hpp"
#include "pinet/error.hpp"
#include "pinet/random_graph.hpp"
#include "pinet/wl_hash.hpp"
#include "test_util.hpp"

namespace pinet {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

const fs::path kFixtures = PINET_FIXTURE_DIR;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pinet_dataset_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_error_message(const fs::path& dir) {
  try {
    parse_tu_dataset(dir, "TWO");
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseTuDatasetTest, TwoGraphFixture) {
  const Dataset ds = parse_tu_dataset(kFixtures / "two_graphs", "TWO");
  EXPECT_EQ(ds.name, "TWO");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.num_classes, 2);
  EXPECT_EQ(ds.feature_dim, 1);

  const Matrix edge = testing::complete(2).adjacency();
  const Matrix triangle = testing::complete(3).adjacency();
  EXPECT_EQ(ds.graphs[0], Graph(edge, Matrix::Ones(2, 1), 0));
  EXPECT_EQ(ds.graphs[1], Graph(triangle, Matrix::Ones(3, 1), 1));
}

TEST(ParseTuDatasetTest, WithoutNodeLabelsUsesConstantFeature) {
  const Dataset ds = parse_tu_dataset(kFixtures / "no_node_labels", "TWO");
  EXPECT_EQ(ds.feature_dim, 1);
  EXPECT_EQ(ds.graphs[1].features(), Matrix::Ones(3, 1));
}

TEST(ParseTuDatasetTest, EmptyEdgeFileGivesEdgelessGraphs) {
  const Dataset ds = parse_tu_dataset(kFixtures / "empty_edges", "TWO");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.graphs[0].num_edges(), 0u);
  EXPECT_EQ(ds.graphs[1].num_vertices(), 3u);
}

TEST(ParseTuDatasetTest, MissingMirrorNamesLine) {
  const auto msg = format_error_message(kFixtures / "missing_mirror");
  EXPECT_THAT(msg, HasSubstr("TWO_A.txt:5:"));
  EXPECT_THAT(msg, HasSubstr("no mirror"));
}

TEST(ParseTuDatasetTest, CrossGraphEdgeNamesLine) {
  const auto msg = format_error_message(kFixtures / "cross_graph");
  EXPECT_THAT(msg, HasSubstr("TWO_A.txt:3:"));
  EXPECT_THAT(msg, HasSubstr("graph"));
}

TEST(ParseTuDatasetTest, OutOfRangeNodeNamesLine) {
  const auto msg = format_error_message(kFixtures / "out_of_range");
  EXPECT_THAT(msg, HasSubstr("TWO_A.txt:3:"));
  EXPECT_THAT(msg, HasSubstr("node 9"));
}

TEST(ParseTuDatasetTest, MissingRequiredFile) {
  EXPECT_THROW(parse_tu_dataset(kFixtures / "missing_file", "TWO"), IoError);
  EXPECT_THROW(parse_tu_dataset(kFixtures / "two_graphs", "NOPE"), IoError);
}

TEST(ParseTuDatasetTest, GarbageLineIsFormatError) {
  const auto dir = scratch_dir("garbage");
  fs::create_directories(dir);
  for (const auto* f : {"TWO_graph_indicator.txt", "TWO_graph_labels.txt"}) {
    fs::copy_file(kFixtures / "two_graphs" / f, dir / f);
  }
  std::ofstream(dir / "TWO_A.txt") << "1, 2\n2 1\n";
  EXPECT_THAT(format_error_message(dir), HasSubstr("TWO_A.txt:2:"));
  std::ofstream(dir / "TWO_A.txt") << "1, x\n";
  EXPECT_THAT(format_error_message(dir), HasSubstr("TWO_A.txt:1:"));
}

TEST(ParseTuDatasetTest, Mutag) {
  const Dataset ds = parse_tu_dataset(PINET_DATA_DIR "/MUTAG", "MUTAG");
  EXPECT_EQ(ds.size(), 188u);
  EXPECT_EQ(ds.num_classes, 2);
  EXPECT_EQ(ds.feature_dim, 7);
  EXPECT_EQ(ds.class_counts(), (std::vector<int>{63, 125}));
  std::size_t nodes = 0, edges = 0;
  for (const auto& g : ds.graphs) {
    nodes += g.num_vertices();
    edges += g.num_edges();
  }
  EXPECT_EQ(nodes, 3371u);
  EXPECT_EQ(edges, 3721u);
  EXPECT_NO_THROW(ds.validate());
}

TEST(WriteTuDatasetTest, SingleEdgeFormat) {
  Dataset ds{"ONE", {testing::complete(2).with_features(Matrix::Ones(2, 1))}, 1, 1};
  const auto dir = scratch_dir("single");
  write_tu_dataset(ds, dir);
  EXPECT_EQ(slurp(dir / "ONE_A.txt"), "1, 2\n2, 1\n");
  EXPECT_EQ(slurp(dir / "ONE_graph_indicator.txt"), "1\n1\n");
  EXPECT_EQ(slurp(dir / "ONE_graph_labels.txt"), "0\n");
  EXPECT_EQ(slurp(dir / "ONE_node_labels.txt"), "0\n0\n");
}

TEST(WriteTuDatasetTest, RoundTripIsIdentity) {
  // Random one-hot labelled graphs, every class and feature column used.
  Rng rng(3);
  Dataset ds{"RT", {}, 3, 4};
  for (int i = 0; i < 30; ++i) {
    const auto n = static_cast<std::size_t>(1 + i % 9);
    Graph g = er_sample(n, 0.4, rng);
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(n), 4);
    std::uniform_int_distribution<int> col(0, 3);
    for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, i < 4 && r == 0 ? i : col(rng)) = 1.0;
    ds.graphs.push_back(g.with_features(x).with_label(i % 3));
  }
  const auto dir = scratch_dir("roundtrip");
  write_tu_dataset(ds, dir);
  const Dataset back = parse_tu_dataset(dir, "RT");
  EXPECT_EQ(back.num_classes, ds.num_classes);
  EXPECT_EQ(back.feature_dim, ds.feature_dim);
  ASSERT_EQ(back.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(back.graphs[i], ds.graphs[i]);
}

TEST(WriteTuDatasetTest, MutagRoundTrip) {
  const Dataset ds = parse_tu_dataset(PINET_DATA_DIR "/MUTAG", "MUTAG");
  const auto dir = scratch_dir("mutag");
  write_tu_dataset(ds, dir);
  const Dataset back = parse_tu_dataset(dir, "MUTAG");
  ASSERT_EQ(back.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(back.graphs[i], ds.graphs[i]);
}

TEST(GenerateIsoDatasetTest, DefaultsAndInvariants) {
  IsoGenConfig config;
  config.seed = 1;
  const Dataset ds = generate_iso_dataset(config);
  ASSERT_EQ(ds.size(), 500u);
  EXPECT_EQ(ds.num_classes, 5);
  EXPECT_EQ(ds.feature_dim, 2);
  EXPECT_EQ(ds.class_counts(), std::vector<int>(5, 100));
  EXPECT_NO_THROW(ds.validate());

  const auto degrees = ds.graphs.front().sorted_degrees();
  WlOptions featured;
  featured.use_features = true;
  std::map<int, std::set<WlHash>> plain, with_features;
  for (const auto& g : ds.graphs) {
    EXPECT_EQ(g.sorted_degrees(), degrees);
    EXPECT_EQ(g.num_vertices(), 20u);
    plain[g.label()].insert(wl_hash(g));
    with_features[g.label()].insert(wl_hash(g, featured));
    for (Eigen::Index r = 0; r < g.features().rows(); ++r) {
      EXPECT_EQ(g.features().row(r).sum(), 1.0);
    }
  }
  std::set<WlHash> across, across_featured;
  for (int c = 0; c < 5; ++c) {
    ASSERT_EQ(plain[c].size(), 1u);
    ASSERT_EQ(with_features[c].size(), 1u);
    across.insert(*plain[c].begin());
    across_featured.insert(*with_features[c].begin());
  }
  EXPECT_EQ(across.size(), 5u);
  EXPECT_EQ(across_featured.size(), 5u);
}

TEST(GenerateIsoDatasetTest, DeterministicAndRoundTripsWithSameHashes) {
  IsoGenConfig config;
  config.seed = 5;
  config.copies_per_class = 10;
  const Dataset a = generate_iso_dataset(config);
  const Dataset b = generate_iso_dataset(config);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.graphs[i], b.graphs[i]);

  const auto dir = scratch_dir("iso");
  write_tu_dataset(a, dir);
  const Dataset back = parse_tu_dataset(dir, a.name);
  WlOptions featured;
  featured.use_features = true;
  std::multiset<WlHash> before, after;
  for (const auto& g : a.graphs) before.insert(wl_hash(g, featured));
  for (const auto& g : back.graphs) after.insert(wl_hash(g, featured));
  EXPECT_EQ(before, after);
}

TEST(GenerateIsoDatasetTest, TinyGraphs) {
  IsoGenConfig config;
  config.n_vertices = 6;
  config.seed = 3;
  const Dataset ds = generate_iso_dataset(config);
  EXPECT_EQ(ds.size(), 500u);
  for (const auto& g : ds.graphs) EXPECT_EQ(g.num_vertices(), 6u);
}

TEST(GenerateIsoDatasetTest, ImpossibleConfigurationFails) {
  IsoGenConfig config;
  config.n_vertices = 3;  // at most 4 graphs on 3 vertices
  config.max_attempts = 5;
  EXPECT_THROW(generate_iso_dataset(config), GenerationError);
  config.n_classes = 1;
  EXPECT_THROW(generate_iso_dataset(config), ParameterError);
}

}  // namespace
}  // namespace pinet
