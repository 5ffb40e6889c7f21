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

#include "pinet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pinet/error.hpp"

namespace pinet {

namespace fs = std::filesystem;

int Dataset::max_vertices() const {
  int m = 0;
  for (const auto& g : graphs) m = std::max(m, static_cast<int>(g.num_vertices()));
  return m;
}

std::vector<int> Dataset::class_counts() const {
  std::vector<int> counts(static_cast<std::size_t>(std::max(num_classes, 0)), 0);
  for (const auto& g : graphs) {
    if (g.label() < num_classes) ++counts[static_cast<std::size_t>(g.label())];
  }
  return counts;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out{name, {}, num_classes, feature_dim};
  out.graphs.reserve(indices.size());
  for (auto i : indices) out.graphs.push_back(graphs.at(i));
  return out;
}

void Dataset::validate() const {
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (static_cast<int>(graphs[i].feature_dim()) != feature_dim) {
      throw ParameterError("graph " + std::to_string(i) + " has " +
                           std::to_string(graphs[i].feature_dim()) +
                           " features, dataset declares " +
                           std::to_string(feature_dim));
    }
    if (graphs[i].label() >= num_classes) {
      throw ParameterError("graph " + std::to_string(i) + " label " +
                           std::to_string(graphs[i].label()) +
                           " >= num_classes " + std::to_string(num_classes));
    }
  }
}

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

[[noreturn]] void format_error(const fs::path& file, std::size_t line,
                               const std::string& what) {
  throw FormatError(file.string() + ":" + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Non-blank lines with their 1-based line numbers.
std::vector<Line> read_lines(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::vector<Line> out;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    auto t = trim(text);
    if (!t.empty()) out.push_back({number, std::move(t)});
  }
  return out;
}

long long parse_int(const fs::path& file, std::size_t line,
                    const std::string& token) {
  long long v = 0;
  const auto t = trim(token);
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || t.empty()) {
    format_error(file, line, "expected an integer, got '" + t + "'");
  }
  return v;
}

std::vector<long long> read_column(const fs::path& file,
                                   std::vector<std::size_t>* numbers = nullptr) {
  std::vector<long long> out;
  for (const auto& l : read_lines(file)) {
    out.push_back(parse_int(file, l.number, l.text));
    if (numbers) numbers->push_back(l.number);
  }
  return out;
}

// Sorted distinct values -> contiguous indices.
std::map<long long, int> remap(const std::vector<long long>& values) {
  std::set<long long> distinct(values.begin(), values.end());
  std::map<long long, int> out;
  int next = 0;
  for (auto v : distinct) out[v] = next++;
  return out;
}

fs::path file_for(const fs::path& dir, const std::string& name,
                  const std::string& suffix) {
  return dir / (name + "_" + suffix + ".txt");
}

void require_file(const fs::path& p) {
  if (!fs::exists(p)) throw IoError("missing required file " + p.string());
}

}  // namespace

Dataset parse_tu_dataset(const fs::path& directory, const std::string& name) {
  const auto a_file = file_for(directory, name, "A");
  const auto ind_file = file_for(directory, name, "graph_indicator");
  const auto gl_file = file_for(directory, name, "graph_labels");
  const auto nl_file = file_for(directory, name, "node_labels");
  require_file(a_file);
  require_file(ind_file);
  require_file(gl_file);

  std::vector<std::size_t> ind_lines;
  const auto indicator = read_column(ind_file, &ind_lines);
  const auto graph_labels = read_column(gl_file);
  const auto num_graphs = static_cast<long long>(graph_labels.size());
  if (num_graphs == 0) throw FormatError(gl_file.string() + ": no graphs");

  // Node n (0-based) -> (graph, local index).
  std::vector<std::size_t> graph_of(indicator.size());
  std::vector<int> local_of(indicator.size());
  std::vector<int> sizes(static_cast<std::size_t>(num_graphs), 0);
  for (std::size_t n = 0; n < indicator.size(); ++n) {
    const long long gid = indicator[n];
    if (gid < 1 || gid > num_graphs) {
      format_error(ind_file, ind_lines[n],
                   "graph id " + std::to_string(gid) + " outside [1, " +
                       std::to_string(num_graphs) + "]");
    }
    graph_of[n] = static_cast<std::size_t>(gid - 1);
    local_of[n] = sizes[graph_of[n]]++;
  }
  for (long long g = 0; g < num_graphs; ++g) {
    if (sizes[static_cast<std::size_t>(g)] == 0) {
      throw FormatError(ind_file.string() + ": graph " + std::to_string(g + 1) +
                        " has no nodes");
    }
  }

  std::vector<Matrix> adjacency;
  adjacency.reserve(sizes.size());
  for (int s : sizes) adjacency.push_back(Matrix::Zero(s, s));

  // Directed entries; each must be mirrored.
  std::map<std::pair<long long, long long>, std::size_t> directed;
  const auto total_nodes = static_cast<long long>(indicator.size());
  for (const auto& l : read_lines(a_file)) {
    const auto comma = l.text.find(',');
    if (comma == std::string::npos) {
      format_error(a_file, l.number, "expected 'i, j', got '" + l.text + "'");
    }
    const long long i = parse_int(a_file, l.number, l.text.substr(0, comma));
    const long long j = parse_int(a_file, l.number, l.text.substr(comma + 1));
    for (long long v : {i, j}) {
      if (v < 1 || v > total_nodes) {
        format_error(a_file, l.number,
                     "node " + std::to_string(v) + " outside [1, " +
                         std::to_string(total_nodes) + "]");
      }
    }
    const auto ni = static_cast<std::size_t>(i - 1);
    const auto nj = static_cast<std::size_t>(j - 1);
    if (graph_of[ni] != graph_of[nj]) {
      format_error(a_file, l.number,
                   "edge (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") joins node of graph " +
                       std::to_string(graph_of[ni] + 1) + " to node of graph " +
                       std::to_string(graph_of[nj] + 1));
    }
    if (i == j) format_error(a_file, l.number, "self-loop on node " + std::to_string(i));
    directed.emplace(std::make_pair(i, j), l.number);
    adjacency[graph_of[ni]](local_of[ni], local_of[nj]) = 1.0;
  }
  for (const auto& [edge, line] : directed) {
    if (!directed.count({edge.second, edge.first})) {
      format_error(a_file, line,
                   "edge (" + std::to_string(edge.first) + ", " +
                       std::to_string(edge.second) + ") has no mirror (" +
                       std::to_string(edge.second) + ", " +
                       std::to_string(edge.first) + ")");
    }
  }

  std::vector<Matrix> features;
  int feature_dim = 1;
  if (fs::exists(nl_file)) {
    std::vector<std::size_t> nl_lines;
    const auto node_labels = read_column(nl_file, &nl_lines);
    if (node_labels.size() != indicator.size()) {
      throw FormatError(nl_file.string() + ": " +
                        std::to_string(node_labels.size()) +
                        " node labels for " + std::to_string(indicator.size()) +
                        " nodes");
    }
    const auto map = remap(node_labels);
    feature_dim = static_cast<int>(map.size());
    for (int s : sizes) features.push_back(Matrix::Zero(s, feature_dim));
    for (std::size_t n = 0; n < node_labels.size(); ++n) {
      features[graph_of[n]](local_of[n], map.at(node_labels[n])) = 1.0;
    }
  } else {
    for (int s : sizes) features.push_back(Matrix::Ones(s, 1));
  }

  const auto label_map = remap(graph_labels);
  Dataset ds;
  ds.name = name;
  ds.num_classes = static_cast<int>(label_map.size());
  ds.feature_dim = feature_dim;
  ds.graphs.reserve(sizes.size());
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    ds.graphs.emplace_back(std::move(adjacency[g]), std::move(features[g]),
                           label_map.at(graph_labels[g]));
  }
  return ds;
}

namespace {

std::ofstream open_for_write(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

void close_checked(std::ofstream& out, const fs::path& p) {
  out.close();
  if (!out) throw IoError("error writing " + p.string());
}

bool all_one_hot(const Dataset& ds) {
  for (const auto& g : ds.graphs) {
    const Matrix& x = g.features();
    if (x.cols() == 0) return false;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      int ones = 0;
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (x(i, j) == 1.0) {
          ++ones;
        } else if (x(i, j) != 0.0) {
          return false;
        }
      }
      if (ones != 1) return false;
    }
  }
  return true;
}

}  // namespace

void write_tu_dataset(const Dataset& ds, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    throw IoError("cannot create " + directory.string() + ": " + ec.message());
  }
  const auto a_file = file_for(directory, ds.name, "A");
  const auto ind_file = file_for(directory, ds.name, "graph_indicator");
  const auto gl_file = file_for(directory, ds.name, "graph_labels");
  const auto nl_file = file_for(directory, ds.name, "node_labels");
  const bool one_hot = all_one_hot(ds);

  auto a_out = open_for_write(a_file);
  auto ind_out = open_for_write(ind_file);
  auto gl_out = open_for_write(gl_file);
  std::ofstream nl_out;
  if (one_hot) {
    nl_out = open_for_write(nl_file);
  } else if (fs::exists(nl_file)) {
    fs::remove(nl_file);
  }

  long long offset = 0;
  for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
    const Graph& graph = ds.graphs[g];
    const Matrix& a = graph.adjacency();
    const auto n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (a(i, j) != 0.0) {
          a_out << offset + i + 1 << ", " << offset + j + 1 << '\n';
        }
      }
      ind_out << g + 1 << '\n';
      if (one_hot) {
        Eigen::Index col = 0;
        graph.features().row(i).maxCoeff(&col);
        nl_out << col << '\n';
      }
    }
    gl_out << graph.label() << '\n';
    offset += n;
  }
  close_checked(a_out, a_file);
  close_checked(ind_out, ind_file);
  close_checked(gl_out, gl_file);
  if (one_hot) close_checked(nl_out, nl_file);
}

}  // namespace pinet
