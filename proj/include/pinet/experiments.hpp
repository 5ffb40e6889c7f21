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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pinet/dataset.hpp"
#include "pinet/gradcheck.hpp"
#include "pinet/model.hpp"
#include "pinet/train.hpp"

namespace pinet {

std::string version();

/// Flags shared by the training commands.
struct CommonOptions {
  std::uint64_t seed = 0;
  int jobs = 1;
  int epochs = 200;
  double lr = 1e-3;
  int batch_size = 1;
  int hidden1 = 32;
  int hidden2 = 64;
  PropagationMode prop_mode = PropagationMode::kSymNormAPlusI;

  void validate() const;
  TrainConfig train_config() const;
  nlohmann::ordered_json to_json() const;
};

/// Model names accepted on the command line:
///   pinet              PiNet with --prop-mode
///   pinet-gcn          PiNet, sym_norm_A_plus_I
///   pinet-gcn-learned  PiNet, learned p and q
///   gcn-mean, gcn-dense  GCN baselines with --prop-mode
/// Throws ParameterError for anything else.
ModelConfig model_config_for(const std::string& name, const Dataset& dataset,
                             const CommonOptions& options);
const std::vector<std::string>& model_names();

/// Name prefix of the single *_graph_indicator.txt file in `directory`.
std::string detect_dataset_name(const std::filesystem::path& directory);
Dataset load_dataset(const std::filesystem::path& directory);

struct Summary {
  double mean = 0.0;
  /// Sample standard deviation; absent for fewer than two values.
  std::optional<double> stddev;
};
Summary summarize(const std::vector<double>& values);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// {"command", "version", "seed", "config", "outputs"}; no timestamps, so
/// reruns are byte-identical.
void write_manifest(const std::filesystem::path& file,
                    const std::string& command, std::uint64_t seed,
                    const nlohmann::ordered_json& config,
                    const std::vector<std::string>& outputs);

// generate-iso ------------------------------------------------------------

nlohmann::ordered_json to_json(const IsoGenConfig& config);

/// Generates, writes the four data files and manifest.json into `out`.
Dataset run_generate_iso(const IsoGenConfig& config,
                         const std::filesystem::path& out);

// iso-curve ---------------------------------------------------------------

struct IsoCurveOptions {
  CommonOptions common;
  std::vector<int> sizes{2, 5, 10, 20, 50};
  int trials = 10;
  std::vector<std::string> models{"pinet", "gcn-mean"};

  void validate() const;
};

struct IsoCurveRow {
  std::string model;
  int per_class_train = 0;
  int trial = 0;
  double accuracy = 0.0;
};

/// For every size and trial a stratified split (shared by all models),
/// training for the full epoch budget, then accuracy on the held-out graphs.
/// Rows are ordered model, size, trial regardless of --jobs.
std::vector<IsoCurveRow> run_iso_curve(const Dataset& dataset,
                                       const IsoCurveOptions& options);

/// Raw rows, then per (model, size) a "mean" row and, with two or more
/// trials, a "std" row in the trial column.
void write_iso_curve_csv(const std::vector<IsoCurveRow>& rows,
                         std::ostream& out);

/// Mean accuracy against training size, one polyline per model.
std::string iso_curve_svg(const std::vector<IsoCurveRow>& rows);

// mp-compare --------------------------------------------------------------

struct ModeResult {
  PropagationMode mode = PropagationMode::kSymNormAPlusI;
  CvResult cv;
};

/// PiNet under the four fixed propagation modes and the learned one.
std::vector<ModeResult> run_mp_compare(const Dataset& dataset,
                                       const CommonOptions& options,
                                       int folds);

/// mode,best_epoch,mean_accuracy for each mode, then manual_search_mean
/// (mean over the fixed modes) with an empty best_epoch.
void write_mp_compare_csv(const std::vector<ModeResult>& results,
                          std::ostream& out);

/// fold,head,layer,p,q for the learned run.
void write_learned_csv(const std::vector<ModeResult>& results,
                       std::ostream& out);

// benchmark ---------------------------------------------------------------

struct BenchmarkResult {
  std::string dataset;
  std::string model;
  CvResult cv;
};

BenchmarkResult run_benchmark(const Dataset& dataset, const std::string& model,
                              const CommonOptions& options, int folds);

void write_benchmark_header(std::ostream& out);
/// dataset,model,fold,best_epoch,accuracy per fold, then "mean" and "std"
/// rows in the fold column.
void write_benchmark_rows(const BenchmarkResult& result, std::ostream& out);

// gradcheck ---------------------------------------------------------------

struct GradcheckReport {
  GradCheckResult result;
  std::vector<std::string> names;
  std::size_t vertices = 0;
  std::size_t edges = 0;
};

inline constexpr double kGradcheckTolerance = 1e-4;

/// Random ER(n, 0.5) graph with Gaussian features (F = 3, C = 3) and a
/// learned-mode PiNet, checked against extended-precision central
/// differences. Requires 1 <= n <= 8.
GradcheckReport run_gradcheck(const CommonOptions& options, int n);
void write_gradcheck_csv(const GradcheckReport& report, std::ostream& out);

}  // namespace pinet
