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
#include <vector>

#include "pinet/dataset.hpp"
#include "pinet/model.hpp"
#include "pinet/optimizer.hpp"
#include "pinet/rng.hpp"

namespace pinet {

struct TrainConfig {
  int epochs = 200;
  double lr = 1e-3;
  int batch_size = 1;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::kAdam;

  void validate() const;
};

/// Per-epoch mean training loss and validation accuracy (NaN when there is
/// no validation set).
struct History {
  std::vector<double> train_loss;
  std::vector<double> val_accuracy;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Exactly `per_class_train` graphs of every class go to training, sampled
/// uniformly without replacement; the rest are validation. Requires at least
/// per_class_train + 1 graphs in every class.
Split stratified_split(const Dataset& dataset, int per_class_train, Rng& rng);

/// Stratified k-fold partition: each class is shuffled and dealt round-robin
/// across folds, continuing from where the previous class stopped, so class
/// counts per fold differ by at most one and fold sizes by at most one.
std::vector<Split> kfold_splits(const Dataset& dataset, int k, Rng& rng);

/// Mini-batch training: each epoch shuffles the training set, averages the
/// per-graph cross-entropy over each batch and takes one optimiser step per
/// batch, then records validation accuracy.
History train_model(Model& model, const Dataset& train,
                    const Dataset& validation, const TrainConfig& config);

/// Fraction of graphs whose argmax prediction equals the label.
double evaluate(const Model& model, const Dataset& dataset);

/// Mean cross-entropy over a dataset, without gradients.
double mean_loss(const Model& model, const Dataset& dataset);

struct CvResult {
  int best_epoch = 0;
  double mean_accuracy = 0.0;
  /// Validation accuracy of every fold at best_epoch.
  std::vector<double> fold_accuracy;
  std::vector<History> histories;
  /// Learned propagation parameters of each fold's final model.
  std::vector<std::vector<LearnedPropagation>> learned;
};

/// k-fold cross-validation reporting the single epoch whose across-fold mean
/// validation accuracy is highest (earliest on ties).
CvResult best_epoch_cv_accuracy(ModelConfig model, const Dataset& dataset,
                                const TrainConfig& config, int k = 10,
                                int jobs = 1);

/// Index of the largest across-fold mean (earliest on ties).
int best_epoch(const std::vector<History>& histories);

}  // namespace pinet
