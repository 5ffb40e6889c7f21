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

#include "pinet/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pinet/error.hpp"
#include "pinet/parallel.hpp"

namespace pinet {

void TrainConfig::validate() const {
  if (epochs < 1) throw ParameterError("epochs must be >= 1");
  if (batch_size < 1) throw ParameterError("batch_size must be >= 1");
  if (!(lr > 0.0)) throw ParameterError("learning rate must be positive");
}

namespace {

std::vector<std::vector<std::size_t>> indices_by_class(const Dataset& ds) {
  std::vector<std::vector<std::size_t>> out(
      static_cast<std::size_t>(ds.num_classes));
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
    out.at(static_cast<std::size_t>(ds.graphs[i].label())).push_back(i);
  }
  return out;
}

}  // namespace

Split stratified_split(const Dataset& ds, int per_class_train, Rng& rng) {
  if (per_class_train < 1) {
    throw ParameterError("per_class_train must be >= 1");
  }
  auto by_class = indices_by_class(ds);
  Split split;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    if (static_cast<int>(members.size()) < per_class_train + 1) {
      throw ParameterError("class " + std::to_string(c) + " has " +
                           std::to_string(members.size()) +
                           " graphs; need at least " +
                           std::to_string(per_class_train + 1));
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto cut = static_cast<std::ptrdiff_t>(per_class_train);
    split.train.insert(split.train.end(), members.begin(), members.begin() + cut);
    split.validation.insert(split.validation.end(), members.begin() + cut,
                            members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

std::vector<Split> kfold_splits(const Dataset& ds, int k, Rng& rng) {
  if (k < 2) throw ParameterError("k must be >= 2");
  if (static_cast<std::size_t>(k) > ds.size()) {
    throw ParameterError("k = " + std::to_string(k) + " exceeds dataset size " +
                         std::to_string(ds.size()));
  }
  std::vector<int> fold_of(ds.size());
  std::size_t dealt = 0;
  for (auto& members : indices_by_class(ds)) {
    std::shuffle(members.begin(), members.end(), rng);
    for (auto i : members) {
      fold_of[i] = static_cast<int>(dealt++ % static_cast<std::size_t>(k));
    }
  }
  std::vector<Split> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (int f = 0; f < k; ++f) {
      auto& s = folds[static_cast<std::size_t>(f)];
      (fold_of[i] == f ? s.validation : s.train).push_back(i);
    }
  }
  return folds;
}

History train_model(Model& model, const Dataset& train,
                    const Dataset& validation, const TrainConfig& config) {
  config.validate();
  if (train.empty()) throw ParameterError("train_model: empty training set");

  Rng rng(config.seed);
  Optimizer optimizer(config.optimizer, config.lr);
  std::vector<Var> params = model.parameters();
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  History history;
  history.train_loss.reserve(static_cast<std::size_t>(config.epochs));
  history.val_accuracy.reserve(static_cast<std::size_t>(config.epochs));
  const auto batch = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      Var loss;
      for (std::size_t i = start; i < end; ++i) {
        const Graph& g = train.graphs[order[i]];
        Var l = cross_entropy(model.forward(g), g.label());
        loss = loss.valid() ? add(loss, l) : l;
      }
      loss_total += loss.scalar();
      loss = scale(loss, 1.0 / static_cast<double>(end - start));
      zero_grad(params);
      backward(loss);
      optimizer.step(params);
    }
    history.train_loss.push_back(loss_total / static_cast<double>(train.size()));
    history.val_accuracy.push_back(validation.empty()
                                       ? std::numeric_limits<double>::quiet_NaN()
                                       : evaluate(model, validation));
  }
  zero_grad(params);
  return history;
}

double evaluate(const Model& model, const Dataset& ds) {
  if (ds.empty()) throw ParameterError("evaluate: empty dataset");
  std::size_t correct = 0;
  for (const auto& g : ds.graphs) {
    if (model.predict(g) == g.label()) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

double mean_loss(const Model& model, const Dataset& ds) {
  if (ds.empty()) throw ParameterError("mean_loss: empty dataset");
  double total = 0.0;
  for (const auto& g : ds.graphs) {
    total += cross_entropy(model.forward(g), g.label()).scalar();
  }
  return total / static_cast<double>(ds.size());
}

int best_epoch(const std::vector<History>& histories) {
  if (histories.empty()) throw ParameterError("best_epoch: no histories");
  const std::size_t epochs = histories.front().val_accuracy.size();
  int best = 0;
  double best_mean = -1.0;
  for (std::size_t e = 0; e < epochs; ++e) {
    double total = 0.0;
    for (const auto& h : histories) total += h.val_accuracy.at(e);
    const double mean = total / static_cast<double>(histories.size());
    if (mean > best_mean) {
      best_mean = mean;
      best = static_cast<int>(e);
    }
  }
  return best;
}

CvResult best_epoch_cv_accuracy(ModelConfig model, const Dataset& ds,
                                const TrainConfig& config, int k, int jobs) {
  config.validate();
  if (model.kind == ModelKind::kGcnDense && model.max_vertices <= 0) {
    model.max_vertices = ds.max_vertices();
  }
  Rng split_rng = derive_rng(config.seed, 0, 0x5);
  const auto folds = kfold_splits(ds, k, split_rng);

  CvResult result;
  result.histories.resize(folds.size());
  result.learned.resize(folds.size());
  parallel_for(folds.size(), jobs, [&](std::size_t f) {
    Rng init_rng = derive_rng(config.seed, f, 0x1);
    Model m = Model::init(model, init_rng);
    TrainConfig fold_config = config;
    fold_config.seed = derive_rng(config.seed, f, 0x2)();
    result.histories[f] = train_model(m, ds.subset(folds[f].train),
                                      ds.subset(folds[f].validation),
                                      fold_config);
    result.learned[f] = m.learned_propagation();
  });

  result.best_epoch = best_epoch(result.histories);
  double total = 0.0;
  for (const auto& h : result.histories) {
    const double acc = h.val_accuracy[static_cast<std::size_t>(result.best_epoch)];
    result.fold_accuracy.push_back(acc);
    total += acc;
  }
  result.mean_accuracy = total / static_cast<double>(result.histories.size());
  return result;
}

}  // namespace pinet
