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

#include "pinet/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "pinet/error.hpp"
#include "pinet/parallel.hpp"
#include "pinet/random_graph.hpp"
#include "pinet/rng.hpp"

namespace pinet {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Salts for derive_rng, one stream per purpose.
constexpr std::uint64_t kSplitSalt = 0x15;
constexpr std::uint64_t kInitSalt = 0x16;
constexpr std::uint64_t kTrainSalt = 0x17;
constexpr std::uint64_t kGradcheckSalt = 0x18;

const std::vector<PropagationMode> kFixedModes{
    PropagationMode::kRawA, PropagationMode::kAPlusI,
    PropagationMode::kSymNormA, PropagationMode::kSymNormAPlusI};

}  // namespace

std::string version() { return PINET_VERSION; }

void CommonOptions::validate() const {
  if (jobs < 1) throw ParameterError("--jobs must be >= 1");
  if (hidden1 < 1 || hidden2 < 1) throw ParameterError("--hidden must be >= 1");
  train_config().validate();
}

TrainConfig CommonOptions::train_config() const {
  TrainConfig c;
  c.epochs = epochs;
  c.lr = lr;
  c.batch_size = batch_size;
  c.seed = seed;
  return c;
}

ordered_json CommonOptions::to_json() const {
  return ordered_json{{"seed", seed},
                      {"jobs", jobs},
                      {"epochs", epochs},
                      {"lr", lr},
                      {"batch_size", batch_size},
                      {"hidden", {hidden1, hidden2}},
                      {"prop_mode", to_string(prop_mode)},
                      {"optimizer", "adam"}};
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{
      "pinet", "pinet-gcn", "pinet-gcn-learned", "gcn-mean", "gcn-dense"};
  return names;
}

ModelConfig model_config_for(const std::string& name, const Dataset& dataset,
                             const CommonOptions& options) {
  ModelConfig c;
  c.feature_dim = dataset.feature_dim;
  c.num_classes = dataset.num_classes;
  c.hidden1 = options.hidden1;
  c.hidden2 = options.hidden2;
  c.attention_hidden2 = options.hidden2;
  c.prop_mode = options.prop_mode;
  c.max_vertices = dataset.max_vertices();
  if (name == "pinet") {
    c.kind = ModelKind::kPiNet;
  } else if (name == "pinet-gcn") {
    c.kind = ModelKind::kPiNet;
    c.prop_mode = PropagationMode::kSymNormAPlusI;
  } else if (name == "pinet-gcn-learned") {
    c.kind = ModelKind::kPiNet;
    c.prop_mode = PropagationMode::kLearned;
  } else if (name == "gcn-mean") {
    c.kind = ModelKind::kGcnMean;
  } else if (name == "gcn-dense") {
    c.kind = ModelKind::kGcnDense;
  } else {
    std::string known;
    for (const auto& n : model_names()) known += (known.empty() ? "" : " | ") + n;
    throw ParameterError("unknown model '" + name + "' (" + known + ")");
  }
  return c;
}

std::string detect_dataset_name(const fs::path& directory) {
  if (!fs::is_directory(directory)) {
    throw IoError("not a dataset directory: " + directory.string());
  }
  const std::string suffix = "_graph_indicator.txt";
  std::vector<std::string> found;
  for (const auto& entry : fs::directory_iterator(directory)) {
    const auto file = entry.path().filename().string();
    if (file.size() > suffix.size() &&
        file.compare(file.size() - suffix.size(), suffix.size(), suffix) == 0) {
      found.push_back(file.substr(0, file.size() - suffix.size()));
    }
  }
  if (found.size() != 1) {
    throw IoError(directory.string() + ": expected one *" + suffix +
                  " file, found " + std::to_string(found.size()));
  }
  return found.front();
}

Dataset load_dataset(const fs::path& directory) {
  return parse_tu_dataset(directory, detect_dataset_name(directory));
}

Summary summarize(const std::vector<double>& values) {
  if (values.empty()) throw ParameterError("summarize: no values");
  Summary s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_manifest(const fs::path& file, const std::string& command,
                    std::uint64_t seed, const ordered_json& config,
                    const std::vector<std::string>& outputs) {
  const ordered_json manifest{{"command", command},
                              {"version", version()},
                              {"seed", seed},
                              {"config", config},
                              {"outputs", outputs}};
  std::ofstream out(file);
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("cannot write " + file.string());
}

// generate-iso ------------------------------------------------------------

ordered_json to_json(const IsoGenConfig& c) {
  return ordered_json{{"n_vertices", c.n_vertices},
                      {"edge_p", c.edge_p},
                      {"n_classes", c.n_classes},
                      {"copies_per_class", c.copies_per_class},
                      {"rewire_steps", c.rewire_steps},
                      {"max_attempts", c.max_attempts},
                      {"seed", c.seed}};
}

Dataset run_generate_iso(const IsoGenConfig& config, const fs::path& out) {
  config.validate();
  Dataset ds = generate_iso_dataset(config);
  write_tu_dataset(ds, out);
  std::vector<std::string> outputs;
  for (const auto* suffix : {"A", "graph_indicator", "graph_labels", "node_labels"}) {
    outputs.push_back(ds.name + "_" + suffix + ".txt");
  }
  write_manifest(out / "manifest.json", "generate-iso", config.seed,
                 to_json(config), outputs);
  return ds;
}

// iso-curve ---------------------------------------------------------------

void IsoCurveOptions::validate() const {
  common.validate();
  if (trials < 1) throw ParameterError("--trials must be >= 1");
  if (sizes.empty()) throw ParameterError("--sizes must not be empty");
  for (int s : sizes) {
    if (s < 1) throw ParameterError("--sizes entries must be >= 1");
  }
  if (models.empty()) throw ParameterError("--models must not be empty");
}

std::vector<IsoCurveRow> run_iso_curve(const Dataset& dataset,
                                       const IsoCurveOptions& options) {
  options.validate();
  const auto& common = options.common;
  std::vector<ModelConfig> configs;
  for (const auto& m : options.models) {
    configs.push_back(model_config_for(m, dataset, common));
  }

  // Splits first: they are shared by every model and any size error
  // surfaces before training starts.
  const std::size_t settings = options.sizes.size() * std::size_t(options.trials);
  std::vector<Split> splits;
  splits.reserve(settings);
  for (std::size_t s = 0; s < options.sizes.size(); ++s) {
    for (int t = 0; t < options.trials; ++t) {
      const auto index = s * std::size_t(options.trials) + std::size_t(t);
      Rng rng = derive_rng(common.seed, index, kSplitSalt);
      splits.push_back(stratified_split(dataset, options.sizes[s], rng));
    }
  }

  std::vector<IsoCurveRow> rows(configs.size() * settings);
  parallel_for(rows.size(), common.jobs, [&](std::size_t i) {
    const std::size_t m = i / settings;
    const std::size_t setting = i % settings;
    Rng init = derive_rng(common.seed, setting, kInitSalt);
    Model model = Model::init(configs[m], init);
    TrainConfig tc = common.train_config();
    tc.seed = derive_rng(common.seed, setting, kTrainSalt)();
    const Split& split = splits[setting];
    train_model(model, dataset.subset(split.train), Dataset{}, tc);
    rows[i] = IsoCurveRow{options.models[m],
                          options.sizes[setting / std::size_t(options.trials)],
                          int(setting % std::size_t(options.trials)),
                          evaluate(model, dataset.subset(split.validation))};
  });
  return rows;
}

namespace {

// (model, size) groups in first-appearance order.
std::vector<std::pair<std::pair<std::string, int>, std::vector<double>>>
group_rows(const std::vector<IsoCurveRow>& rows) {
  std::vector<std::pair<std::pair<std::string, int>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.model, r.per_class_train);
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == key; });
    if (it == groups.end()) {
      groups.push_back({key, {}});
      it = groups.end() - 1;
    }
    it->second.push_back(r.accuracy);
  }
  return groups;
}

}  // namespace

void write_iso_curve_csv(const std::vector<IsoCurveRow>& rows,
                         std::ostream& out) {
  out << "model,per_class_train,trial,accuracy\n";
  for (const auto& r : rows) {
    out << r.model << "," << r.per_class_train << "," << r.trial << ","
        << format_double(r.accuracy) << "\n";
  }
  for (const auto& [key, values] : group_rows(rows)) {
    const Summary s = summarize(values);
    out << key.first << "," << key.second << ",mean," << format_double(s.mean)
        << "\n";
    if (s.stddev) {
      out << key.first << "," << key.second << ",std,"
          << format_double(*s.stddev) << "\n";
    }
  }
}

std::string iso_curve_svg(const std::vector<IsoCurveRow>& rows) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 60, kRight = 150, kTop = 20, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  static const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd"};

  const auto groups = group_rows(rows);
  std::vector<int> sizes;
  for (const auto& g : groups) sizes.push_back(g.first.second);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (sizes.empty()) sizes.push_back(1);
  // Log-scaled x axis; sizes typically span 2..50.
  const double lo = std::log(double(sizes.front()));
  const double hi = std::log(double(sizes.back()));
  auto x_of = [&](int s) {
    if (hi == lo) return kLeft + plot_w / 2;
    return kLeft + plot_w * (std::log(double(s)) - lo) / (hi - lo);
  };
  auto y_of = [&](double acc) { return kTop + plot_h * (1.0 - acc); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<g stroke=\"#ccc\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = y_of(k / 4.0);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << y << "\"/>\n";
  }
  svg << "</g>\n";
  for (int k = 0; k <= 4; ++k) {
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y_of(k / 4.0) + 4
        << "\" text-anchor=\"end\">" << format_double(k / 4.0) << "</text>\n";
  }
  for (int s : sizes) {
    svg << "<text x=\"" << x_of(s) << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\">" << s << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">training graphs per class</text>\n";
  svg << "<text transform=\"translate(16," << kTop + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">mean accuracy</text>\n";

  std::vector<std::string> models;
  for (const auto& g : groups) {
    if (std::find(models.begin(), models.end(), g.first.first) == models.end()) {
      models.push_back(g.first.first);
    }
  }
  for (std::size_t m = 0; m < models.size(); ++m) {
    const char* colour = kColours[m % 5];
    std::vector<std::pair<int, double>> points;
    for (const auto& g : groups) {
      if (g.first.first == models[m]) {
        points.emplace_back(g.first.second, summarize(g.second).mean);
      }
    }
    std::sort(points.begin(), points.end());
    svg << "<polyline fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [s, acc] : points) svg << x_of(s) << "," << y_of(acc) << " ";
    svg << "\"/>\n";
    for (const auto& [s, acc] : points) {
      svg << "<circle cx=\"" << x_of(s) << "\" cy=\"" << y_of(acc)
          << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    const double ly = kTop + 16 + 18 * double(m);
    svg << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << ly
        << "\" x2=\"" << kWidth - kRight + 35 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kWidth - kRight + 40 << "\" y=\"" << ly + 4 << "\">"
        << models[m] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// mp-compare --------------------------------------------------------------

std::vector<ModeResult> run_mp_compare(const Dataset& dataset,
                                       const CommonOptions& options,
                                       int folds) {
  options.validate();
  std::vector<PropagationMode> modes = kFixedModes;
  modes.push_back(PropagationMode::kLearned);
  std::vector<ModeResult> out;
  for (auto mode : modes) {
    CommonOptions o = options;
    o.prop_mode = mode;
    const ModelConfig config = model_config_for("pinet", dataset, o);
    out.push_back({mode, best_epoch_cv_accuracy(config, dataset,
                                                o.train_config(), folds,
                                                o.jobs)});
  }
  return out;
}

void write_mp_compare_csv(const std::vector<ModeResult>& results,
                          std::ostream& out) {
  out << "mode,best_epoch,mean_accuracy\n";
  std::vector<double> fixed;
  for (const auto& r : results) {
    out << to_string(r.mode) << "," << r.cv.best_epoch + 1 << ","
        << format_double(r.cv.mean_accuracy) << "\n";
    if (r.mode != PropagationMode::kLearned) fixed.push_back(r.cv.mean_accuracy);
  }
  if (!fixed.empty()) {
    out << "manual_search_mean,," << format_double(summarize(fixed).mean) << "\n";
  }
}

void write_learned_csv(const std::vector<ModeResult>& results,
                       std::ostream& out) {
  out << "fold,head,layer,p,q\n";
  for (const auto& r : results) {
    if (r.mode != PropagationMode::kLearned) continue;
    for (std::size_t f = 0; f < r.cv.learned.size(); ++f) {
      for (const auto& l : r.cv.learned[f]) {
        out << f << "," << l.head << "," << l.layer << "," << format_double(l.p)
            << "," << format_double(l.q) << "\n";
      }
    }
  }
}

// benchmark ---------------------------------------------------------------

BenchmarkResult run_benchmark(const Dataset& dataset, const std::string& model,
                              const CommonOptions& options, int folds) {
  options.validate();
  const ModelConfig config = model_config_for(model, dataset, options);
  return {dataset.name, model,
          best_epoch_cv_accuracy(config, dataset, options.train_config(), folds,
                                 options.jobs)};
}

void write_benchmark_header(std::ostream& out) {
  out << "dataset,model,fold,best_epoch,accuracy\n";
}

void write_benchmark_rows(const BenchmarkResult& r, std::ostream& out) {
  const std::string prefix = r.dataset + "," + r.model + ",";
  const int epoch = r.cv.best_epoch + 1;
  for (std::size_t f = 0; f < r.cv.fold_accuracy.size(); ++f) {
    out << prefix << f << "," << epoch << ","
        << format_double(r.cv.fold_accuracy[f]) << "\n";
  }
  const Summary s = summarize(r.cv.fold_accuracy);
  out << prefix << "mean," << epoch << "," << format_double(s.mean) << "\n";
  if (s.stddev) {
    out << prefix << "std," << epoch << "," << format_double(*s.stddev) << "\n";
  }
}

// gradcheck ---------------------------------------------------------------

GradcheckReport run_gradcheck(const CommonOptions& options, int n) {
  if (n < 1 || n > 8) throw ParameterError("--n must be in [1, 8]");
  if (options.hidden1 < 1 || options.hidden2 < 1) {
    throw ParameterError("--hidden must be >= 1");
  }
  constexpr int kFeatures = 3;
  constexpr int kClasses = 3;
  Rng rng = derive_rng(options.seed, 0, kGradcheckSalt);
  Graph g = er_sample(static_cast<std::size_t>(n), 0.5, rng);
  std::normal_distribution<double> normal;
  Matrix x(n, kFeatures);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  const int label = std::uniform_int_distribution<int>(0, kClasses - 1)(rng);
  g = g.with_features(x).with_label(label);

  ModelConfig config;
  config.kind = ModelKind::kPiNet;
  config.feature_dim = kFeatures;
  config.num_classes = kClasses;
  config.hidden1 = options.hidden1;
  config.hidden2 = options.hidden2;
  config.attention_hidden2 = options.hidden2;
  config.prop_mode = PropagationMode::kLearned;
  const Model model = Model::init(config, rng);

  GradcheckReport report;
  report.result = model_gradcheck(model, g);
  report.names = model.parameter_names();
  report.vertices = g.num_vertices();
  report.edges = g.num_edges();
  return report;
}

void write_gradcheck_csv(const GradcheckReport& report, std::ostream& out) {
  out << "parameter,max_relative_error\n";
  for (std::size_t k = 0; k < report.names.size(); ++k) {
    out << report.names[k] << "," << format_double(report.result.per_param[k])
        << "\n";
  }
}

}  // namespace pinet
