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

// pinet: isomorphism data generation, learning curves, propagation-mode
// comparison, cross-validated benchmarks and gradient checking.
//
// Exit codes: 0 success, 1 verification or generation failure, 2 usage or
// parameter error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pinet/error.hpp"
#include "pinet/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Flags {
  pinet::CommonOptions common;
  std::vector<int> hidden{32, 64};
  std::string prop_mode = "sym_norm_A_plus_I";
  std::string out;
};

void add_seed(CLI::App* app, Flags& f) {
  app->add_option("--seed", f.common.seed, "Random seed")->capture_default_str();
}

void add_training_flags(CLI::App* app, Flags& f) {
  add_seed(app, f);
  app->add_option("--jobs", f.common.jobs, "Worker threads")->capture_default_str();
  app->add_option("--epochs", f.common.epochs, "Training epochs")->capture_default_str();
  app->add_option("--lr", f.common.lr, "Adam learning rate")->capture_default_str();
  app->add_option("--batch-size", f.common.batch_size, "Graphs per optimiser step")
      ->capture_default_str();
  app->add_option("--hidden", f.hidden, "Hidden widths h1,h2 (one value sets both)")
      ->delimiter(',')
      ->expected(1, 2);
  app->add_option("--prop-mode", f.prop_mode,
                  "raw_A | A_plus_I | sym_norm_A | sym_norm_A_plus_I | learned")
      ->capture_default_str();
}

// Folds the string-typed flags into CommonOptions.
void finish(Flags& f) {
  if (f.hidden.empty()) throw pinet::ParameterError("--hidden needs a value");
  f.common.hidden1 = f.hidden.front();
  f.common.hidden2 = f.hidden.back();
  f.common.prop_mode = pinet::parse_propagation_mode(f.prop_mode);
  f.common.validate();
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file);
  out << text;
  if (!out) throw pinet::IoError("cannot write " + file.string());
}

fs::path prepare_out(const std::string& out) {
  const fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw pinet::IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PiNet graph classification toolkit"};
  app.set_version_flag("--version", pinet::version());
  app.require_subcommand(1);

  // generate-iso
  Flags gen_flags;
  pinet::IsoGenConfig gen;
  auto* gen_cmd = app.add_subcommand(
      "generate-iso", "Write a WL-certified isomorphism dataset in benchmark format");
  gen_cmd->add_option("--out", gen_flags.out, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--n", gen.n_vertices, "Vertices per graph")->capture_default_str();
  gen_cmd->add_option("--p", gen.edge_p, "Edge probability of the seed graph")
      ->capture_default_str();
  gen_cmd->add_option("--classes", gen.n_classes, "Number of classes")->capture_default_str();
  gen_cmd->add_option("--copies", gen.copies_per_class, "Graphs per class")
      ->capture_default_str();
  gen_cmd->add_option("--rewire-steps", gen.rewire_steps, "Swaps per rewiring walk (0: 2|E|)")
      ->capture_default_str();
  gen_cmd->add_option("--max-attempts", gen.max_attempts, "Seed graphs to try")
      ->capture_default_str();

  // iso-curve
  Flags curve_flags;
  pinet::IsoCurveOptions curve;
  std::string curve_data;
  bool curve_svg = false;
  auto* curve_cmd = app.add_subcommand(
      "iso-curve", "Accuracy against training-set size on the isomorphism task");
  add_training_flags(curve_cmd, curve_flags);
  curve_cmd->add_option("--out", curve_flags.out, "Output directory")->required();
  curve_cmd->add_option("--data", curve_data,
                        "Dataset directory (default: generate from --seed)");
  curve_cmd->add_option("--sizes", curve.sizes, "Training graphs per class")
      ->delimiter(',')
      ->capture_default_str();
  curve_cmd->add_option("--trials", curve.trials, "Trials per size")->capture_default_str();
  curve_cmd->add_option("--models", curve.models, "Models to compare")
      ->delimiter(',')
      ->capture_default_str();
  curve_cmd->add_flag("--svg", curve_svg, "Also write iso_curve.svg");

  // mp-compare
  Flags mp_flags;
  std::string mp_data;
  int mp_folds = 10;
  auto* mp_cmd = app.add_subcommand(
      "mp-compare", "PiNet under each fixed propagation mode and learned p, q");
  add_training_flags(mp_cmd, mp_flags);
  mp_cmd->add_option("--out", mp_flags.out, "Output directory")->required();
  mp_cmd->add_option("--data", mp_data, "Dataset directory")->required();
  mp_cmd->add_option("--folds", mp_folds, "Cross-validation folds")->capture_default_str();

  // benchmark
  Flags bench_flags;
  std::vector<std::string> bench_data;
  std::vector<std::string> bench_models{"pinet-gcn", "pinet-gcn-learned", "gcn-mean",
                                        "gcn-dense"};
  int bench_folds = 10;
  auto* bench_cmd = app.add_subcommand(
      "benchmark", "Best-epoch k-fold accuracy of PiNet and GCN baselines");
  add_training_flags(bench_cmd, bench_flags);
  bench_cmd->add_option("--out", bench_flags.out, "Output directory")->required();
  bench_cmd->add_option("--data", bench_data, "Dataset directories (repeatable)")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--models", bench_models,
                        "pinet-gcn, pinet-gcn-learned, gcn-mean, gcn-dense, pinet")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--folds", bench_folds, "Cross-validation folds")
      ->capture_default_str();

  // gradcheck
  Flags gc_flags;
  int gc_n = 5;
  auto* gc_cmd = app.add_subcommand(
      "gradcheck", "Backward gradients of a learned-mode PiNet against finite differences");
  add_seed(gc_cmd, gc_flags);
  gc_cmd->add_option("--n", gc_n, "Vertices (1 to 8)")->capture_default_str();
  gc_cmd->add_option("--hidden", gc_flags.hidden, "Hidden widths h1,h2")
      ->delimiter(',')
      ->expected(1, 2);
  gc_cmd->add_option("--out", gc_flags.out, "Optional output directory for the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == gen_cmd) {
      const fs::path out = prepare_out(gen_flags.out);
      const auto ds = pinet::run_generate_iso(gen, out);
      std::cout << "wrote " << ds.size() << " graphs (" << ds.num_classes
                << " classes) to " << out.string() << "\n";
      return 0;
    }

    if (active == curve_cmd) {
      finish(curve_flags);
      curve.common = curve_flags.common;
      curve.validate();
      ordered_json data;
      pinet::Dataset ds;
      if (curve_data.empty()) {
        pinet::IsoGenConfig g;
        g.seed = curve.common.seed;
        ds = pinet::generate_iso_dataset(g);
        data = {{"generated", pinet::to_json(g)}};
      } else {
        ds = pinet::load_dataset(curve_data);
        data = {{"path", curve_data}, {"name", ds.name}};
      }
      const fs::path out = prepare_out(curve_flags.out);
      const auto rows = pinet::run_iso_curve(ds, curve);
      std::ostringstream csv;
      pinet::write_iso_curve_csv(rows, csv);
      write_text(out / "iso_curve.csv", csv.str());
      std::vector<std::string> outputs{"iso_curve.csv"};
      if (curve_svg) {
        write_text(out / "iso_curve.svg", pinet::iso_curve_svg(rows));
        outputs.push_back("iso_curve.svg");
      }
      ordered_json config = curve.common.to_json();
      config["sizes"] = curve.sizes;
      config["trials"] = curve.trials;
      config["models"] = curve.models;
      config["data"] = data;
      pinet::write_manifest(out / "iso_curve.manifest.json", "iso-curve",
                            curve.common.seed, config, outputs);
      std::cout << csv.str();
      return 0;
    }

    if (active == mp_cmd) {
      finish(mp_flags);
      const auto ds = pinet::load_dataset(mp_data);
      const fs::path out = prepare_out(mp_flags.out);
      const auto results = pinet::run_mp_compare(ds, mp_flags.common, mp_folds);
      std::ostringstream csv, learned;
      pinet::write_mp_compare_csv(results, csv);
      pinet::write_learned_csv(results, learned);
      write_text(out / "mp_compare.csv", csv.str());
      write_text(out / "mp_compare_learned.csv", learned.str());
      ordered_json config = mp_flags.common.to_json();
      config["folds"] = mp_folds;
      config["data"] = {{"path", mp_data}, {"name", ds.name}};
      pinet::write_manifest(out / "mp_compare.manifest.json", "mp-compare",
                            mp_flags.common.seed, config,
                            {"mp_compare.csv", "mp_compare_learned.csv"});
      std::cout << csv.str();
      return 0;
    }

    if (active == bench_cmd) {
      finish(bench_flags);
      // Reject bad names before any training.
      for (const auto& m : bench_models) {
        const auto& known = pinet::model_names();
        if (std::find(known.begin(), known.end(), m) == known.end()) {
          pinet::model_config_for(m, pinet::Dataset{}, bench_flags.common);
        }
      }
      std::vector<pinet::Dataset> datasets;
      for (const auto& d : bench_data) datasets.push_back(pinet::load_dataset(d));
      const fs::path out = prepare_out(bench_flags.out);
      std::ostringstream csv;
      pinet::write_benchmark_header(csv);
      for (const auto& ds : datasets) {
        for (const auto& m : bench_models) {
          std::cerr << "benchmark: " << ds.name << " / " << m << "\n";
          pinet::write_benchmark_rows(
              pinet::run_benchmark(ds, m, bench_flags.common, bench_folds), csv);
        }
      }
      write_text(out / "benchmark.csv", csv.str());
      ordered_json config = bench_flags.common.to_json();
      config["folds"] = bench_folds;
      config["models"] = bench_models;
      config["data"] = bench_data;
      pinet::write_manifest(out / "benchmark.manifest.json", "benchmark",
                            bench_flags.common.seed, config, {"benchmark.csv"});
      std::cout << csv.str();
      return 0;
    }

    if (active == gc_cmd) {
      finish(gc_flags);
      const auto report = pinet::run_gradcheck(gc_flags.common, gc_n);
      const auto& r = report.result;
      const bool pass = r.max_relative_error < pinet::kGradcheckTolerance;
      std::cout << "graph: " << report.vertices << " vertices, " << report.edges
                << " edges; " << r.coordinates << " coordinates\n"
                << "max relative error: " << pinet::format_double(r.max_relative_error)
                << " (" << report.names[r.worst_param] << "[" << r.worst_index
                << "], analytic " << pinet::format_double(r.analytic) << ", numeric "
                << pinet::format_double(r.numeric) << ")\n";
      for (std::size_t k = 0; k < report.names.size(); ++k) {
        if (report.names[k].find("_raw") != std::string::npos) {
          std::cout << "  " << report.names[k] << ": "
                    << pinet::format_double(r.per_param[k]) << "\n";
        }
      }
      std::cout << (pass ? "PASS" : "FAIL") << " (tolerance "
                << pinet::format_double(pinet::kGradcheckTolerance) << ")\n";
      if (!gc_flags.out.empty()) {
        const fs::path out = prepare_out(gc_flags.out);
        std::ostringstream csv;
        pinet::write_gradcheck_csv(report, csv);
        write_text(out / "gradcheck.csv", csv.str());
        ordered_json config{{"n", gc_n},
                            {"hidden", {gc_flags.common.hidden1, gc_flags.common.hidden2}},
                            {"max_relative_error", r.max_relative_error},
                            {"pass", pass}};
        pinet::write_manifest(out / "gradcheck.manifest.json", "gradcheck",
                              gc_flags.common.seed, config, {"gradcheck.csv"});
      }
      return pass ? 0 : kExitFailure;
    }
  } catch (const std::invalid_argument& e) {
    // ParameterError and DimensionError: bad flags or inputs.
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kExitUsage;
  } catch (const pinet::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pinet::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
