// Copyright 2026 The lef Authors
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
#include "lefcli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "lef/dataset.hpp"
#include "lef/error.hpp"
#include "lef/eval.hpp"
#include "lef/knn.hpp"
#include "lef/methods.hpp"
#include "lef/scores.hpp"
#include "lef/similarity.hpp"

namespace lef::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Thrown for problems with the command line itself.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> data;
  std::vector<std::string> methods;
  std::string k = "3..100";
  std::string out = ".";
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "csv";
  bool dump_graph = false;

  // graph
  std::string kind = "umap";
  bool normalized = false;

  // synth
  std::string generator = "gaussian";
  std::size_t m = 50;
  std::size_t dims = 2;
  double offset = 10.0;
  std::size_t inliers = 500;
  std::size_t outliers = 50;
};

std::string sanitize(std::string_view name) {
  std::string out(name);
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return out;
}

std::vector<Method> resolve_methods(const std::vector<std::string>& names) {
  if (names.empty()) throw UsageError("no --method given; registered: " + registered_method_names());
  std::vector<Method> methods;
  for (const auto& name : names) {
    const auto m = parse_method(name);
    if (!m) {
      throw UsageError("unknown method '" + name + "'; registered: " + registered_method_names());
    }
    methods.push_back(*m);
  }
  return methods;
}

std::vector<std::size_t> resolve_k(const std::string& text) {
  try {
    return parse_k_list(text);
  } catch (const ContractViolation& e) {
    throw UsageError(std::string("--k: ") + e.what());
  }
}

std::size_t resolve_single_k(const std::string& text) {
  const auto ks = resolve_k(text);
  if (ks.size() != 1) throw UsageError("--k must be a single value for this command");
  return ks.front();
}

LabeledDataset load_one(const std::string& path, std::ostream& err) {
  std::vector<std::string> warnings;
  LabeledDataset d = load_dataset(path, DatasetFormat::csv, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return d;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

void dump_graph_files(const fs::path& dir, const std::string& stem, const SimilarityGraph& g) {
  auto triples = open_output(dir / (stem + "_graph.txt"));
  auto sidecar = open_output(dir / (stem + "_sidecar.txt"));
  write_graph_dump(triples, sidecar, g);
}

int cmd_score(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.data.size() != 1) throw UsageError("score takes exactly one --data file");
  const auto methods = resolve_methods(config.methods);
  const std::size_t k = resolve_single_k(config.k);
  const LabeledDataset dataset = load_one(config.data.front(), err);
  if (k >= dataset.size()) {
    throw UsageError("--k " + std::to_string(k) + " needs more than " + std::to_string(k) +
                     " points; dataset has " + std::to_string(dataset.size()));
  }

  const Parallelism par{config.threads};
  const NeighborIndex index = build_neighbor_index(dataset.features, k, par);
  ScoreEngine engine(dataset.features, index, par);
  const fs::path dir(config.out);
  for (Method method : methods) {
    ScoreResult result;
    try {
      result = engine.score(method);
    } catch (const ContractViolation& e) {
      throw UsageError(e.what());
    }
    const std::string stem = std::string(method_name(method)) + "_k" + std::to_string(k);
    if (config.format == "json") {
      json doc;
      doc["dataset"] = dataset.name;
      doc["method"] = result.method;
      doc["k"] = result.k;
      doc["orientation"] = std::string(to_string(result.orientation));
      doc["values"] = result.values;
      open_output(dir / (stem + ".json")) << doc.dump(2) << '\n';
    } else {
      auto file = open_output(dir / (stem + ".csv"));
      write_scores_csv(file, result);
    }
    out << "wrote " << (dir / stem).string() << '.' << config.format << " (" << result.values.size()
        << " points)\n";
  }
  if (config.dump_graph) {
    const std::string suffix = "_k" + std::to_string(k);
    if (k >= 3) dump_graph_files(dir, "bh_sne" + suffix, engine.bh_sne_graph());
    if (k >= 2) dump_graph_files(dir, "umap" + suffix, engine.umap_graph());
  }
  return kExitOk;
}

json curves_json(const ReportCell& cell) {
  json curves = json::array();
  for (const auto& curve : cell.curves) {
    json c;
    c["trial"] = curve.trial;
    json points = json::array();
    for (const auto& p : curve.points) points.push_back({{"k", p.k}, {"auc", p.auc}});
    c["points"] = std::move(points);
    json errors = json::array();
    for (const auto& e : curve.errors) errors.push_back({{"k", e.k}, {"message", e.message}});
    c["errors"] = std::move(errors);
    curves.push_back(std::move(c));
  }
  return curves;
}

int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.data.empty()) throw UsageError("evaluate needs at least one --data file");
  const auto methods = resolve_methods(config.methods);
  const auto ks = resolve_k(config.k);
  const Parallelism par{config.threads};

  EvalReport report;
  for (const auto& path : config.data) {
    const LabeledDataset dataset = load_one(path, err);
    if (dataset.outlier_count() == 0) {
      throw ValidationError(dataset.name +
                            ": no outliers labeled, so there are no one-outlier trials");
    }
    report.merge(compare_methods(dataset, methods, ks, par));
  }

  const fs::path dir(config.out);
  if (config.format == "json") {
    json doc = json::array();
    for (const auto& cell : report.cells) {
      json c;
      c["dataset"] = cell.dataset;
      c["method"] = std::string(method_name(cell.method));
      if (cell.aggregate) {
        c["auc_max"] = cell.aggregate->auc_max_bar;
        c["auc_max_std"] = cell.aggregate->auc_max_std;
        c["auc_avg"] = cell.aggregate->auc_avg_bar;
        c["auc_avg_std"] = cell.aggregate->auc_avg_std;
      }
      if (!cell.error.empty()) c["error"] = cell.error;
      c["curves"] = curves_json(cell);
      doc.push_back(std::move(c));
    }
    open_output(dir / "report.json") << doc.dump(2) << '\n';
  } else {
    auto file = open_output(dir / "report.csv");
    write_report_csv(file, report);
  }

  bool any_failed = false;
  for (const auto& cell : report.cells) {
    const std::string stem = "plot_" + sanitize(cell.dataset) + "_" +
                             std::string(method_name(cell.method));
    auto plot = open_output(dir / (stem + ".dat"));
    write_plot_data(plot, cell.mean_curve());
    if (!cell.error.empty()) err << "warning: " << cell.dataset << '/' << method_name(cell.method)
                                 << ": " << cell.error << '\n';
    if (cell.aggregate) {
      out << cell.dataset << ' ' << method_name(cell.method) << " auc_max=" << cell.aggregate->auc_max_bar
          << " auc_avg=" << cell.aggregate->auc_avg_bar << " trials=" << cell.curves.size()
          << '\n';
    } else {
      any_failed = true;
    }
  }
  return any_failed ? kExitNumeric : kExitOk;
}

int cmd_synth(const RunConfig& config, std::ostream& out) {
  LabeledDataset dataset;
  try {
    if (config.generator == "gaussian") {
      dataset = gen_gaussian_with_planted_outlier(config.m, config.dims, config.offset, config.seed);
    } else if (config.generator == "roads") {
      dataset = concat_datasets(
          {gen_synthetic_road_rasters(RoadClass::straight_multilane, config.inliers, config.seed),
           gen_synthetic_road_rasters(RoadClass::intersection, config.outliers, config.seed + 1)},
          "roads_seed" + std::to_string(config.seed));
    } else {
      throw UsageError("unknown generator '" + config.generator + "' (gaussian, roads)");
    }
    dataset.validate();
  } catch (const ContractViolation& e) {
    throw UsageError(e.what());
  } catch (const ValidationError& e) {
    throw UsageError(std::string("generator parameters give an invalid dataset: ") + e.what());
  }
  fs::path path(config.out);
  if (fs::is_directory(path)) path /= dataset.name + ".csv";
  auto file = open_output(path);
  write_dataset_csv(file, dataset);
  out << "wrote " << path.string() << " (" << dataset.size() << " rows, " << dataset.dims()
      << " features)\n";
  return kExitOk;
}

int cmd_graph(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.data.size() != 1) throw UsageError("graph takes exactly one --data file");
  const auto kind = parse_graph_kind(config.kind);
  if (!kind) throw UsageError("unknown graph kind '" + config.kind + "' (umap, bh_sne)");
  const std::size_t k = resolve_single_k(config.k);
  const LabeledDataset dataset = load_one(config.data.front(), err);
  if (k >= dataset.size()) throw UsageError("--k must be below the number of points");

  const Parallelism par{config.threads};
  const NeighborIndex index = build_neighbor_index(dataset.features, k, par);
  SimilarityGraph graph;
  try {
    graph = *kind == GraphKind::bh_sne ? build_bh_sne_graph(index, par) : build_umap_graph(index, par);
  } catch (const ContractViolation& e) {
    throw UsageError(e.what());
  }
  if (config.normalized && *kind == GraphKind::umap) graph = normalize_umap_weights(std::move(graph));
  const std::string stem = std::string(to_string(*kind)) + "_k" + std::to_string(k);
  dump_graph_files(config.out, stem, graph);
  out << "wrote " << (fs::path(config.out) / stem).string() << "_{graph,sidecar}.txt ("
      << graph.boundary_count() << " boundary rows)\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Outlier scores on directed kNN similarity graphs", "lef"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_threads = [&](CLI::App* cmd) {
    cmd->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", config.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* score = app.add_subcommand("score", "Score every point of one dataset");
  score->add_option("--data", config.data, "Dataset CSV")->required();
  score->add_option("--method", config.methods, "Scoring method (repeatable)")->required();
  score->add_option("--k", config.k, "Neighbor count")->required();
  score->add_option("--out", config.out, "Output directory");
  score->add_flag("--dump-graph", config.dump_graph, "Also dump the similarity graphs");
  add_threads(score);
  add_format(score);

  auto* evaluate = app.add_subcommand("evaluate", "One-outlier-at-a-time ROC AUC evaluation");
  evaluate->add_option("--data", config.data, "Dataset CSV (repeatable)")->required();
  evaluate->add_option("--method", config.methods, "Scoring method (repeatable)")->required();
  evaluate->add_option("--k", config.k, "k list: 30, 5,15,40 or 3..100 (default 3..100)");
  evaluate->add_option("--out", config.out, "Output directory");
  add_threads(evaluate);
  add_format(evaluate);

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset CSV");
  synth->add_option("--generator", config.generator, "gaussian or roads");
  synth->add_option("--m", config.m, "gaussian: number of inliers");
  synth->add_option("--dims", config.dims, "gaussian: dimensions");
  synth->add_option("--offset", config.offset, "gaussian: outlier offset");
  synth->add_option("--inliers", config.inliers, "roads: straight multi-lane rasters");
  synth->add_option("--outliers", config.outliers, "roads: intersection rasters");
  synth->add_option("--seed", config.seed, "Random seed (default 0)");
  synth->add_option("--out", config.out, "Output file or directory")->required();

  auto* graph = app.add_subcommand("graph", "Dump a similarity graph as i j weight triples");
  graph->alias("dump-graph");
  graph->add_option("--data", config.data, "Dataset CSV")->required();
  graph->add_option("--kind", config.kind, "umap or bh_sne");
  graph->add_option("--k", config.k, "Neighbor count")->required();
  graph->add_option("--out", config.out, "Output directory");
  graph->add_flag("--normalized", config.normalized, "Divide umap weights by log2(k)");
  add_threads(graph);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score) return cmd_score(config, out, err);
    if (*evaluate) return cmd_evaluate(config, out, err);
    if (*synth) return cmd_synth(config, out);
    if (*graph) return cmd_graph(config, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CalibrationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace lef::cli
