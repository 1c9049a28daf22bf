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
#include "lef/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lef/error.hpp"
#include "lef/text_io.hpp"

namespace lef {

std::string_view to_string(GraphKind kind) {
  return kind == GraphKind::bh_sne ? "bh_sne" : "umap";
}

std::optional<GraphKind> parse_graph_kind(std::string_view token) {
  token = trim(token);
  if (iequals(token, "bh_sne") || iequals(token, "bhsne") || iequals(token, "tsne")) {
    return GraphKind::bh_sne;
  }
  if (iequals(token, "umap")) return GraphKind::umap;
  return std::nullopt;
}

std::string_view to_string(CalibrationStatus status) {
  switch (status) {
    case CalibrationStatus::converged: return "converged";
    case CalibrationStatus::boundary_low: return "boundary_low";
    case CalibrationStatus::boundary_high: return "boundary_high";
    case CalibrationStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

namespace {

std::optional<CalibrationStatus> parse_status(std::string_view token) {
  for (auto s : {CalibrationStatus::converged, CalibrationStatus::boundary_low,
                 CalibrationStatus::boundary_high, CalibrationStatus::max_iterations}) {
    if (token == to_string(s)) return s;
  }
  return std::nullopt;
}

double clamped_exp(double argument) {
  return std::exp(std::clamp(argument, kMinExpArgument, 0.0));
}

struct SearchResult {
  double sigma;
  CalibrationStatus status;
};

// Finds sigma where residual(sigma) crosses zero; residual must be
// non-decreasing in sigma. Brackets by doubling or halving from 1 until the
// sign flips, then bisects. Any probe within tolerance ends the search.
template <class Residual>
SearchResult search_sigma(Residual&& residual, double tolerance) {
  double sigma = 1.0;
  double r = residual(sigma);
  if (std::abs(r) < tolerance) return {sigma, CalibrationStatus::converged};

  double lo = 0.0;
  double hi = 0.0;
  const bool grow = r < 0.0;
  bool straddled = false;
  for (int step = 0; step < kMaxBracketSteps; ++step) {
    const double next = grow ? sigma * 2.0 : sigma * 0.5;
    const double rn = residual(next);
    if (std::abs(rn) < tolerance) return {next, CalibrationStatus::converged};
    if ((rn > 0.0) == grow) {
      lo = grow ? sigma : next;
      hi = grow ? next : sigma;
      straddled = true;
      break;
    }
    sigma = next;
  }
  if (!straddled) {
    return {sigma, grow ? CalibrationStatus::boundary_high : CalibrationStatus::boundary_low};
  }

  double best = lo;
  double best_residual = std::abs(residual(lo));
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = lo + (hi - lo) / 2.0;
    const double rm = residual(mid);
    if (std::abs(rm) < tolerance) return {mid, CalibrationStatus::converged};
    if (std::abs(rm) < best_residual) {
      best = mid;
      best_residual = std::abs(rm);
    }
    if (rm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {best, CalibrationStatus::max_iterations};
}

double entropy_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double bh_sne_kernel(double squared_distance, double shift, double sigma) {
  return clamped_exp(-(squared_distance - shift) / (2.0 * sigma * sigma));
}

double umap_kernel(double distance, double rho, double sigma) {
  return clamped_exp(-std::max(0.0, distance - rho) / sigma);
}

BhSneRow calibrate_bh_sne_row(std::span<const double> squared_distances, double perplexity) {
  const std::size_t k = squared_distances.size();
  if (k < 2) throw ContractViolation("bh_sne calibration needs k >= 2");
  if (!(perplexity >= 1.0) || perplexity > static_cast<double>(k)) {
    throw ContractViolation("perplexity " + format_double(perplexity) + " outside [1, " +
                            std::to_string(k) + "]");
  }
  if (std::ranges::none_of(squared_distances, [](double d) { return d > 0.0; })) {
    throw ContractViolation("bh_sne calibration needs a strictly positive distance");
  }

  BhSneRow row;
  row.shift = std::ranges::min(squared_distances);
  row.weights.resize(k);

  auto fill = [&](double sigma) {
    double z = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      row.weights[j] = bh_sne_kernel(squared_distances[j], row.shift, sigma);
      z += row.weights[j];
    }
    for (double& w : row.weights) w /= z;
    return z;
  };
  auto residual = [&](double sigma) {
    fill(sigma);
    return std::exp2(entropy_bits(row.weights)) - perplexity;
  };

  const auto found = search_sigma(residual, kPerplexityRelTolerance * perplexity);
  row.sigma = found.sigma;
  row.status = found.status;
  row.normalizer = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    row.normalizer += bh_sne_kernel(squared_distances[j], row.shift, row.sigma);
  }
  for (std::size_t j = 0; j < k; ++j) {
    row.weights[j] = bh_sne_kernel(squared_distances[j], row.shift, row.sigma) / row.normalizer;
  }
  row.perplexity = std::exp2(entropy_bits(row.weights));
  return row;
}

UmapRow calibrate_umap_row(std::span<const double> distances, std::size_t k) {
  if (k < 2) throw ContractViolation("umap calibration needs k >= 2");
  if (distances.size() != k) {
    throw ContractViolation("umap calibration got " + std::to_string(distances.size()) +
                            " distances for k=" + std::to_string(k));
  }
  if (!std::ranges::is_sorted(distances)) {
    throw ContractViolation("umap calibration needs ascending distances");
  }

  UmapRow row;
  row.rho = distances[0];
  const double target = std::log2(static_cast<double>(k));
  auto sum_at = [&](double sigma) {
    double s = 0.0;
    for (double d : distances) s += umap_kernel(d, row.rho, sigma);
    return s;
  };

  const auto found = search_sigma([&](double sigma) { return sum_at(sigma) - target; },
                                  kUmapSumTolerance);
  row.sigma = found.sigma;
  row.status = found.status;
  row.weights.resize(k);
  row.sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    row.weights[j] = umap_kernel(distances[j], row.rho, row.sigma);
    row.sum += row.weights[j];
  }
  return row;
}

std::size_t SimilarityGraph::boundary_count() const {
  return static_cast<std::size_t>(
      std::ranges::count_if(status, [](CalibrationStatus s) {
        return s != CalibrationStatus::converged;
      }));
}

namespace {

SimilarityGraph empty_graph(GraphKind kind, const NeighborIndex& index) {
  SimilarityGraph g;
  const std::size_t m = index.size();
  g.kind = kind;
  g.k = index.k();
  g.targets.resize(m * g.k);
  g.weights.resize(m * g.k);
  g.sigma.assign(m, 1.0);
  g.rho.assign(m, 0.0);
  g.shift.assign(m, 0.0);
  g.normalizer.assign(m, 1.0);
  g.status.assign(m, CalibrationStatus::converged);
  for (std::size_t i = 0; i < m; ++i) {
    std::ranges::copy(index.neighbors(i), g.targets.begin() + static_cast<std::ptrdiff_t>(i * g.k));
  }
  return g;
}

}  // namespace

SimilarityGraph build_bh_sne_graph(const NeighborIndex& index, Parallelism parallelism) {
  if (index.k() < 3) {
    throw ContractViolation("bh_sne graph needs k >= 3 (perplexity k/3 >= 1), got k=" +
                            std::to_string(index.k()));
  }
  SimilarityGraph g = empty_graph(GraphKind::bh_sne, index);
  g.perplexity = static_cast<double>(index.k()) / 3.0;

  parallel_for(index.size(), parallelism, [&](std::size_t i) {
    std::vector<double> squared(g.k);
    const auto d = index.distances(i);
    for (std::size_t j = 0; j < g.k; ++j) squared[j] = d[j] * d[j];
    BhSneRow row;
    try {
      row = calibrate_bh_sne_row(squared, g.perplexity);
    } catch (const ContractViolation& e) {
      throw CalibrationError(e.what(), i);
    }
    g.sigma[i] = row.sigma;
    g.shift[i] = row.shift;
    g.normalizer[i] = row.normalizer;
    g.status[i] = row.status;
    std::ranges::copy(row.weights, g.weights.begin() + static_cast<std::ptrdiff_t>(i * g.k));
  });
  return g;
}

SimilarityGraph build_umap_graph(const NeighborIndex& index, Parallelism parallelism) {
  if (index.k() < 2) {
    throw ContractViolation("umap graph needs k >= 2, got k=" + std::to_string(index.k()));
  }
  SimilarityGraph g = empty_graph(GraphKind::umap, index);

  parallel_for(index.size(), parallelism, [&](std::size_t i) {
    UmapRow row;
    try {
      row = calibrate_umap_row(index.distances(i), g.k);
    } catch (const ContractViolation& e) {
      throw CalibrationError(e.what(), i);
    }
    g.sigma[i] = row.sigma;
    g.rho[i] = row.rho;
    g.status[i] = row.status;
    std::ranges::copy(row.weights, g.weights.begin() + static_cast<std::ptrdiff_t>(i * g.k));
  });
  return g;
}

SimilarityGraph normalize_umap_weights(SimilarityGraph graph) {
  if (graph.kind != GraphKind::umap) {
    throw ContractViolation("only umap graphs can be normalized");
  }
  if (graph.normalized) return graph;
  const double scale = std::log2(static_cast<double>(graph.k));
  for (double& w : graph.weights) w /= scale;
  graph.normalized = true;
  return graph;
}

IncomingView::IncomingView(IncomingMode mode, std::vector<std::size_t> offsets,
                           std::vector<PointId> sources, std::vector<double> weights)
    : mode_(mode),
      offsets_(std::move(offsets)),
      sources_(std::move(sources)),
      weights_(std::move(weights)) {
  if (offsets_.empty() || offsets_.back() != sources_.size() ||
      sources_.size() != weights_.size()) {
    throw ContractViolation("inconsistent incoming view arrays");
  }
}

double evaluate_edge(const SimilarityGraph& graph, std::size_t source, double distance) {
  if (!graph.has_calibration()) {
    throw ContractViolation("graph has no stored calibration");
  }
  if (graph.kind == GraphKind::bh_sne) {
    return bh_sne_kernel(distance * distance, graph.shift[source], graph.sigma[source]) /
           graph.normalizer[source];
  }
  const double raw = umap_kernel(distance, graph.rho[source], graph.sigma[source]);
  return graph.normalized ? raw / std::log2(static_cast<double>(graph.k)) : raw;
}

IncomingView sparse_incoming(const SimilarityGraph& graph) {
  const std::size_t m = graph.size();
  std::vector<std::size_t> offsets(m + 1, 0);
  for (std::size_t e = 0; e < graph.targets.size(); ++e) {
    if (graph.weights[e] > 0.0) ++offsets[graph.targets[e] + 1];
  }
  for (std::size_t i = 0; i < m; ++i) offsets[i + 1] += offsets[i];

  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<PointId> sources(offsets.back());
  std::vector<double> weights(offsets.back());
  for (std::size_t j = 0; j < m; ++j) {
    const auto targets = graph.row_targets(j);
    const auto w = graph.row_weights(j);
    for (std::size_t r = 0; r < graph.k; ++r) {
      if (!(w[r] > 0.0)) continue;
      const std::size_t slot = cursor[targets[r]]++;
      sources[slot] = static_cast<PointId>(j);
      weights[slot] = w[r];
    }
  }
  return IncomingView(IncomingMode::sparse, std::move(offsets), std::move(sources),
                      std::move(weights));
}

IncomingView incoming_view(const SimilarityGraph& graph, const NeighborIndex& index,
                           IncomingMode mode) {
  if (graph.size() != index.size() || graph.k != index.k() ||
      !std::ranges::equal(graph.targets,
                          std::span<const PointId>(index.neighbors(0).data(),
                                                   index.size() * index.k()))) {
    throw ContractViolation("graph was not built from this neighbor index");
  }
  if (mode == IncomingMode::sparse) return sparse_incoming(graph);
  if (!graph.has_calibration()) {
    throw ContractViolation("nonsparse incoming view needs a graph with stored calibration");
  }

  const std::size_t m = index.size();
  const std::size_t k = index.k();
  std::vector<std::size_t> offsets(m + 1);
  std::vector<PointId> sources(m * k);
  std::vector<double> weights(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    offsets[i] = i * k;
    const auto ids = index.neighbors(i);
    const auto dists = index.distances(i);
    for (std::size_t r = 0; r < k; ++r) {
      sources[i * k + r] = ids[r];
      weights[i * k + r] = evaluate_edge(graph, ids[r], dists[r]);
    }
  }
  offsets[m] = m * k;
  return IncomingView(IncomingMode::nonsparse, std::move(offsets), std::move(sources),
                      std::move(weights));
}

void write_graph_dump(std::ostream& triples, std::ostream& sidecar, const SimilarityGraph& graph) {
  triples << "# lef-graph kind=" << to_string(graph.kind) << " k=" << graph.k
          << " normalized=" << (graph.normalized ? 1 : 0) << " points=" << graph.size() << '\n';
  triples << "# i j weight\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto targets = graph.row_targets(i);
    const auto w = graph.row_weights(i);
    for (std::size_t r = 0; r < graph.k; ++r) {
      if (!(w[r] > 0.0)) continue;
      triples << i << ' ' << targets[r] << ' ' << format_double(w[r]) << '\n';
    }
  }
  sidecar << "# i sigma rho shift normalizer status\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    sidecar << i << ' ' << format_double(graph.sigma[i]) << ' ' << format_double(graph.rho[i])
            << ' ' << format_double(graph.shift[i]) << ' ' << format_double(graph.normalizer[i])
            << ' ' << to_string(graph.status[i]) << '\n';
  }
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::size_t parse_count(const std::string& token, std::size_t line_no) {
  const auto v = parse_double(token);
  if (!v || *v < 0.0 || *v != std::floor(*v)) {
    throw ParseError("line " + std::to_string(line_no + 1) + ": '" + token +
                         "' is not a non-negative integer",
                     line_no, std::string::npos);
  }
  return static_cast<std::size_t>(*v);
}

double parse_real(const std::string& token, std::size_t line_no, std::size_t column) {
  const auto v = parse_double(token);
  if (!v) {
    throw ParseError("line " + std::to_string(line_no + 1) + ": '" + token + "' is not a number",
                     line_no, column);
  }
  return *v;
}

void parse_graph_header(const std::string& line, GraphDump& dump) {
  for (const auto& token : tokens_of(line)) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const auto key = token.substr(0, eq);
    const auto value = token.substr(eq + 1);
    if (key == "kind") {
      if (auto kind = parse_graph_kind(value)) dump.kind = *kind;
    } else if (key == "k") {
      dump.k = parse_count(value, 0);
    } else if (key == "normalized") {
      dump.normalized = value == "1";
    }
  }
}

}  // namespace

GraphDump read_graph_dump(std::istream& triples, std::istream& sidecar) {
  GraphDump dump;
  std::string line;
  for (std::size_t line_no = 0; std::getline(triples, line); ++line_no) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (t.find("lef-graph") != std::string_view::npos) parse_graph_header(line, dump);
      continue;
    }
    const auto tokens = tokens_of(line);
    if (tokens.size() != 3) {
      throw ParseError("line " + std::to_string(line_no + 1) + ": expected 'i j weight'",
                       line_no, std::string::npos);
    }
    dump.triples.push_back({parse_count(tokens[0], line_no), parse_count(tokens[1], line_no),
                            parse_real(tokens[2], line_no, 2)});
  }
  for (std::size_t line_no = 0; std::getline(sidecar, line); ++line_no) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto tokens = tokens_of(line);
    if (tokens.size() != 6) {
      throw ParseError("line " + std::to_string(line_no + 1) +
                           ": expected 'i sigma rho shift normalizer status'",
                       line_no, std::string::npos);
    }
    const auto status = parse_status(tokens[5]);
    if (!status) {
      throw ParseError("line " + std::to_string(line_no + 1) + ": unknown status '" +
                           tokens[5] + "'",
                       line_no, 5);
    }
    dump.sidecar.push_back({parse_count(tokens[0], line_no), parse_real(tokens[1], line_no, 1),
                            parse_real(tokens[2], line_no, 2), parse_real(tokens[3], line_no, 3),
                            parse_real(tokens[4], line_no, 4), *status});
  }
  return dump;
}

}  // namespace lef
