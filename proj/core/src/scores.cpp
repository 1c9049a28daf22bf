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
#include "lef/scores.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "lef/error.hpp"
#include "lef/text_io.hpp"

namespace lef {

std::string_view to_string(Orientation orientation) {
  return orientation == Orientation::higher_is_outlier ? "higher_is_outlier" : "higher_is_inlier";
}

std::optional<Orientation> parse_orientation(std::string_view token) {
  token = trim(token);
  if (token == "higher_is_outlier") return Orientation::higher_is_outlier;
  if (token == "higher_is_inlier") return Orientation::higher_is_inlier;
  return std::nullopt;
}

namespace {

ScoreResult make_result(std::size_t m, Orientation orientation, std::string method,
                        std::size_t k) {
  ScoreResult r;
  r.values.assign(m, 0.0);
  r.orientation = orientation;
  r.method = std::move(method);
  r.k = k;
  return r;
}

ScoreResult product_of_complements(const SimilarityGraph& graph, std::string method) {
  const IncomingView view = sparse_incoming(graph);
  ScoreResult r = make_result(graph.size(), Orientation::higher_is_outlier, std::move(method),
                              graph.k);
  for (std::size_t i = 0; i < view.size(); ++i) {
    double product = 1.0;
    for (double w : view.weights(i)) product *= 1.0 - w;
    r.values[i] = product;
  }
  return r;
}

// Largest stored neighbor distance; stands in for the data diameter in guards.
double index_diameter(const NeighborIndex& index) {
  double diameter = 0.0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    for (double d : index.distances(i)) diameter = std::max(diameter, d);
  }
  return diameter;
}

double degenerate_floor(const NeighborIndex& index) {
  const double diameter = index_diameter(index);
  const double scale = diameter > 0.0 ? diameter : 1.0;
  return std::numeric_limits<double>::epsilon() * scale;
}

}  // namespace

ScoreResult score_lef(const SimilarityGraph& graph, const NeighborIndex& index, IncomingMode mode) {
  if (graph.kind == GraphKind::umap && !graph.normalized) {
    throw ContractViolation("LEF on umap needs weights normalized by log2(k)");
  }
  const IncomingView view = incoming_view(graph, index, mode);
  const bool sparse = mode == IncomingMode::sparse;
  std::string method = graph.kind == GraphKind::umap ? (sparse ? "uslef" : "ulef")
                                                     : (sparse ? "tslef" : "tlef");
  ScoreResult r = make_result(index.size(), Orientation::higher_is_inlier, std::move(method),
                              index.k());

  std::vector<double> incoming;
  for (std::size_t i = 0; i < view.size(); ++i) {
    incoming.clear();
    if (sparse) {
      // Only the point's own neighbors count, in K_i order; reverse neighbors
      // from outside K_i are ignored.
      for (PointId j : index.neighbors(i)) {
        const std::size_t pos = index.position(j, static_cast<PointId>(i));
        if (pos == index.k()) continue;
        const double w = graph.row_weights(j)[pos];
        if (w > 0.0) incoming.push_back(w);
      }
    } else {
      const auto weights = view.weights(i);
      incoming.assign(weights.begin(), weights.end());
    }
    double total = 0.0;
    for (double w : incoming) total += w;
    if (!(total > 0.0)) continue;
    double entropy = 0.0;
    for (double w : incoming) {
      const double p = w / total;
      if (p > 0.0) entropy -= p * std::log2(p);
    }
    r.values[i] = total / static_cast<double>(index.k()) * entropy;
  }
  return r;
}

ScoreResult score_knnsos(const SimilarityGraph& graph) {
  if (graph.kind != GraphKind::bh_sne) throw ContractViolation("KNNSOS needs a bh_sne graph");
  return product_of_complements(graph, "knnsos");
}

ScoreResult score_usos(const SimilarityGraph& graph) {
  if (graph.kind != GraphKind::umap) throw ContractViolation("USOS needs a umap graph");
  // Raw umap weights give every nearest-neighbor edge weight 1, which would
  // zero the product regardless of the other edges.
  if (!graph.normalized) throw ContractViolation("USOS needs weights normalized by log2(k)");
  return product_of_complements(graph, "usos");
}

ScoreResult score_knn(const NeighborIndex& index) {
  ScoreResult r = make_result(index.size(), Orientation::higher_is_outlier, "knn", index.k());
  for (std::size_t i = 0; i < index.size(); ++i) r.values[i] = index.distances(i).back();
  return r;
}

ScoreResult score_knnw(const NeighborIndex& index) {
  ScoreResult r = make_result(index.size(), Orientation::higher_is_outlier, "knnw", index.k());
  for (std::size_t i = 0; i < index.size(); ++i) {
    double sum = 0.0;
    for (double d : index.distances(i)) sum += d;
    r.values[i] = sum;
  }
  return r;
}

ScoreResult score_odin(const NeighborIndex& index) {
  ScoreResult r = make_result(index.size(), Orientation::higher_is_inlier, "odin", index.k());
  for (std::size_t j = 0; j < index.size(); ++j) {
    for (PointId i : index.neighbors(j)) r.values[i] += 1.0;
  }
  return r;
}

ScoreResult score_lof(const NeighborIndex& index) {
  const std::size_t m = index.size();
  const double k = static_cast<double>(index.k());
  const double sentinel = 1.0 / degenerate_floor(index);

  std::vector<double> lrd(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ids = index.neighbors(i);
    const auto dists = index.distances(i);
    double reach_sum = 0.0;
    for (std::size_t r = 0; r < ids.size(); ++r) {
      reach_sum += std::max(dists[r], index.distances(ids[r]).back());
    }
    const double mean_reach = reach_sum / k;
    lrd[i] = mean_reach > 0.0 ? 1.0 / mean_reach : sentinel;
  }

  ScoreResult r = make_result(m, Orientation::higher_is_outlier, "lof", index.k());
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    for (PointId j : index.neighbors(i)) sum += lrd[j];
    r.values[i] = sum / k / lrd[i];
  }
  return r;
}

ScoreResult score_ldof(const NeighborIndex& index, const Matrix& features) {
  if (features.rows() != index.size()) {
    throw ContractViolation("LDOF features have " + std::to_string(features.rows()) +
                            " rows, index has " + std::to_string(index.size()));
  }
  if (index.k() < 2) throw ContractViolation("LDOF needs k >= 2");
  const std::size_t k = index.k();
  const double floor = degenerate_floor(index);

  ScoreResult r = make_result(index.size(), Orientation::higher_is_outlier, "ldof", k);
  for (std::size_t i = 0; i < index.size(); ++i) {
    double outer = 0.0;
    for (double d : index.distances(i)) outer += d;
    outer /= static_cast<double>(k);

    const auto ids = index.neighbors(i);
    double inner = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (a == b) continue;
        inner += dissimilarity(features.row(ids[a]), features.row(ids[b]));
      }
    }
    inner /= static_cast<double>(k * (k - 1));
    r.values[i] = outer / std::max(inner, floor);
  }
  return r;
}

void write_scores_csv(std::ostream& out, const ScoreResult& result) {
  out << "point_id,score,orientation,method,k\n";
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    out << i << ',' << format_double(result.values[i]) << ',' << to_string(result.orientation)
        << ',' << result.method << ',' << result.k << '\n';
  }
}

ScoreResult read_scores_csv(std::istream& in) {
  ScoreResult result;
  std::string line;
  bool header = true;
  for (std::size_t line_no = 0; std::getline(in, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      if (trim(line).starts_with("point_id")) continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 5) {
      throw ParseError("line " + std::to_string(line_no + 1) + ": expected 5 fields", line_no,
                       std::string::npos);
    }
    const auto id = parse_double(fields[0]);
    const auto value = parse_double(fields[1]);
    const auto orientation = parse_orientation(fields[2]);
    const auto k = parse_double(fields[4]);
    if (!id || *id != static_cast<double>(result.values.size())) {
      throw ParseError("line " + std::to_string(line_no + 1) + ": point ids must count from 0",
                       line_no, 0);
    }
    if (!value) throw ParseError("line " + std::to_string(line_no + 1) + ": bad score", line_no, 1);
    if (!orientation) {
      throw ParseError("line " + std::to_string(line_no + 1) + ": bad orientation", line_no, 2);
    }
    if (!k || *k < 0.0) throw ParseError("line " + std::to_string(line_no + 1) + ": bad k", line_no, 4);
    result.values.push_back(*value);
    result.orientation = *orientation;
    result.method = std::string(trim(fields[3]));
    result.k = static_cast<std::size_t>(*k);
  }
  return result;
}

}  // namespace lef
