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
#include "lef/methods.hpp"

#include <array>
#include <string>

#include "lef/error.hpp"
#include "lef/text_io.hpp"

namespace lef {
namespace {

constexpr std::array kMethods = {
    Method::ulef, Method::uslef, Method::usos, Method::tlef, Method::tslef, Method::knnsos,
    Method::knn,  Method::knnw,  Method::odin, Method::lof,  Method::ldof,
};

}  // namespace

std::span<const Method> all_methods() { return kMethods; }

std::string_view method_name(Method method) {
  switch (method) {
    case Method::ulef: return "ulef";
    case Method::uslef: return "uslef";
    case Method::usos: return "usos";
    case Method::tlef: return "tlef";
    case Method::tslef: return "tslef";
    case Method::knnsos: return "knnsos";
    case Method::knn: return "knn";
    case Method::knnw: return "knnw";
    case Method::odin: return "odin";
    case Method::lof: return "lof";
    case Method::ldof: return "ldof";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  name = trim(name);
  for (Method m : kMethods) {
    if (iequals(name, method_name(m))) return m;
  }
  return std::nullopt;
}

std::string registered_method_names() {
  std::string out;
  for (Method m : kMethods) {
    if (!out.empty()) out += ", ";
    out += method_name(m);
  }
  return out;
}

std::size_t min_k(Method method) {
  switch (method) {
    case Method::tlef:
    case Method::tslef:
    case Method::knnsos:
      return 3;
    case Method::ulef:
    case Method::uslef:
    case Method::usos:
    case Method::ldof:
      return 2;
    default:
      return 1;
  }
}

Orientation orientation(Method method) {
  switch (method) {
    case Method::ulef:
    case Method::uslef:
    case Method::tlef:
    case Method::tslef:
    case Method::odin:
      return Orientation::higher_is_inlier;
    default:
      return Orientation::higher_is_outlier;
  }
}

ScoreEngine::ScoreEngine(const Matrix& features, const NeighborIndex& index,
                         Parallelism parallelism)
    : features_(features), index_(index), parallelism_(parallelism) {
  if (features.rows() != index.size()) {
    throw ContractViolation("features and neighbor index disagree on the number of points");
  }
}

const SimilarityGraph& ScoreEngine::bh_sne_graph() {
  if (!bh_sne_) bh_sne_ = build_bh_sne_graph(index_, parallelism_);
  return *bh_sne_;
}

const SimilarityGraph& ScoreEngine::umap_graph() {
  if (!umap_) umap_ = normalize_umap_weights(build_umap_graph(index_, parallelism_));
  return *umap_;
}

ScoreResult ScoreEngine::score(Method method) {
  if (index_.k() < min_k(method)) {
    throw ContractViolation(std::string(method_name(method)) + " needs k >= " +
                            std::to_string(min_k(method)) + ", got k=" +
                            std::to_string(index_.k()));
  }
  switch (method) {
    case Method::ulef: return score_lef(umap_graph(), index_, IncomingMode::nonsparse);
    case Method::uslef: return score_lef(umap_graph(), index_, IncomingMode::sparse);
    case Method::usos: return score_usos(umap_graph());
    case Method::tlef: return score_lef(bh_sne_graph(), index_, IncomingMode::nonsparse);
    case Method::tslef: return score_lef(bh_sne_graph(), index_, IncomingMode::sparse);
    case Method::knnsos: return score_knnsos(bh_sne_graph());
    case Method::knn: return score_knn(index_);
    case Method::knnw: return score_knnw(index_);
    case Method::odin: return score_odin(index_);
    case Method::lof: return score_lof(index_);
    case Method::ldof: return score_ldof(index_, features_);
  }
  throw ContractViolation("unknown method");
}

ScoreResult compute_score(Method method, const Matrix& features, std::size_t k,
                          Parallelism parallelism) {
  const NeighborIndex index = build_neighbor_index(features, k, parallelism);
  ScoreEngine engine(features, index, parallelism);
  return engine.score(method);
}

}  // namespace lef
