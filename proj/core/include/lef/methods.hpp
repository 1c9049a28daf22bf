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
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lef/knn.hpp"
#include "lef/matrix.hpp"
#include "lef/parallel.hpp"
#include "lef/scores.hpp"
#include "lef/similarity.hpp"

namespace lef {

/// Registered scoring methods, in report order.
enum class Method : std::uint8_t {
  ulef,
  uslef,
  usos,
  tlef,
  tslef,
  knnsos,
  knn,
  knnw,
  odin,
  lof,
  ldof,
};

std::span<const Method> all_methods();
std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);
/// Comma-separated list of every registered name.
std::string registered_method_names();

/// Smallest k the method accepts (3 for the bh_sne family, so u = k/3 >= 1).
std::size_t min_k(Method method);
Orientation orientation(Method method);

/// Scores every method on one (features, index) pair, building each similarity
/// graph at most once.
class ScoreEngine {
 public:
  ScoreEngine(const Matrix& features, const NeighborIndex& index, Parallelism parallelism = {});

  ScoreResult score(Method method);

  const SimilarityGraph& bh_sne_graph();
  const SimilarityGraph& umap_graph();  // normalized

 private:
  const Matrix& features_;
  const NeighborIndex& index_;
  Parallelism parallelism_;
  std::optional<SimilarityGraph> bh_sne_;
  std::optional<SimilarityGraph> umap_;
};

/// Builds the index for k and scores one method.
ScoreResult compute_score(Method method, const Matrix& features, std::size_t k,
                          Parallelism parallelism = {});

}  // namespace lef
