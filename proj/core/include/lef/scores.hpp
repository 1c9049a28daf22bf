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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lef/knn.hpp"
#include "lef/matrix.hpp"
#include "lef/similarity.hpp"

namespace lef {

enum class Orientation : std::uint8_t { higher_is_outlier, higher_is_inlier };

std::string_view to_string(Orientation orientation);
std::optional<Orientation> parse_orientation(std::string_view token);

struct ScoreResult {
  std::vector<double> values;
  Orientation orientation = Orientation::higher_is_outlier;
  std::string method;
  std::size_t k = 0;
};

/// Weighted normalized entropy of the incoming similarities (LEF family).
///
/// For point i the incoming weights w_j are taken from its own neighbors
/// j in K_i: in sparse mode only those that link back to i, in nonsparse mode
/// all k of them. With S = sum w_j the value is (S / k) * H(w / S) in bits,
/// and 0 when S = 0. Higher means more inlying.
///
/// A normalized umap graph yields USLEF (sparse) / ULEF (nonsparse); a bh_sne
/// graph yields tSLEF / tLEF.
ScoreResult score_lef(const SimilarityGraph& graph, const NeighborIndex& index, IncomingMode mode);

/// Product of (1 - w) over every incoming bh_sne edge; 1 with no in-edges.
ScoreResult score_knnsos(const SimilarityGraph& graph);

/// KNNSOS on a normalized umap graph. Not rescaled by in-degree.
ScoreResult score_usos(const SimilarityGraph& graph);

/// Distance to the k-th neighbor.
ScoreResult score_knn(const NeighborIndex& index);
/// Sum of distances to all k neighbors.
ScoreResult score_knnw(const NeighborIndex& index);
/// In-degree of the kNN graph. Higher means more inlying.
ScoreResult score_odin(const NeighborIndex& index);
ScoreResult score_lof(const NeighborIndex& index);
/// Mean distance to the neighbors over mean pairwise distance among them.
ScoreResult score_ldof(const NeighborIndex& index, const Matrix& features);

/// "point_id,score,orientation,method,k" with a header row.
void write_scores_csv(std::ostream& out, const ScoreResult& result);
ScoreResult read_scores_csv(std::istream& in);

}  // namespace lef
