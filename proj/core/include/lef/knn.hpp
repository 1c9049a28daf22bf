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
#include <span>
#include <vector>

#include "lef/matrix.hpp"
#include "lef/parallel.hpp"

namespace lef {

using PointId = std::uint32_t;

/// Sum of squared coordinate differences. Bitwise symmetric in (a, b).
double squared_dissimilarity(std::span<const double> a, std::span<const double> b);

/// Euclidean distance, sqrt of squared_dissimilarity.
double dissimilarity(std::span<const double> a, std::span<const double> b);

/// The k nearest neighbors of every point, sorted by ascending distance with
/// ties broken by ascending id. A point is never its own neighbor.
class NeighborIndex {
 public:
  NeighborIndex() = default;
  NeighborIndex(std::size_t points, std::size_t k, std::vector<PointId> ids,
                std::vector<double> distances);

  std::size_t size() const noexcept { return points_; }
  std::size_t k() const noexcept { return k_; }

  std::span<const PointId> neighbors(std::size_t i) const {
    return {ids_.data() + i * k_, k_};
  }
  std::span<const double> distances(std::size_t i) const {
    return {distances_.data() + i * k_, k_};
  }

  /// Position of j in i's neighbor list, or k() if absent.
  std::size_t position(std::size_t i, PointId j) const;
  bool contains(std::size_t i, PointId j) const { return position(i, j) != k_; }

  /// The index for a smaller k; prefixes of sorted lists are exact.
  NeighborIndex truncated(std::size_t k) const;

  friend bool operator==(const NeighborIndex&, const NeighborIndex&) = default;

 private:
  std::size_t points_ = 0;
  std::size_t k_ = 0;
  std::vector<PointId> ids_;
  std::vector<double> distances_;
};

/// Exact brute-force kNN. Requires 1 <= k <= rows - 1.
NeighborIndex build_neighbor_index(const Matrix& features, std::size_t k,
                                   Parallelism parallelism = {});

}  // namespace lef
