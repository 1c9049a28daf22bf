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
#include "lef/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "lef/error.hpp"

namespace lef {

double squared_dissimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ContractViolation("dissimilarity of vectors with lengths " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  // Left to right; (a-b)^2 == (b-a)^2 keeps this bitwise symmetric.
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double diff = a[c] - b[c];
    sum += diff * diff;
  }
  return sum;
}

double dissimilarity(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_dissimilarity(a, b));
}

NeighborIndex::NeighborIndex(std::size_t points, std::size_t k, std::vector<PointId> ids,
                             std::vector<double> distances)
    : points_(points), k_(k), ids_(std::move(ids)), distances_(std::move(distances)) {
  if (ids_.size() != points_ * k_ || distances_.size() != points_ * k_) {
    throw ContractViolation("neighbor index arrays do not match points * k");
  }
}

std::size_t NeighborIndex::position(std::size_t i, PointId j) const {
  const auto row = neighbors(i);
  const auto it = std::ranges::find(row, j);
  return static_cast<std::size_t>(it - row.begin());
}

NeighborIndex NeighborIndex::truncated(std::size_t k) const {
  if (k < 1 || k > k_) {
    throw ContractViolation("cannot truncate a k=" + std::to_string(k_) + " index to k=" +
                            std::to_string(k));
  }
  std::vector<PointId> ids(points_ * k);
  std::vector<double> dists(points_ * k);
  for (std::size_t i = 0; i < points_; ++i) {
    std::copy_n(ids_.begin() + static_cast<std::ptrdiff_t>(i * k_), k,
                ids.begin() + static_cast<std::ptrdiff_t>(i * k));
    std::copy_n(distances_.begin() + static_cast<std::ptrdiff_t>(i * k_), k,
                dists.begin() + static_cast<std::ptrdiff_t>(i * k));
  }
  return NeighborIndex(points_, k, std::move(ids), std::move(dists));
}

namespace {

// Strict upper triangle of the squared distance matrix, row-major.
class PairwiseCache {
 public:
  PairwiseCache(const Matrix& features, Parallelism parallelism)
      : m_(features.rows()), values_(m_ * (m_ - 1) / 2) {
    parallel_for(m_, parallelism, [&](std::size_t i) {
      const auto xi = features.row(i);
      const std::size_t base = offset(i);
      for (std::size_t j = i + 1; j < m_; ++j) {
        values_[base + (j - i - 1)] = squared_dissimilarity(xi, features.row(j));
      }
    });
  }

  double squared(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return values_[offset(i) + (j - i - 1)];
  }

 private:
  std::size_t offset(std::size_t i) const { return i * (2 * m_ - i - 1) / 2; }

  std::size_t m_;
  std::vector<double> values_;
};

}  // namespace

NeighborIndex build_neighbor_index(const Matrix& features, std::size_t k, Parallelism parallelism) {
  const std::size_t m = features.rows();
  if (k < 1 || k >= m) {
    throw ContractViolation("k=" + std::to_string(k) + " must satisfy 1 <= k <= M-1 with M=" +
                            std::to_string(m));
  }
  if (m > std::numeric_limits<PointId>::max()) {
    throw ContractViolation("too many points for 32-bit point ids");
  }

  const PairwiseCache cache(features, parallelism);
  std::vector<PointId> ids(m * k);
  std::vector<double> dists(m * k);

  parallel_for(m, parallelism, [&](std::size_t i) {
    std::vector<std::pair<double, PointId>> candidates;
    candidates.reserve(m - 1);
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      candidates.emplace_back(std::sqrt(cache.squared(i, j)), static_cast<PointId>(j));
    }
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                      candidates.end());
    for (std::size_t r = 0; r < k; ++r) {
      dists[i * k + r] = candidates[r].first;
      ids[i * k + r] = candidates[r].second;
    }
  });
  return NeighborIndex(m, k, std::move(ids), std::move(dists));
}

}  // namespace lef
