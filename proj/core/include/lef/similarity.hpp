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
#include <span>
#include <string_view>
#include <optional>
#include <vector>

#include "lef/knn.hpp"
#include "lef/parallel.hpp"

namespace lef {

enum class GraphKind : std::uint8_t { bh_sne, umap };

std::string_view to_string(GraphKind kind);
std::optional<GraphKind> parse_graph_kind(std::string_view token);

/// Outcome of the per-point bandwidth search.
enum class CalibrationStatus : std::uint8_t {
  converged,
  boundary_low,    // target unreachable, stopped at the smallest sigma
  boundary_high,   // target unreachable, stopped at the largest sigma
  max_iterations,  // bracketed but the residual never fell below tolerance
};

std::string_view to_string(CalibrationStatus status);

// Search protocol shared by both kernels.
inline constexpr int kMaxBracketSteps = 64;
inline constexpr int kMaxBisections = 100;
inline constexpr double kUmapSumTolerance = 1e-5;
inline constexpr double kPerplexityRelTolerance = 1e-5;
inline constexpr double kMinExpArgument = -745.0;

/// Unnormalized Gaussian affinity exp(-(d^2 - shift) / (2 sigma^2)), exponent
/// clamped to [-745, 0]. shift is the row's smallest squared distance, which
/// cancels in the normalized weights.
double bh_sne_kernel(double squared_distance, double shift, double sigma);

/// exp(-max(0, d - rho) / sigma), exponent clamped to [-745, 0].
double umap_kernel(double distance, double rho, double sigma);

struct BhSneRow {
  double sigma = 1.0;
  double shift = 0.0;       // smallest squared distance of the row
  double normalizer = 1.0;  // sum of bh_sne_kernel over the row
  double perplexity = 0.0;  // 2^H of the emitted weights
  std::vector<double> weights;
  CalibrationStatus status = CalibrationStatus::converged;
};

/// Finds sigma so the row's perplexity matches \p perplexity.
/// Requires k >= 2, 1 <= perplexity <= k and a strictly positive entry.
BhSneRow calibrate_bh_sne_row(std::span<const double> squared_distances, double perplexity);

struct UmapRow {
  double rho = 0.0;
  double sigma = 1.0;
  double sum = 0.0;
  std::vector<double> weights;
  CalibrationStatus status = CalibrationStatus::converged;
};

/// Finds sigma so the row weights sum to log2(k). Distances must be ascending.
UmapRow calibrate_umap_row(std::span<const double> distances, std::size_t k);

/// Directed kNN similarity graph. Row i is stored aligned with K_i: the j-th
/// weight belongs to the j-th neighbor of i.
struct SimilarityGraph {
  GraphKind kind = GraphKind::umap;
  std::size_t k = 0;
  bool normalized = false;  // umap weights divided by log2(k)
  double perplexity = 0.0;  // bh_sne target, k / 3

  std::vector<PointId> targets;
  std::vector<double> weights;

  // Per-point calibration. rho is all zeros and normalizer all ones for the
  // kinds that do not use them.
  std::vector<double> sigma;
  std::vector<double> rho;
  std::vector<double> shift;
  std::vector<double> normalizer;
  std::vector<CalibrationStatus> status;

  std::size_t size() const noexcept { return k == 0 ? 0 : targets.size() / k; }
  std::span<const PointId> row_targets(std::size_t i) const {
    return {targets.data() + i * k, k};
  }
  std::span<const double> row_weights(std::size_t i) const {
    return {weights.data() + i * k, k};
  }
  bool has_calibration() const noexcept { return sigma.size() == size() && size() > 0; }
  bool boundary(std::size_t i) const { return status[i] != CalibrationStatus::converged; }
  std::size_t boundary_count() const;
};

/// Gaussian affinities with perplexity k / 3. Requires index.k() >= 3.
SimilarityGraph build_bh_sne_graph(const NeighborIndex& index, Parallelism parallelism = {});

/// Local-connectivity affinities with row sums log2(k). Requires index.k() >= 2.
SimilarityGraph build_umap_graph(const NeighborIndex& index, Parallelism parallelism = {});

/// Divides every umap weight by log2(k) so rows sum to one.
SimilarityGraph normalize_umap_weights(SimilarityGraph graph);

enum class IncomingMode : std::uint8_t { sparse, nonsparse };

/// Incoming similarities per point as (source, weight) pairs.
///
/// sparse: every stored edge j -> i, sources ascending.
/// nonsparse: one pair per j in K_i (in K_i order), the weight evaluated with
/// j's calibrated kernel at d(j, i) even when i is not a neighbor of j.
class IncomingView {
 public:
  IncomingView(IncomingMode mode, std::vector<std::size_t> offsets,
               std::vector<PointId> sources, std::vector<double> weights);

  IncomingMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::span<const PointId> sources(std::size_t i) const {
    return {sources_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> weights(std::size_t i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

 private:
  IncomingMode mode_;
  std::vector<std::size_t> offsets_;
  std::vector<PointId> sources_;
  std::vector<double> weights_;
};

/// Transpose of the stored rows.
IncomingView sparse_incoming(const SimilarityGraph& graph);

IncomingView incoming_view(const SimilarityGraph& graph, const NeighborIndex& index,
                           IncomingMode mode);

/// Weight of the edge source -> target under the source's calibration, given
/// their distance. Used for the nonsparse view.
double evaluate_edge(const SimilarityGraph& graph, std::size_t source, double distance);

/// Triples "i j weight", one line per stored edge, plus a sidecar with one
/// "i sigma rho shift normalizer status" line per point. Both files start with
/// '#' comment lines; the first triples comment records kind, k and
/// normalization.
void write_graph_dump(std::ostream& triples, std::ostream& sidecar, const SimilarityGraph& graph);

struct GraphTriple {
  std::size_t source;
  std::size_t target;
  double weight;
};

struct GraphSidecarRow {
  std::size_t point;
  double sigma;
  double rho;
  double shift;
  double normalizer;
  CalibrationStatus status;
};

struct GraphDump {
  GraphKind kind = GraphKind::umap;
  std::size_t k = 0;
  bool normalized = false;
  std::vector<GraphTriple> triples;
  std::vector<GraphSidecarRow> sidecar;
};

GraphDump read_graph_dump(std::istream& triples, std::istream& sidecar);

}  // namespace lef
