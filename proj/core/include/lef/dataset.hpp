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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lef/matrix.hpp"

namespace lef {

enum class Label : std::uint8_t { inlier, outlier };

/// Case-insensitive "inlier" / "outlier".
std::optional<Label> parse_label(std::string_view token);
std::string_view to_string(Label label);

/// Feature vectors plus ground-truth labels. Labels are only ever consumed by
/// the evaluator, never by a score.
struct LabeledDataset {
  Matrix features;
  std::vector<Label> labels;
  std::string name;

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t dims() const noexcept { return features.cols(); }
  std::size_t outlier_count() const;
  std::size_t inlier_count() const { return size() - outlier_count(); }

  /// Throws ValidationError unless M >= 2, N >= 1, every entry is finite,
  /// there is at least one inlier and no two rows are identical.
  void validate() const;
};

/// All inliers of a dataset plus exactly one of its outliers, in source order.
struct OutlierTrial {
  Matrix features;
  std::size_t outlier_index = 0;
  std::string source;
  std::size_t ordinal = 0;

  std::string id() const;
};

enum class DatasetFormat { csv };

/// Reads a comma-separated file whose last column holds inlier/outlier tokens.
/// A header row is detected when the last field of the first line is neither a
/// label token nor a number. Warnings (e.g. no outliers) are appended to
/// \p warnings when given.
LabeledDataset load_dataset(const std::filesystem::path& path,
                            DatasetFormat format = DatasetFormat::csv,
                            std::vector<std::string>* warnings = nullptr);

LabeledDataset parse_dataset_csv(std::istream& in, std::string name,
                                 std::vector<std::string>* warnings = nullptr);

/// Writes the load_dataset format with a header row and round-trip exact values.
void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset);
void save_dataset(const std::filesystem::path& path, const LabeledDataset& dataset);

/// One trial per outlier, ordered by the outlier's position in the dataset.
/// Each trial keeps the dataset's row order with the other outliers removed.
std::vector<OutlierTrial> make_outlier_trials(const LabeledDataset& dataset);

/// Concatenates rows of several datasets with equal dimensionality.
LabeledDataset concat_datasets(const std::vector<LabeledDataset>& parts, std::string name);

/// m_inliers standard-normal points in n_dims, followed by one outlier placed
/// \p offset along the first axis from the inliers' sample mean.
LabeledDataset gen_gaussian_with_planted_outlier(std::size_t m_inliers, std::size_t n_dims,
                                                 double offset, std::uint64_t seed);

enum class RoadClass { straight_multilane, intersection };

std::optional<RoadClass> parse_road_class(std::string_view token);

inline constexpr std::size_t kRasterSide = 64;

/// Flattened 64x64 road rasters with pixel values 0 (background), 0.5 (lane
/// surface) and 1 (marking). Straight roads are labeled inlier, intersections
/// outlier.
LabeledDataset gen_synthetic_road_rasters(RoadClass road_class, std::size_t count,
                                          std::uint64_t seed);

}  // namespace lef
