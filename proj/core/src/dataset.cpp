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
#include "lef/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "lef/error.hpp"
#include "lef/text_io.hpp"

namespace lef {

std::optional<Label> parse_label(std::string_view token) {
  token = trim(token);
  if (iequals(token, "inlier")) return Label::inlier;
  if (iequals(token, "outlier")) return Label::outlier;
  return std::nullopt;
}

std::string_view to_string(Label label) {
  return label == Label::inlier ? "inlier" : "outlier";
}

std::size_t LabeledDataset::outlier_count() const {
  return static_cast<std::size_t>(std::ranges::count(labels, Label::outlier));
}

void LabeledDataset::validate() const {
  const std::size_t m = features.rows();
  if (labels.size() != m) {
    throw ValidationError(name + ": " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(m) + " rows");
  }
  if (m < 2) throw ValidationError(name + ": need at least 2 points, got " + std::to_string(m));
  if (features.cols() < 1) throw ValidationError(name + ": need at least 1 feature column");
  for (std::size_t i = 0; i < m; ++i) {
    for (double v : features.row(i)) {
      if (!std::isfinite(v)) {
        throw ValidationError(name + ": row " + std::to_string(i) + " has a non-finite entry");
      }
    }
  }
  if (inlier_count() == 0) throw ValidationError(name + ": no inliers");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row_less = [this](std::size_t a, std::size_t b) {
    const auto ra = features.row(a);
    const auto rb = features.row(b);
    if (std::ranges::lexicographical_compare(ra, rb)) return true;
    if (std::ranges::lexicographical_compare(rb, ra)) return false;
    return a < b;
  };
  std::ranges::sort(order, row_less);
  for (std::size_t t = 1; t < m; ++t) {
    if (std::ranges::equal(features.row(order[t - 1]), features.row(order[t]))) {
      throw ValidationError(name + ": rows " + std::to_string(order[t - 1]) + " and " +
                            std::to_string(order[t]) + " are identical");
    }
  }
}

std::string OutlierTrial::id() const { return source + "#" + std::to_string(ordinal); }

LabeledDataset parse_dataset_csv(std::istream& in, std::string name,
                                 std::vector<std::string>* warnings) {
  LabeledDataset dataset;
  dataset.name = std::move(name);
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected_fields = 0;
  bool first = true;
  std::vector<double> values;

  for (; std::getline(in, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');

    if (first) {
      first = false;
      const auto last = fields.back();
      if (!parse_label(last) && !parse_double(last)) continue;  // header row
    }
    if (fields.size() < 2) {
      throw ParseError("line " + std::to_string(line_no + 1) +
                           ": expected at least one feature and a label",
                       line_no, std::string::npos);
    }
    if (expected_fields == 0) expected_fields = fields.size();
    if (fields.size() != expected_fields) {
      throw ParseError("line " + std::to_string(line_no + 1) + ": expected " +
                           std::to_string(expected_fields) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no, std::string::npos);
    }

    values.clear();
    for (std::size_t c = 0; c + 1 < fields.size(); ++c) {
      const auto v = parse_double(fields[c]);
      if (!v) {
        throw ParseError("line " + std::to_string(line_no + 1) + ", column " +
                             std::to_string(c + 1) + ": '" + std::string(trim(fields[c])) +
                             "' is not a finite number",
                         line_no, c);
      }
      values.push_back(*v);
    }
    const auto label = parse_label(fields.back());
    if (!label) {
      throw ParseError("line " + std::to_string(line_no + 1) + ", column " +
                           std::to_string(fields.size()) + ": '" +
                           std::string(trim(fields.back())) +
                           "' is not a label (inlier/outlier)",
                       line_no, fields.size() - 1);
    }
    dataset.features.append_row(values);
    dataset.labels.push_back(*label);
  }

  dataset.validate();
  if (dataset.outlier_count() == 0 && warnings != nullptr) {
    warnings->push_back(dataset.name + ": no outliers labeled; evaluation will have no trials");
  }
  return dataset;
}

LabeledDataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                            std::vector<std::string>* warnings) {
  if (format != DatasetFormat::csv) throw ContractViolation("unsupported dataset format");
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset file " + path.string());
  return parse_dataset_csv(in, path.stem().string(), warnings);
}

void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset) {
  for (std::size_t c = 0; c < dataset.dims(); ++c) out << 'f' << c << ',';
  out << "label\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (double v : dataset.features.row(i)) out << format_double(v) << ',';
    out << to_string(dataset.labels[i]) << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const LabeledDataset& dataset) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write dataset file " + path.string());
  write_dataset_csv(out, dataset);
}

std::vector<OutlierTrial> make_outlier_trials(const LabeledDataset& dataset) {
  std::vector<OutlierTrial> trials;
  const std::size_t outliers = dataset.outlier_count();
  if (outliers == 0) return trials;
  if (dataset.inlier_count() < 2) {
    throw ContractViolation(dataset.name + ": one-outlier trials need at least 2 inliers");
  }

  std::vector<std::size_t> rows;
  rows.reserve(dataset.inlier_count() + 1);
  std::size_t ordinal = 0;
  for (std::size_t o = 0; o < dataset.size(); ++o) {
    if (dataset.labels[o] != Label::outlier) continue;
    rows.clear();
    std::size_t outlier_position = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (i == o) {
        outlier_position = rows.size();
        rows.push_back(i);
      } else if (dataset.labels[i] == Label::inlier) {
        rows.push_back(i);
      }
    }
    OutlierTrial trial;
    trial.features = dataset.features.select_rows(rows);
    trial.outlier_index = outlier_position;
    trial.source = dataset.name;
    trial.ordinal = ++ordinal;
    trials.push_back(std::move(trial));
  }
  return trials;
}

LabeledDataset concat_datasets(const std::vector<LabeledDataset>& parts, std::string name) {
  LabeledDataset out;
  out.name = std::move(name);
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < part.size(); ++i) {
      out.features.append_row(part.features.row(i));
      out.labels.push_back(part.labels[i]);
    }
  }
  return out;
}

LabeledDataset gen_gaussian_with_planted_outlier(std::size_t m_inliers, std::size_t n_dims,
                                                 double offset, std::uint64_t seed) {
  if (m_inliers < 5) throw ContractViolation("gaussian fixture needs at least 5 inliers");
  if (n_dims < 1) throw ContractViolation("gaussian fixture needs at least 1 dimension");
  if (!(offset > 0.0)) throw ContractViolation("gaussian fixture needs offset > 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  LabeledDataset dataset;
  dataset.name = "gaussian_m" + std::to_string(m_inliers) + "_n" + std::to_string(n_dims) +
                 "_seed" + std::to_string(seed);
  std::vector<double> row(n_dims);
  std::vector<double> mean(n_dims, 0.0);
  for (std::size_t i = 0; i < m_inliers; ++i) {
    for (std::size_t c = 0; c < n_dims; ++c) {
      row[c] = normal(rng);
      mean[c] += row[c];
    }
    dataset.features.append_row(row);
    dataset.labels.push_back(Label::inlier);
  }
  for (double& c : mean) c /= static_cast<double>(m_inliers);
  mean[0] += offset;
  dataset.features.append_row(mean);
  dataset.labels.push_back(Label::outlier);
  return dataset;
}

}  // namespace lef
