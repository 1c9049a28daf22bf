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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lef/dataset.hpp"
#include "lef/methods.hpp"
#include "lef/parallel.hpp"
#include "lef/scores.hpp"

namespace lef {

/// Single-outlier ROC AUC: the fraction of inliers the outlier outscores,
/// exact ties counting one half. Orientation is applied here.
double auc_single_outlier(const ScoreResult& scores, std::size_t outlier_index);

struct AucPoint {
  std::size_t k;
  double auc;
  friend bool operator==(const AucPoint&, const AucPoint&) = default;
};

struct SweepError {
  std::size_t k;
  std::string message;
  friend bool operator==(const SweepError&, const SweepError&) = default;
};

struct AucCurve {
  std::string trial;
  Method method = Method::ulef;
  std::vector<AucPoint> points;  // ascending k
  std::vector<SweepError> errors;
  friend bool operator==(const AucCurve&, const AucCurve&) = default;
};

/// AUC_k for each k (strictly ascending). The neighbor index is built once
/// for the largest feasible k and truncated; graphs are rebuilt per k.
/// Infeasible k values become error entries.
AucCurve sweep_k(const OutlierTrial& trial, Method method, std::span<const std::size_t> k_values,
                 Parallelism parallelism = {});

/// One curve per method, sharing the neighbor index and graphs.
std::vector<AucCurve> sweep_k(const OutlierTrial& trial, std::span<const Method> methods,
                              std::span<const std::size_t> k_values, Parallelism parallelism = {});

struct TrialStats {
  std::string trial;
  double auc_max = 0.0;
  double auc_avg = 0.0;
};

struct DatasetAggregate {
  double auc_max_bar = 0.0;
  double auc_max_std = 0.0;  // sample std across trials
  double auc_avg_bar = 0.0;
  double auc_avg_std = 0.0;
  std::vector<TrialStats> trials;
};

/// Mean over trials of max_k and mean_k AUC_k. Curves without any point are
/// skipped; at least one curve with points is required.
DatasetAggregate aggregate_dataset(std::span<const AucCurve> curves);

struct ReportCell {
  std::string dataset;
  Method method = Method::ulef;
  std::optional<DatasetAggregate> aggregate;
  std::vector<AucCurve> curves;
  std::string error;

  /// Per-k mean AUC across trials.
  std::vector<AucPoint> mean_curve() const;
};

struct EvalReport {
  std::vector<ReportCell> cells;

  /// Orders cells by method (registry order), then dataset name.
  void sort();
  void merge(EvalReport other);
};

/// Runs every method on every one-outlier trial of the dataset. Trials are
/// distributed over workers; results do not depend on the worker count.
/// Throws ValidationError when the dataset has no outliers.
EvalReport compare_methods(const LabeledDataset& dataset, std::span<const Method> methods,
                           std::span<const std::size_t> k_values, Parallelism parallelism = {});

/// "dataset,method,auc_max,auc_max_std,auc_avg,auc_avg_std" with a header row.
void write_report_csv(std::ostream& out, const EvalReport& report);

struct ReportRow {
  std::string dataset;
  std::string method;
  double auc_max;
  double auc_max_std;
  double auc_avg;
  double auc_avg_std;
};
std::vector<ReportRow> read_report_csv(std::istream& in);

/// Whitespace-separated "k auc" lines, no header.
void write_plot_data(std::ostream& out, std::span<const AucPoint> points);
std::vector<AucPoint> read_plot_data(std::istream& in);

/// Parses "30", "5,15,40" or "3..100" into a strictly ascending list.
std::vector<std::size_t> parse_k_list(std::string_view text);

}  // namespace lef
