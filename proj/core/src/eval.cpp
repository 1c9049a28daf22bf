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
#include "lef/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lef/error.hpp"
#include "lef/knn.hpp"
#include "lef/text_io.hpp"

namespace lef {

double auc_single_outlier(const ScoreResult& scores, std::size_t outlier_index) {
  const std::size_t m = scores.values.size();
  if (outlier_index >= m) {
    throw ContractViolation("outlier index " + std::to_string(outlier_index) +
                            " out of range for " + std::to_string(m) + " scores");
  }
  if (m < 2) throw ContractViolation("AUC needs at least one inlier");
  const double sign = scores.orientation == Orientation::higher_is_inlier ? -1.0 : 1.0;
  const double outlier = sign * scores.values[outlier_index];
  double hits = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == outlier_index) continue;
    const double inlier = sign * scores.values[i];
    if (outlier > inlier) {
      hits += 1.0;
    } else if (outlier == inlier) {
      hits += 0.5;
    }
  }
  return hits / static_cast<double>(m - 1);
}

namespace {

void require_ascending(std::span<const std::size_t> k_values) {
  for (std::size_t t = 1; t < k_values.size(); ++t) {
    if (k_values[t] <= k_values[t - 1]) {
      throw ContractViolation("k values must be strictly ascending");
    }
  }
}

}  // namespace

std::vector<AucCurve> sweep_k(const OutlierTrial& trial, std::span<const Method> methods,
                              std::span<const std::size_t> k_values, Parallelism parallelism) {
  require_ascending(k_values);
  std::vector<AucCurve> curves(methods.size());
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    curves[mi].trial = trial.id();
    curves[mi].method = methods[mi];
  }
  if (methods.empty() || k_values.empty()) return curves;

  const std::size_t m = trial.features.rows();
  std::size_t k_max = 0;
  for (std::size_t k : k_values) {
    if (k >= 1 && k < m) k_max = k;
  }
  NeighborIndex full;
  if (k_max > 0) full = build_neighbor_index(trial.features, k_max, parallelism);

  for (std::size_t k : k_values) {
    if (k < 1 || k >= m) {
      const std::string msg = "k=" + std::to_string(k) + " infeasible for " +
                              std::to_string(m) + " points";
      for (auto& curve : curves) curve.errors.push_back({k, msg});
      continue;
    }
    const NeighborIndex index = k == k_max ? full : full.truncated(k);
    ScoreEngine engine(trial.features, index, parallelism);
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      try {
        const ScoreResult scores = engine.score(methods[mi]);
        curves[mi].points.push_back({k, auc_single_outlier(scores, trial.outlier_index)});
      } catch (const std::exception& e) {
        curves[mi].errors.push_back({k, e.what()});
      }
    }
  }
  return curves;
}

AucCurve sweep_k(const OutlierTrial& trial, Method method, std::span<const std::size_t> k_values,
                 Parallelism parallelism) {
  const Method methods[] = {method};
  return std::move(sweep_k(trial, methods, k_values, parallelism).front());
}

DatasetAggregate aggregate_dataset(std::span<const AucCurve> curves) {
  DatasetAggregate out;
  for (const auto& curve : curves) {
    if (curve.points.empty()) continue;
    TrialStats stats;
    stats.trial = curve.trial;
    stats.auc_max = curve.points.front().auc;
    double sum = 0.0;
    for (const auto& p : curve.points) {
      stats.auc_max = std::max(stats.auc_max, p.auc);
      sum += p.auc;
    }
    stats.auc_avg = sum / static_cast<double>(curve.points.size());
    out.trials.push_back(std::move(stats));
  }
  if (out.trials.empty()) throw ContractViolation("no AUC curve with points to aggregate");

  const double n = static_cast<double>(out.trials.size());
  for (const auto& t : out.trials) {
    out.auc_max_bar += t.auc_max;
    out.auc_avg_bar += t.auc_avg;
  }
  out.auc_max_bar /= n;
  out.auc_avg_bar /= n;
  if (out.trials.size() > 1) {
    double var_max = 0.0;
    double var_avg = 0.0;
    for (const auto& t : out.trials) {
      var_max += (t.auc_max - out.auc_max_bar) * (t.auc_max - out.auc_max_bar);
      var_avg += (t.auc_avg - out.auc_avg_bar) * (t.auc_avg - out.auc_avg_bar);
    }
    out.auc_max_std = std::sqrt(var_max / (n - 1.0));
    out.auc_avg_std = std::sqrt(var_avg / (n - 1.0));
  }
  return out;
}

std::vector<AucPoint> ReportCell::mean_curve() const {
  std::vector<AucPoint> sums;
  std::vector<std::size_t> counts;
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      auto it = std::ranges::lower_bound(sums, p.k, {}, &AucPoint::k);
      const auto pos = static_cast<std::size_t>(it - sums.begin());
      if (it == sums.end() || it->k != p.k) {
        sums.insert(it, {p.k, 0.0});
        counts.insert(counts.begin() + static_cast<std::ptrdiff_t>(pos), 0);
      }
      sums[pos].auc += p.auc;
      ++counts[pos];
    }
  }
  for (std::size_t t = 0; t < sums.size(); ++t) sums[t].auc /= static_cast<double>(counts[t]);
  return sums;
}

void EvalReport::sort() {
  std::ranges::stable_sort(cells, [](const ReportCell& a, const ReportCell& b) {
    if (a.method != b.method) return a.method < b.method;
    return a.dataset < b.dataset;
  });
}

void EvalReport::merge(EvalReport other) {
  for (auto& cell : other.cells) cells.push_back(std::move(cell));
  sort();
}

EvalReport compare_methods(const LabeledDataset& dataset, std::span<const Method> methods,
                           std::span<const std::size_t> k_values, Parallelism parallelism) {
  EvalReport report;
  if (methods.empty()) return report;
  require_ascending(k_values);

  std::vector<Method> unique(methods.begin(), methods.end());
  std::ranges::sort(unique);
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  const auto trials = make_outlier_trials(dataset);
  if (trials.empty()) {
    throw ValidationError(dataset.name + ": no outliers, so there is nothing to evaluate");
  }

  std::vector<std::vector<AucCurve>> per_trial(trials.size());
  parallel_for(trials.size(), parallelism, [&](std::size_t t) {
    per_trial[t] = sweep_k(trials[t], unique, k_values, Parallelism{1});
  });

  for (std::size_t mi = 0; mi < unique.size(); ++mi) {
    ReportCell cell;
    cell.dataset = dataset.name;
    cell.method = unique[mi];
    std::size_t failures = 0;
    for (auto& curves : per_trial) {
      AucCurve& curve = curves[mi];
      if (!curve.errors.empty()) {
        if (cell.error.empty()) {
          cell.error = curve.trial + " k=" + std::to_string(curve.errors.front().k) + ": " +
                       curve.errors.front().message;
        }
        failures += curve.errors.size();
      }
      cell.curves.push_back(std::move(curve));
    }
    if (failures > 1) cell.error += " (" + std::to_string(failures) + " failed k values in total)";
    try {
      cell.aggregate = aggregate_dataset(cell.curves);
    } catch (const ContractViolation&) {
      if (cell.error.empty()) cell.error = "no k value produced a score";
    }
    report.cells.push_back(std::move(cell));
  }
  report.sort();
  return report;
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "dataset,method,auc_max,auc_max_std,auc_avg,auc_avg_std\n";
  for (const auto& cell : report.cells) {
    if (!cell.aggregate) continue;
    const auto& a = *cell.aggregate;
    out << cell.dataset << ',' << method_name(cell.method) << ',' << format_double(a.auc_max_bar)
        << ',' << format_double(a.auc_max_std) << ',' << format_double(a.auc_avg_bar) << ','
        << format_double(a.auc_avg_std) << '\n';
  }
}

std::vector<ReportRow> read_report_csv(std::istream& in) {
  std::vector<ReportRow> rows;
  std::string line;
  bool header = true;
  for (std::size_t line_no = 0; std::getline(in, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      if (trim(line).starts_with("dataset,")) continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      throw ParseError("line " + std::to_string(line_no + 1) + ": expected 6 fields", line_no,
                       std::string::npos);
    }
    double values[4];
    for (std::size_t c = 0; c < 4; ++c) {
      const auto v = parse_double(fields[c + 2]);
      if (!v) {
        throw ParseError("line " + std::to_string(line_no + 1) + ": bad number", line_no, c + 2);
      }
      values[c] = *v;
    }
    rows.push_back({std::string(trim(fields[0])), std::string(trim(fields[1])), values[0],
                    values[1], values[2], values[3]});
  }
  return rows;
}

void write_plot_data(std::ostream& out, std::span<const AucPoint> points) {
  for (const auto& p : points) out << p.k << ' ' << format_double(p.auc) << '\n';
}

std::vector<AucPoint> read_plot_data(std::istream& in) {
  std::vector<AucPoint> points;
  std::string line;
  for (std::size_t line_no = 0; std::getline(in, line); ++line_no) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    std::string k_text;
    std::string auc_text;
    std::string extra;
    fields >> k_text >> auc_text;
    const auto k = parse_double(k_text);
    const auto auc = parse_double(auc_text);
    if (!k || *k < 1.0 || *k != std::floor(*k) || !auc || (fields >> extra)) {
      throw ParseError("line " + std::to_string(line_no + 1) + ": expected 'k auc'", line_no,
                       std::string::npos);
    }
    points.push_back({static_cast<std::size_t>(*k), *auc});
  }
  return points;
}

std::vector<std::size_t> parse_k_list(std::string_view text) {
  auto parse_count = [](std::string_view token) {
    token = trim(token);
    const auto v = parse_double(token);
    if (!v || *v < 1.0 || *v != std::floor(*v) || token.find_first_of(".eE") != token.npos) {
      throw ContractViolation("'" + std::string(token) + "' is not a positive integer k");
    }
    return static_cast<std::size_t>(*v);
  };

  std::vector<std::size_t> ks;
  text = trim(text);
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const std::size_t lo = parse_count(text.substr(0, dots));
    const std::size_t hi = parse_count(text.substr(dots + 2));
    if (hi < lo) throw ContractViolation("empty k range " + std::string(text));
    for (std::size_t k = lo; k <= hi; ++k) ks.push_back(k);
  } else {
    for (auto token : split(text, ',')) ks.push_back(parse_count(token));
  }
  for (std::size_t t = 1; t < ks.size(); ++t) {
    if (ks[t] <= ks[t - 1]) throw ContractViolation("k list must be strictly ascending");
  }
  return ks;
}

}  // namespace lef
