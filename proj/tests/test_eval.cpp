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
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lef/error.hpp"
#include "lef/eval.hpp"
#include "test_support.hpp"

namespace lef {
namespace {

ScoreResult scores(std::vector<double> v, Orientation o = Orientation::higher_is_outlier) {
  ScoreResult r;
  r.values = std::move(v);
  r.orientation = o;
  r.method = "x";
  r.k = 1;
  return r;
}

AucCurve curve(std::string trial, std::vector<AucPoint> pts) {
  AucCurve c;
  c.trial = std::move(trial);
  c.points = std::move(pts);
  return c;
}

TEST(Auc, Examples) {
  EXPECT_EQ(auc_single_outlier(scores({0.1, 0.2, 0.9, 0.3}), 2), 1.0);
  EXPECT_EQ(auc_single_outlier(scores({0.4, 0.4, 0.4, 0.4}), 0), 0.5);
  EXPECT_EQ(auc_single_outlier(scores({0.1, 0.2, 0.9, 0.3}, Orientation::higher_is_inlier), 2),
            0.0);
  EXPECT_EQ(auc_single_outlier(scores({1.0, 3.0, 2.0, 2.0, 5.0}), 2), 0.375);
  EXPECT_THROW(auc_single_outlier(scores({1.0, 2.0}), 2), ContractViolation);
}

TEST(Auc, MatchesOracleAndMonotoneInvariant) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> v(5 + rng() % 60);
    // coarse grid so ties actually happen
    for (double& x : v) x = std::round(u(rng) * 4.0) / 4.0;
    const std::size_t o = rng() % v.size();
    const double base = auc_single_outlier(scores(v), o);
    EXPECT_EQ(base, oracle::auc(v, o));
    std::vector<double> t(v.size());
    const double a = 0.5 + u(rng) * u(rng);
    for (std::size_t i = 0; i < v.size(); ++i) t[i] = std::exp(1.7 * v[i]) + std::abs(a) * v[i] * v[i] * v[i];
    EXPECT_EQ(auc_single_outlier(scores(t), o), base);
    std::vector<double> neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    EXPECT_EQ(auc_single_outlier(scores(neg, Orientation::higher_is_inlier), o), base);
  }
}

TEST(Aggregate, Examples) {
  std::vector<AucCurve> one{curve("a", {{3, 0.8}, {4, 0.8}, {5, 0.8}})};
  auto a = aggregate_dataset(one);
  EXPECT_DOUBLE_EQ(a.auc_max_bar, 0.8);
  EXPECT_DOUBLE_EQ(a.auc_avg_bar, 0.8);
  EXPECT_EQ(a.auc_max_std, 0.0);

  std::vector<AucCurve> two{curve("a", {{3, 1.0}, {4, 0.6}}), curve("b", {{3, 0.8}, {4, 0.8}})};
  auto b = aggregate_dataset(two);
  EXPECT_DOUBLE_EQ(b.auc_max_bar, 0.9);
  EXPECT_DOUBLE_EQ(b.auc_avg_bar, 0.8);
  EXPECT_NEAR(b.auc_max_std, std::sqrt(0.02), 1e-15);  // sample std of {1.0, 0.8}
  EXPECT_EQ(b.trials.size(), 2u);
  EXPECT_GE(b.auc_max_bar, b.auc_avg_bar);

  EXPECT_THROW(aggregate_dataset(std::span<const AucCurve>{}), ContractViolation);
  std::vector<AucCurve> empty{curve("a", {})};
  EXPECT_THROW(aggregate_dataset(empty), ContractViolation);
}

TEST(Aggregate, DivisorIsSweptKCount) {
  auto ks = parse_k_list("3..100");
  EXPECT_EQ(ks.size(), 98u);
  std::vector<AucPoint> pts;
  for (std::size_t k : ks) pts.push_back({k, k == 3 ? 1.0 : 0.0});
  std::vector<AucCurve> c{curve("a", pts)};
  EXPECT_DOUBLE_EQ(aggregate_dataset(c).auc_avg_bar, 1.0 / 98.0);
}

TEST(KList, Parse) {
  EXPECT_EQ(parse_k_list("30"), (std::vector<std::size_t>{30}));
  EXPECT_EQ(parse_k_list("5,15,40,60,80,100").size(), 6u);
  EXPECT_EQ(parse_k_list("3..5"), (std::vector<std::size_t>{3, 4, 5}));
  for (auto bad : {"", "0", "5,3", "a", "3..", "5..3", "2.5", "4,4"}) {
    EXPECT_THROW(parse_k_list(bad), ContractViolation) << bad;
  }
}

class FixtureTrial : public ::testing::Test {
 protected:
  void SetUp() override {
    data = gen_gaussian_with_planted_outlier(50, 2, 10.0, 0);
    trial = make_outlier_trials(data).front();
  }
  LabeledDataset data;
  OutlierTrial trial;
};

TEST_F(FixtureTrial, UlefSweepIsPerfect) {
  auto ks = parse_k_list("3..20");
  auto c = sweep_k(trial, Method::ulef, ks);
  ASSERT_EQ(c.points.size(), 18u);
  EXPECT_TRUE(c.errors.empty());
  for (const auto& p : c.points) EXPECT_EQ(p.auc, 1.0) << "k=" << p.k;
}

TEST_F(FixtureTrial, OppositeOrientationsBothPerfect) {
  const std::size_t ks[] = {5, 10, 15};
  for (Method m : {Method::knn, Method::ulef, Method::lof}) {
    auto c = sweep_k(trial, m, ks);
    for (const auto& p : c.points) EXPECT_EQ(p.auc, 1.0) << method_name(m) << " k=" << p.k;
  }
}

TEST_F(FixtureTrial, SweepShapesAndErrors) {
  const std::size_t six[] = {5, 15, 40, 60, 80, 100};
  auto c = sweep_k(trial, Method::knn, six);
  EXPECT_EQ(c.points.size(), 3u);  // 51 points: k >= 51 infeasible
  EXPECT_EQ(c.errors.size(), 3u);
  EXPECT_EQ(c.errors.front().k, 60u);
  const std::size_t low[] = {2, 3};
  auto t = sweep_k(trial, Method::tlef, low);
  ASSERT_EQ(t.errors.size(), 1u);
  EXPECT_EQ(t.errors.front().k, 2u);
  EXPECT_EQ(t.points.size(), 1u);
  const std::size_t unsorted[] = {5, 4};
  EXPECT_THROW(sweep_k(trial, Method::knn, unsorted), ContractViolation);
}

TEST_F(FixtureTrial, SweepMatchesDirectScoring) {
  const std::size_t ks[] = {4, 9};
  auto methods = all_methods();
  auto curves = sweep_k(trial, methods, ks);
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t t = 0; t < 2; ++t) {
      auto direct = compute_score(methods[mi], trial.features, ks[t]);
      EXPECT_EQ(curves[mi].points[t].auc, auc_single_outlier(direct, trial.outlier_index));
    }
  }
}

TEST_F(FixtureTrial, Deterministic) {
  const std::size_t ks[] = {3, 7, 12};
  auto methods = all_methods();
  EXPECT_EQ(sweep_k(trial, methods, ks, Parallelism{1}), sweep_k(trial, methods, ks, Parallelism{4}));
}

TEST(Compare, ShapeAndOrder) {
  auto d = gen_gaussian_with_planted_outlier(30, 2, 6.0, 9);
  d.labels[4] = Label::outlier;
  const Method methods[] = {Method::lof, Method::ulef, Method::lof};
  const std::size_t ks[] = {3, 5, 8};
  auto report = compare_methods(d, methods, ks);
  ASSERT_EQ(report.cells.size(), 2u);
  EXPECT_EQ(report.cells[0].method, Method::ulef);
  EXPECT_EQ(report.cells[1].method, Method::lof);
  for (const auto& cell : report.cells) {
    ASSERT_EQ(cell.curves.size(), 2u);
    for (const auto& c : cell.curves) EXPECT_EQ(c.points.size(), 3u);
    ASSERT_TRUE(cell.aggregate.has_value());
    EXPECT_GE(cell.aggregate->auc_max_bar, cell.aggregate->auc_avg_bar);
    EXPECT_LE(cell.aggregate->auc_max_bar, 1.0);
    EXPECT_GE(cell.aggregate->auc_avg_bar, 0.0);
    EXPECT_EQ(cell.mean_curve().size(), 3u);
  }
}

TEST(Compare, EmptyMethodsAndErrors) {
  auto d = gen_gaussian_with_planted_outlier(10, 2, 6.0, 1);
  const std::size_t ks[] = {3};
  EXPECT_TRUE(compare_methods(d, std::span<const Method>{}, ks).cells.empty());
  auto none = d;
  none.labels.back() = Label::inlier;
  const Method m[] = {Method::knn};
  EXPECT_THROW(compare_methods(none, m, ks), ValidationError);

  // tlef fails at k=2 but knn keeps its cell.
  const Method both[] = {Method::tlef, Method::knn};
  const std::size_t k2[] = {2};
  auto r = compare_methods(d, both, k2);
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_FALSE(r.cells[0].aggregate.has_value());
  EXPECT_FALSE(r.cells[0].error.empty());
  EXPECT_TRUE(r.cells[1].aggregate.has_value());
}

TEST(Compare, ThreadInvariant) {
  auto d = gen_gaussian_with_planted_outlier(25, 3, 4.0, 5);
  d.labels[0] = Label::outlier;
  d.labels[7] = Label::outlier;
  const std::size_t ks[] = {3, 6};
  auto a = compare_methods(d, all_methods(), ks, Parallelism{1});
  auto b = compare_methods(d, all_methods(), ks, Parallelism{8});
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t c = 0; c < a.cells.size(); ++c) EXPECT_EQ(a.cells[c].curves, b.cells[c].curves);
}

TEST(ReportIo, RoundTrip) {
  auto d = gen_gaussian_with_planted_outlier(20, 2, 5.0, 2);
  const Method m[] = {Method::knn, Method::odin};
  const std::size_t ks[] = {3, 4};
  auto report = compare_methods(d, m, ks);
  std::stringstream io;
  write_report_csv(io, report);
  auto rows = read_report_csv(io);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].method, "knn");
  EXPECT_EQ(rows[0].auc_max, report.cells[0].aggregate->auc_max_bar);
  std::stringstream plot;
  const auto mean = report.cells[1].mean_curve();
  write_plot_data(plot, mean);
  EXPECT_EQ(read_plot_data(plot), mean);
  std::istringstream bad("3 0.5 extra\n");
  EXPECT_THROW(read_plot_data(bad), ParseError);
}

TEST(ReportIo, Merge) {
  EvalReport a;
  a.cells.push_back({"z", Method::lof, std::nullopt, {}, ""});
  EvalReport b;
  b.cells.push_back({"a", Method::lof, std::nullopt, {}, ""});
  b.cells.push_back({"q", Method::ulef, std::nullopt, {}, ""});
  a.merge(std::move(b));
  EXPECT_EQ(a.cells[0].dataset, "q");
  EXPECT_EQ(a.cells[1].dataset, "a");
  EXPECT_EQ(a.cells[2].dataset, "z");
}

}  // namespace
}  // namespace lef
