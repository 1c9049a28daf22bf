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
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "lef/dataset.hpp"
#include "lef/error.hpp"

namespace lef {
namespace {

LabeledDataset parse(const std::string& text, std::vector<std::string>* warnings = nullptr) {
  std::istringstream in(text);
  return parse_dataset_csv(in, "mem", warnings);
}

TEST(Dataset, FourRowReadback) {
  auto d = parse("0,0,inlier\n1,0,inlier\n0,1,Inlier\n5,5,OUTLIER\n");
  EXPECT_EQ(d.size(), 4u);
  EXPECT_EQ(d.dims(), 2u);
  EXPECT_EQ(d.outlier_count(), 1u);
  EXPECT_EQ(d.labels[3], Label::outlier);
  EXPECT_EQ(d.features(3, 1), 5.0);
}

TEST(Dataset, HeaderDetected) {
  auto d = parse("a,b,class\n0,0,inlier\n1,2,outlier\n");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.features(1, 1), 2.0);
}

TEST(Dataset, NonNumericCellReportsPosition) {
  try {
    parse("0,0,inlier\n1,x,inlier\n2,2,outlier\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(Dataset, BadLabelIsParseError) {
  EXPECT_THROW(parse("0,0,inlier\n1,1,maybe\n"), ParseError);
}

TEST(Dataset, RaggedRowIsParseError) {
  EXPECT_THROW(parse("0,0,inlier\n1,inlier\n"), ParseError);
}

TEST(Dataset, DuplicateRowsNameBothIndices) {
  try {
    parse("0,0,inlier\n1,1,inlier\n0,0,outlier\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('0'), std::string::npos);
    EXPECT_NE(msg.find('2'), std::string::npos);
  }
}

TEST(Dataset, NoOutliersWarns) {
  std::vector<std::string> warnings;
  auto d = parse("0,0,inlier\n1,1,inlier\n", &warnings);
  EXPECT_EQ(d.outlier_count(), 0u);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Dataset, NoInliersRejected) {
  EXPECT_THROW(parse("0,0,outlier\n1,1,outlier\n"), ValidationError);
}

TEST(Dataset, RoundTripExact) {
  auto d = gen_gaussian_with_planted_outlier(20, 3, 4.5, 11);
  std::ostringstream out;
  write_dataset_csv(out, d);
  auto back = parse(out.str());
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.labels, d.labels);
}

TEST(Dataset, FileRoundTrip) {
  auto d = gen_gaussian_with_planted_outlier(10, 2, 3.0, 5);
  const auto path = std::filesystem::temp_directory_path() / "lef_dataset_roundtrip.csv";
  save_dataset(path, d);
  auto back = load_dataset(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.labels, d.labels);
}

TEST(Dataset, MissingFile) {
  EXPECT_ANY_THROW(load_dataset("/nonexistent/lef.csv"));
}

TEST(Trials, OnePerOutlierInOrder) {
  auto d = parse(
      "0,0,inlier\n9,9,outlier\n1,0,inlier\n0,1,inlier\n8,8,outlier\n2,2,inlier\n");
  auto trials = make_outlier_trials(d);
  ASSERT_EQ(trials.size(), 2u);
  for (const auto& t : trials) EXPECT_EQ(t.features.rows(), 5u);
  EXPECT_EQ(trials[0].outlier_index, 1u);
  EXPECT_EQ(trials[0].features(1, 0), 9.0);
  EXPECT_EQ(trials[1].outlier_index, 3u);
  EXPECT_EQ(trials[1].features(3, 0), 8.0);
  // inlier order preserved
  EXPECT_EQ(trials[1].features(0, 0), 0.0);
  EXPECT_EQ(trials[1].features(1, 0), 1.0);
  EXPECT_EQ(trials[1].features(4, 0), 2.0);
  EXPECT_EQ(trials[0].id(), "mem#1");
  EXPECT_EQ(trials[1].id(), "mem#2");
}

TEST(Trials, SingleOutlierTrialIsDataset) {
  auto d = gen_gaussian_with_planted_outlier(8, 2, 5.0, 1);
  auto trials = make_outlier_trials(d);
  ASSERT_EQ(trials.size(), 1u);
  EXPECT_EQ(trials[0].features, d.features);
  EXPECT_EQ(trials[0].outlier_index, 8u);
}

TEST(Trials, ZeroOutliersEmpty) {
  auto d = parse("0,0,inlier\n1,1,inlier\n2,0,inlier\n");
  EXPECT_TRUE(make_outlier_trials(d).empty());
}

TEST(Trials, TooFewInliers) {
  auto d = parse("0,0,inlier\n1,1,outlier\n");
  EXPECT_THROW(make_outlier_trials(d), ContractViolation);
}

TEST(Trials, UnionOfOutliersProperty) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    auto d = gen_gaussian_with_planted_outlier(12, 2, 1.0, rep);
    std::set<std::size_t> outliers;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (rng() % 4 == 0) d.labels[i] = Label::outlier;
      if (d.labels[i] == Label::outlier) outliers.insert(i);
    }
    auto trials = make_outlier_trials(d);
    ASSERT_EQ(trials.size(), outliers.size());
    std::set<std::vector<double>> seen;
    for (const auto& t : trials) {
      auto r = t.features.row(t.outlier_index);
      seen.insert({r.begin(), r.end()});
      EXPECT_EQ(t.features.rows(), d.inlier_count() + 1);
    }
    std::set<std::vector<double>> expected;
    for (auto i : outliers) expected.insert({d.features.row(i).begin(), d.features.row(i).end()});
    EXPECT_EQ(seen, expected);
  }
}

TEST(Gaussian, PlantedDistance) {
  auto d = gen_gaussian_with_planted_outlier(50, 2, 10.0, 1);
  ASSERT_EQ(d.size(), 51u);
  EXPECT_EQ(d.outlier_count(), 1u);
  EXPECT_EQ(d.labels[50], Label::outlier);
  double mean[2] = {0, 0};
  for (std::size_t i = 0; i < 50; ++i) {
    mean[0] += d.features(i, 0) / 50;
    mean[1] += d.features(i, 1) / 50;
  }
  const double dist = std::hypot(d.features(50, 0) - mean[0], d.features(50, 1) - mean[1]);
  EXPECT_NEAR(dist, 10.0, 1e-9);
}

TEST(Gaussian, DeterministicAndSeeded) {
  auto a = gen_gaussian_with_planted_outlier(50, 2, 10.0, 1);
  auto b = gen_gaussian_with_planted_outlier(50, 2, 10.0, 1);
  auto c = gen_gaussian_with_planted_outlier(50, 2, 10.0, 2);
  EXPECT_EQ(a.features, b.features);
  EXPECT_NE(a.features(0, 0), c.features(0, 0));
}

TEST(Gaussian, RejectsBadParameters) {
  EXPECT_THROW(gen_gaussian_with_planted_outlier(4, 2, 1.0, 0), ContractViolation);
  EXPECT_THROW(gen_gaussian_with_planted_outlier(10, 2, 0.0, 0), ContractViolation);
}

TEST(Roads, ShapesLabelsPalette) {
  auto s = gen_synthetic_road_rasters(RoadClass::straight_multilane, 100, 7);
  auto x = gen_synthetic_road_rasters(RoadClass::intersection, 20, 7);
  EXPECT_EQ(s.size(), 100u);
  EXPECT_EQ(s.dims(), 4096u);
  EXPECT_EQ(s.outlier_count(), 0u);
  EXPECT_EQ(x.size(), 20u);
  EXPECT_EQ(x.inlier_count(), 0u);
  for (const auto* d : {&s, &x}) {
    for (double v : d->features.data()) EXPECT_TRUE(v == 0.0 || v == 0.5 || v == 1.0);
  }
}

TEST(Roads, Deterministic) {
  auto a = gen_synthetic_road_rasters(RoadClass::intersection, 5, 3);
  auto b = gen_synthetic_road_rasters(RoadClass::intersection, 5, 3);
  auto c = gen_synthetic_road_rasters(RoadClass::intersection, 5, 4);
  EXPECT_EQ(a.features, b.features);
  EXPECT_NE(a.features, c.features);
}

TEST(Roads, ClassParse) {
  EXPECT_EQ(parse_road_class("intersection"), RoadClass::intersection);
  EXPECT_EQ(parse_road_class("straight_multilane"), RoadClass::straight_multilane);
  EXPECT_FALSE(parse_road_class("roundabout").has_value());
}

}  // namespace
}  // namespace lef
