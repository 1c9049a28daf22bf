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
// Desk-scale stand-in for rendered map tiles: top-down 64x64 rasters of a
// straight multi-lane road or an at-grade intersection.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lef/dataset.hpp"
#include "lef/text_io.hpp"

namespace lef {
namespace {

constexpr double kLane = 0.5;
constexpr double kMarking = 1.0;
constexpr double kMarkingHalfWidth = 0.5;
constexpr double kDashPeriod = 10.0;
constexpr double kDashOn = 5.0;

struct Vec2 {
  double x;
  double y;
};

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

class Canvas {
 public:
  Canvas() : pixels_(kRasterSide * kRasterSide, 0.0) {}

  // Pixel centers relative to the raster center.
  template <class Fn>
  void paint(Fn&& value_at) {
    constexpr double half = static_cast<double>(kRasterSide) / 2.0;
    for (std::size_t y = 0; y < kRasterSide; ++y) {
      for (std::size_t x = 0; x < kRasterSide; ++x) {
        const Vec2 p{static_cast<double>(x) + 0.5 - half, static_cast<double>(y) + 0.5 - half};
        double& px = pixels_[y * kRasterSide + x];
        px = std::max(px, value_at(p));
      }
    }
  }

  const std::vector<double>& pixels() const { return pixels_; }

 private:
  std::vector<double> pixels_;
};

// A band of lanes along direction dir through origin, lateral coordinate s and
// longitudinal coordinate t. Returns 0 outside the band.
double lane_band(double s, double t, int lanes, double lane_width, double dash_phase,
                 bool draw_markings) {
  const double half = lanes * lane_width / 2.0;
  if (std::abs(s) > half + kMarkingHalfWidth) return 0.0;
  if (draw_markings) {
    for (int m = 0; m <= lanes; ++m) {
      const double boundary = -half + m * lane_width;
      if (std::abs(s - boundary) > kMarkingHalfWidth) continue;
      const bool solid = m == 0 || m == lanes || 2 * m == lanes;
      if (solid) return kMarking;
      const double phase = std::fmod(t + dash_phase + 1000.0 * kDashPeriod, kDashPeriod);
      if (phase < kDashOn) return kMarking;
    }
  }
  return std::abs(s) <= half ? kLane : 0.0;
}

std::vector<double> straight_road(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::uniform_int_distribution<int> lane_count(2, 6);
  std::uniform_real_distribution<double> width(4.5, 7.0);
  std::uniform_real_distribution<double> offset(-8.0, 8.0);
  std::uniform_real_distribution<double> phase(0.0, kDashPeriod);

  const double theta = angle(rng);
  const int lanes = lane_count(rng);
  const double lane_width = width(rng);
  const double lateral = offset(rng);
  const double dash = phase(rng);

  const Vec2 dir{std::cos(theta), std::sin(theta)};
  const Vec2 normal{-dir.y, dir.x};
  Canvas canvas;
  canvas.paint([&](Vec2 p) {
    return lane_band(dot(p, normal) - lateral, dot(p, dir), lanes, lane_width, dash, true);
  });
  return canvas.pixels();
}

std::vector<double> intersection(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> arm_count(3, 4);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::uniform_int_distribution<int> lane_count(1, 4);
  std::uniform_real_distribution<double> width(4.5, 7.0);
  std::uniform_real_distribution<double> offset(-5.0, 5.0);
  std::uniform_real_distribution<double> phase(0.0, kDashPeriod);

  struct Arm {
    Vec2 dir;
    Vec2 normal;
    int lanes;
    double dash;
  };

  const int arms = arm_count(rng);
  const double base = angle(rng);
  const double lane_width = width(rng);
  const Vec2 center{offset(rng), offset(rng)};
  std::vector<Arm> arm_list;
  double junction_radius = 0.0;
  for (int a = 0; a < arms; ++a) {
    const double theta = base + a * 2.0 * std::numbers::pi / arms + jitter(rng);
    Arm arm;
    arm.dir = {std::cos(theta), std::sin(theta)};
    arm.normal = {-arm.dir.y, arm.dir.x};
    arm.lanes = lane_count(rng);
    arm.dash = phase(rng);
    junction_radius = std::max(junction_radius, arm.lanes * lane_width / 2.0);
    arm_list.push_back(arm);
  }

  Canvas canvas;
  canvas.paint([&](Vec2 p) {
    const Vec2 q{p.x - center.x, p.y - center.y};
    double value = std::hypot(q.x, q.y) <= junction_radius ? kLane : 0.0;
    for (const Arm& arm : arm_list) {
      const double t = dot(q, arm.dir);
      if (t < 0.0) continue;
      const bool markings = t > junction_radius + 1.0;
      value = std::max(value,
                       lane_band(dot(q, arm.normal), t, arm.lanes, lane_width, arm.dash, markings));
    }
    return value;
  });
  return canvas.pixels();
}

}  // namespace

std::optional<RoadClass> parse_road_class(std::string_view token) {
  token = trim(token);
  if (iequals(token, "straight_multilane") || iequals(token, "straight")) {
    return RoadClass::straight_multilane;
  }
  if (iequals(token, "intersection")) return RoadClass::intersection;
  return std::nullopt;
}

LabeledDataset gen_synthetic_road_rasters(RoadClass road_class, std::size_t count,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LabeledDataset dataset;
  const bool straight = road_class == RoadClass::straight_multilane;
  dataset.name = std::string(straight ? "roads_straight_multilane" : "roads_intersection") +
                 "_seed" + std::to_string(seed);
  for (std::size_t i = 0; i < count; ++i) {
    dataset.features.append_row(straight ? straight_road(rng) : intersection(rng));
    dataset.labels.push_back(straight ? Label::inlier : Label::outlier);
  }
  if (count == 0) dataset.features = Matrix(0, kRasterSide * kRasterSide);
  return dataset;
}

}  // namespace lef
