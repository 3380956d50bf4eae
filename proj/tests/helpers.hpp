// Copyright 2026 The Fairway Authors
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

#ifndef TESTS__HELPERS_HPP_
#define TESTS__HELPERS_HPP_

#include "fairway/geometry.hpp"

#include <random>
#include <vector>

namespace testutil
{

// Straight fairway along +x: right border at y = 0, left border at y = width,
// centerline in the middle. km grows with x.
inline fairway::nav::FairwayGeometry straight_fairway(
  double length = 20000.0, double width = 150.0, double km_origin = 0.0, double km_per_m = 1e-3)
{
  using fairway::Vec2;
  auto line = [&](double y) {
    std::vector<Vec2> pts;
    const int n = 21;
    for (int i = 0; i < n; ++i) pts.push_back({length * i / (n - 1), y});
    return fairway::nav::Polyline(pts);
  };
  fairway::nav::FairwayGeometry g;
  g.centerline = line(width / 2.0);
  g.right_border = line(0.0);
  g.left_border = line(width);
  g.km_origin = km_origin;
  g.km_per_m = km_per_m;
  g.validate();
  return g;
}

// Gentle S-curve fairway built from circular arcs, densified to a polyline.
inline fairway::nav::FairwayGeometry curved_fairway(double width = 150.0)
{
  using fairway::Vec2;
  struct Seg
  {
    double len, curv;
  };
  const std::vector<Seg> segs = {
    {2000.0, 0.0}, {2500.0, 1.0 / 3000.0}, {1500.0, 0.0}, {2500.0, -1.0 / 2500.0}, {2000.0, 0.0}};
  std::vector<Vec2> center;
  Vec2 p{0.0, 0.0};
  double heading = 0.0;
  const double step = 25.0;
  center.push_back(p);
  for (const auto & s : segs) {
    double done = 0.0;
    while (done < s.len) {
      const double d = std::min(step, s.len - done);
      heading += s.curv * d;
      p += Vec2{std::cos(heading), std::sin(heading)} * d;
      center.push_back(p);
      done += d;
    }
  }
  auto offset = [&](double off) {
    std::vector<Vec2> pts(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
      const Vec2 t =
        (i + 1 < center.size() ? center[i + 1] - center[i] : center[i] - center[i - 1])
          .normalized();
      pts[i] = center[i] + off * t.perp_left();
    }
    return fairway::nav::Polyline(pts);
  };
  fairway::nav::FairwayGeometry g;
  g.centerline = fairway::nav::Polyline(center);
  g.right_border = offset(-width / 2.0);
  g.left_border = offset(width / 2.0);
  g.validate();
  return g;
}

inline std::mt19937_64 rng(std::uint64_t seed = 42)
{
  return std::mt19937_64(seed);
}

}  // namespace testutil

#endif  // TESTS__HELPERS_HPP_
