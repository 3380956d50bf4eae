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

#ifndef FAIRWAY__CODEC_HPP_
#define FAIRWAY__CODEC_HPP_

#include "fairway/geometry.hpp"

#include <algorithm>
#include <span>
#include <vector>

namespace fairway::nav
{

constexpr double kMetersPerKm = 1000.0;

/// Per-step change of position: lateral border-distance change dx and
/// longitudinal along-waterway change dy, both in meters.
struct Dislocation
{
  double dx = 0.0;
  double dy = 0.0;
};

/// Pair of class indices for one step's (lateral, longitudinal) dislocation.
struct DislocationLabel
{
  int x = 0;
  int y = 0;

  bool operator==(const DislocationLabel &) const = default;
};

/**
 * @brief Maps continuous dislocations to class labels and back.
 *
 * Bins are half-open [edge_k, edge_{k+1}); values outside the outer edges
 * clamp to the first/last bin. Decoding returns the stored bin centers.
 */
struct LabelCodec
{
  std::vector<double> lat_edges;  // size c1 + 1, strictly ascending
  std::vector<double> lon_edges;  // size c2 + 1, strictly ascending
  std::vector<double> lat_centers;
  std::vector<double> lon_centers;

  int c1() const { return static_cast<int>(lat_centers.size()); }
  int c2() const { return static_cast<int>(lon_centers.size()); }

  static LabelCodec from_edges(std::vector<double> lat, std::vector<double> lon)
  {
    LabelCodec c;
    c.lat_edges = std::move(lat);
    c.lon_edges = std::move(lon);
    for (const auto * e : {&c.lat_edges, &c.lon_edges}) {
      if (e->size() < 2) throw Error("codec needs at least one bin");
      for (std::size_t i = 1; i < e->size(); ++i)
        if (!((*e)[i] > (*e)[i - 1])) throw Error("codec edges must be strictly ascending");
    }
    auto centers = [](const std::vector<double> & e) {
      std::vector<double> c(e.size() - 1);
      for (std::size_t i = 0; i + 1 < e.size(); ++i) c[i] = 0.5 * (e[i] + e[i + 1]);
      return c;
    };
    c.lat_centers = centers(c.lat_edges);
    c.lon_centers = centers(c.lon_edges);
    return c;
  }

  static LabelCodec uniform(
    int c1, double lat_min, double lat_max, int c2, double lon_min, double lon_max)
  {
    auto edges = [](int n, double lo, double hi) {
      std::vector<double> e(n + 1);
      for (int i = 0; i <= n; ++i) e[i] = lo + (hi - lo) * i / n;
      return e;
    };
    return from_edges(edges(c1, lat_min, lat_max), edges(c2, lon_min, lon_max));
  }

  DislocationLabel encode(const Dislocation & d) const
  {
    return {bin_of(lat_edges, d.dx), bin_of(lon_edges, d.dy)};
  }

  Dislocation decode(const DislocationLabel & l) const
  {
    if (l.x < 0 || l.x >= c1() || l.y < 0 || l.y >= c2())
      throw IndexOutOfRange("dislocation label out of range");
    return {lat_centers[l.x], lon_centers[l.y]};
  }

private:
  static int bin_of(const std::vector<double> & edges, double v)
  {
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const int k = static_cast<int>(std::distance(edges.begin(), it)) - 1;
    return std::clamp(k, 0, static_cast<int>(edges.size()) - 2);
  }
};

/// Dislocation between two consecutive nav-frame samples.
inline Dislocation dislocation(const NavFrameState & a, const NavFrameState & b)
{
  return {b.f - a.f, (b.km - a.km) * kMetersPerKm};
}

/// Rolls decoded labels forward from a nav-frame start state and converts each
/// resulting state back to Cartesian coordinates for metric evaluation.
inline std::vector<Vec2> reconstruct(
  const NavFrameState & start, std::span<const DislocationLabel> labels, const LabelCodec & codec,
  const FairwayGeometry & g)
{
  std::vector<Vec2> out;
  out.reserve(labels.size());
  NavFrameState st = start;
  for (const auto & l : labels) {
    const Dislocation d = codec.decode(l);
    st.f += d.dx;
    st.km += d.dy / kMetersPerKm;
    out.push_back(g.from_nav(st));
  }
  return out;
}

/// Heading-frame counterpart used by the fairway-agnostic model variant: each
/// step moves dy along the current heading and dx to its left, and the heading
/// follows the realized motion.
inline std::vector<Vec2> reconstruct_heading(
  const Vec2 & prev, const Vec2 & start, std::span<const DislocationLabel> labels,
  const LabelCodec & codec)
{
  std::vector<Vec2> out;
  out.reserve(labels.size());
  Vec2 heading = (start - prev).normalized();
  if (heading.norm() == 0.0) heading = {1.0, 0.0};
  Vec2 pos = start;
  for (const auto & l : labels) {
    const Dislocation d = codec.decode(l);
    const Vec2 next = pos + d.dy * heading + d.dx * heading.perp_left();
    if ((next - pos).norm() > 0.0) heading = (next - pos).normalized();
    pos = next;
    out.push_back(pos);
  }
  return out;
}

}  // namespace fairway::nav

#endif  // FAIRWAY__CODEC_HPP_
