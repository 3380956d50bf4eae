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

#ifndef FAIRWAY__GEOMETRY_HPP_
#define FAIRWAY__GEOMETRY_HPP_

#include "fairway/common.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fairway::nav
{

/// Position in the navigation-area frame: longitudinal waterway kilometer and
/// signed lateral distance to the right fairway border (positive into the
/// fairway, i.e. toward the left border).
struct NavFrameState
{
  double km = 0.0;
  double f = 0.0;
};

/// Open polyline with cached cumulative arclength.
class Polyline
{
public:
  Polyline() = default;

  explicit Polyline(std::vector<Vec2> pts) : pts_(std::move(pts)) { rebuild(); }

  const std::vector<Vec2> & points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  double length() const { return cum_.empty() ? 0.0 : cum_.back(); }

  void rebuild()
  {
    cum_.resize(pts_.size());
    double s = 0.0;
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (i > 0) s += (pts_[i] - pts_[i - 1]).norm();
      cum_[i] = s;
    }
  }

  // Point at arclength s, clamped to [0, length].
  Vec2 point_at(double s) const
  {
    const std::size_t i = segment_index(s);
    const double seg_len = cum_[i + 1] - cum_[i];
    const double u = seg_len > 0.0 ? std::clamp((s - cum_[i]) / seg_len, 0.0, 1.0) : 0.0;
    return pts_[i] + u * (pts_[i + 1] - pts_[i]);
  }

  // Unit tangent of the segment containing arclength s. At shared vertices the
  // lower-arclength segment wins.
  Vec2 tangent_at(double s) const
  {
    const std::size_t i = segment_index(s);
    return (pts_[i + 1] - pts_[i]).normalized();
  }

  struct Projection
  {
    double s = 0.0;        // arclength of the foot point
    double dist2 = 0.0;    // squared distance to the foot point
    double overshoot = 0;  // signed distance beyond the ends (0 when interior)
    Vec2 foot;
  };

  // Nearest-segment orthogonal projection; ties between segments break toward
  // the lower arclength.
  Projection project(const Vec2 & p) const
  {
    Projection best;
    best.dist2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
      const Vec2 a = pts_[i];
      const Vec2 d = pts_[i + 1] - a;
      const double len2 = d.norm2();
      const double u = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
      const Vec2 foot = a + u * d;
      const double dist2 = (p - foot).norm2();
      if (dist2 < best.dist2) {
        best.s = cum_[i] + u * std::sqrt(len2);
        best.dist2 = dist2;
        best.foot = foot;
      }
    }
    best.overshoot = 0.0;
    if (pts_.size() >= 2) {
      if (best.s <= 0.0) {
        const double t = (p - pts_.front()).dot(tangent_at(0.0));
        if (t < 0.0) best.overshoot = t;
      } else if (best.s >= length()) {
        const double t = (p - pts_.back()).dot(tangent_at(length()));
        if (t > 0.0) best.overshoot = t;
      }
    }
    return best;
  }

  // First crossing of the line {origin + t * dir} with this polyline, taking
  // the intersection of smallest |t|. Returns the signed parameter t.
  std::optional<double> line_hit(const Vec2 & origin, const Vec2 & dir) const
  {
    std::optional<double> best;
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
      const Vec2 a = pts_[i];
      const Vec2 e = pts_[i + 1] - a;
      const double denom = dir.cross(e);
      if (std::abs(denom) < 1e-12) continue;  // parallel
      const Vec2 w = a - origin;
      const double t = w.cross(e) / denom;
      const double u = w.cross(dir) / denom;
      if (u < -1e-9 || u > 1.0 + 1e-9) continue;
      if (!best || std::abs(t) < std::abs(*best)) best = t;
    }
    return best;
  }

private:
  std::size_t segment_index(double s) const
  {
    if (pts_.size() < 2) throw Error("polyline needs at least 2 points");
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    std::size_t i = static_cast<std::size_t>(std::distance(cum_.begin(), it));
    if (i == 0) return 0;
    i -= 1;
    return std::min(i, pts_.size() - 2);
  }

  std::vector<Vec2> pts_;
  std::vector<double> cum_;
};

/**
 * @brief Fairway geometry: centerline, borders, and the affine mapping from
 * centerline arclength to waterway kilometer.
 *
 * Conventions: arclength (and so the waterway kilometer) increases in the
 * upstream direction; the right border lies to starboard of a vessel heading
 * upstream. The lateral coordinate f is measured from the right border along
 * the centerline normal and grows toward the left border.
 */
struct FairwayGeometry
{
  Polyline centerline;
  Polyline right_border;
  Polyline left_border;
  double km_origin = 0.0;
  double km_per_m = 1e-3;

  // Tolerance for projections slightly beyond the longitudinal span.
  double arclength_slack_m = 1.0;
  // Lateral slack accepted by validators: f in [-f_slack, width + f_slack].
  double f_slack_m = 50.0;

  void validate() const
  {
    if (centerline.size() < 2) throw Error("centerline needs >= 2 points");
    if (right_border.size() < 2 || left_border.size() < 2)
      throw Error("borders need >= 2 points");
    if (!(km_per_m > 0.0)) throw Error("km mapping must be strictly increasing");
    for (int i = 0; i <= 8; ++i) {
      const double s = centerline.length() * i / 8.0;
      if (!(width_at(s) > 0.0)) throw Error("fairway width must stay positive");
    }
  }

  double arclength_to_km(double s) const { return km_origin + km_per_m * s; }
  double km_to_arclength(double km) const { return (km - km_origin) / km_per_m; }

  // Left-pointing unit normal of the centerline at arclength s.
  Vec2 normal_at(double s) const { return centerline.tangent_at(s).perp_left(); }

  // Right-border point on the normal through the centerline at arclength s.
  Vec2 right_border_point(double s) const
  {
    const Vec2 c = centerline.point_at(s);
    const Vec2 n = normal_at(s);
    if (const auto t = right_border.line_hit(c, n)) return c + *t * n;
    // Normal ray misses the border polyline span; fall back to the nearest
    // border point, which keeps the frame usable near geometry ends.
    return right_border.project(c).foot;
  }

  // Fairway width measured along the normal at arclength s.
  double width_at(double s) const
  {
    const Vec2 c = centerline.point_at(s);
    const Vec2 n = normal_at(s);
    const auto tr = right_border.line_hit(c, n);
    const auto tl = left_border.line_hit(c, n);
    const double r = tr ? *tr : -std::sqrt(right_border.project(c).dist2);
    const double l = tl ? *tl : std::sqrt(left_border.project(c).dist2);
    return l - r;
  }

  // Signed centerline curvature (1/m) around arclength s estimated from three
  // points 2h apart (positive = turning left).
  double curvature_at(double s, double h = 60.0) const
  {
    const double lo = std::max(0.0, s - h);
    const double hi = std::min(centerline.length(), s + h);
    if (hi - lo < 1e-6) return 0.0;
    const Vec2 a = centerline.point_at(lo);
    const Vec2 b = centerline.point_at(0.5 * (lo + hi));
    const Vec2 c = centerline.point_at(hi);
    const Vec2 ab = b - a;
    const Vec2 bc = c - b;
    const double den = ab.norm() * bc.norm() * (c - a).norm();
    if (den < 1e-9) return 0.0;
    return 2.0 * ab.cross(bc) / den;
  }

  /// Converts a Cartesian point to the navigation frame.
  /// Throws ProjectionOutOfRange beyond the longitudinal span (plus slack).
  NavFrameState to_nav(const Vec2 & p) const
  {
    const auto proj = centerline.project(p);
    if (std::abs(proj.overshoot) > arclength_slack_m)
      throw ProjectionOutOfRange("point beyond fairway span");
    const Vec2 n = normal_at(proj.s);
    const Vec2 r = right_border_point(proj.s);
    return {arclength_to_km(proj.s), (p - r).dot(n)};
  }

  /// Inverse of to_nav.
  Vec2 from_nav(const NavFrameState & st) const
  {
    const double s = km_to_arclength(st.km);
    if (s < -arclength_slack_m || s > centerline.length() + arclength_slack_m)
      throw ProjectionOutOfRange("nav state beyond fairway span");
    const double sc = std::clamp(s, 0.0, centerline.length());
    return right_border_point(sc) + st.f * normal_at(sc);
  }
};

inline nlohmann::json polyline_to_json(const Polyline & pl)
{
  nlohmann::json arr = nlohmann::json::array();
  for (const auto & p : pl.points()) arr.push_back({p.x, p.y});
  return arr;
}

inline Polyline polyline_from_json(const nlohmann::json & arr)
{
  std::vector<Vec2> pts;
  pts.reserve(arr.size());
  for (const auto & e : arr) pts.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  return Polyline(std::move(pts));
}

inline nlohmann::json geometry_to_json(const FairwayGeometry & g)
{
  return {
    {"centerline", polyline_to_json(g.centerline)},
    {"right_border", polyline_to_json(g.right_border)},
    {"left_border", polyline_to_json(g.left_border)},
    {"km_origin", g.km_origin},
    {"km_per_meter", g.km_per_m}};
}

inline FairwayGeometry geometry_from_json(const nlohmann::json & j)
{
  FairwayGeometry g;
  g.centerline = polyline_from_json(j.at("centerline"));
  g.right_border = polyline_from_json(j.at("right_border"));
  g.left_border = polyline_from_json(j.at("left_border"));
  g.km_origin = j.at("km_origin").get<double>();
  g.km_per_m = j.at("km_per_meter").get<double>();
  g.validate();
  return g;
}

inline FairwayGeometry load_geometry(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw Error("cannot open geometry file: " + path);
  nlohmann::json j;
  in >> j;
  return geometry_from_json(j);
}

inline void save_geometry(const FairwayGeometry & g, const std::string & path)
{
  std::ofstream out(path);
  if (!out) throw Error("cannot write geometry file: " + path);
  out << geometry_to_json(g).dump(2) << "\n";
}

}  // namespace fairway::nav

#endif  // FAIRWAY__GEOMETRY_HPP_
