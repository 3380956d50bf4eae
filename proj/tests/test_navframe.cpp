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

#include "fairway/codec.hpp"
#include "fairway/geometry.hpp"
#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace fairway;
using namespace fairway::nav;

namespace
{

// Linear-scan bin search, the oracle counterpart of LabelCodec's binary search.
int bin_scan(const std::vector<double> & edges, double v)
{
  const int bins = static_cast<int>(edges.size()) - 1;
  if (v < edges.front()) return 0;
  for (int k = 0; k < bins; ++k)
    if (v >= edges[k] && v < edges[k + 1]) return k;
  return bins - 1;
}

}  // namespace

TEST_CASE("to_nav on a straight fairway matches the closed form")
{
  const auto g = testutil::straight_fairway(20000.0, 150.0, 0.0, 1e-3);

  const auto st = g.to_nav({500.0, 30.0});
  CHECK(st.km == Catch::Approx(0.5).margin(1e-9));
  CHECK(st.f == Catch::Approx(30.0).margin(1e-9));

  // Point exactly on the right border.
  CHECK(g.to_nav({1234.0, 0.0}).f == Catch::Approx(0.0).margin(1e-9));

  // km origin shifts the km coordinate only.
  const auto g10 = testutil::straight_fairway(20000.0, 150.0, 10.0, 1e-3);
  CHECK(g10.to_nav({0.0, 40.0}).km == Catch::Approx(10.0).margin(1e-12));
}

TEST_CASE("to_nav rejects points beyond the longitudinal span")
{
  const auto g = testutil::straight_fairway(2000.0);
  CHECK_THROWS_AS(g.to_nav({-50.0, 30.0}), ProjectionOutOfRange);
  CHECK_THROWS_AS(g.to_nav({2100.0, 30.0}), ProjectionOutOfRange);
  CHECK_NOTHROW(g.to_nav({1999.5, 30.0}));
}

TEST_CASE("nav frame round trip on straight and curved geometry")
{
  std::mt19937_64 rng = testutil::rng(7);
  for (const auto & g : {testutil::straight_fairway(), testutil::curved_fairway()}) {
    std::uniform_real_distribution<double> ukm(
      g.km_origin + 0.2, g.arclength_to_km(g.centerline.length()) - 0.2);
    std::uniform_real_distribution<double> uf(5.0, 145.0);
    for (int i = 0; i < 200; ++i) {
      const NavFrameState st{ukm(rng), uf(rng)};
      const auto p = g.from_nav(st);
      const auto back = g.to_nav(p);
      CHECK(std::abs(back.km - st.km) * kMetersPerKm < 1e-6);
      CHECK(std::abs(back.f - st.f) < 1e-6);
    }
  }
}

TEST_CASE("translation invariance of the nav frame")
{
  const Vec2 shift{12345.6, -789.0};
  auto g = testutil::curved_fairway();
  auto shifted = g;
  auto move = [&](Polyline & pl) {
    std::vector<Vec2> pts = pl.points();
    for (auto & p : pts) p += shift;
    pl = Polyline(pts);
  };
  move(shifted.centerline);
  move(shifted.right_border);
  move(shifted.left_border);

  std::mt19937_64 rng = testutil::rng(3);
  std::uniform_real_distribution<double> ukm(0.5, 9.5);
  std::uniform_real_distribution<double> uf(10.0, 140.0);
  for (int i = 0; i < 100; ++i) {
    const NavFrameState st{ukm(rng), uf(rng)};
    const Vec2 p = g.from_nav(st);
    const auto a = g.to_nav(p);
    const auto b = shifted.to_nav(p + shift);
    CHECK(std::abs(a.km - b.km) * kMetersPerKm < 1e-6);
    CHECK(std::abs(a.f - b.f) < 1e-6);
  }
}

TEST_CASE("sign conventions: left border raises f, upstream motion raises dy")
{
  const auto g = testutil::straight_fairway();
  const auto low = g.to_nav({1000.0, 20.0});
  const auto high = g.to_nav({1000.0, 90.0});
  CHECK(high.f > low.f);

  const auto a = g.to_nav({1000.0, 50.0});
  const auto b = g.to_nav({1150.0, 50.0});  // further upstream
  CHECK(dislocation(a, b).dy > 0.0);
}

TEST_CASE("dislocation is a direct difference")
{
  const NavFrameState a{1.000, 20.0};
  const NavFrameState b{1.050, 18.0};
  const auto d = dislocation(a, b);
  CHECK(d.dx == Catch::Approx(-2.0).margin(1e-12));
  CHECK(d.dy == Catch::Approx(50.0).margin(1e-12));

  const auto zero = dislocation(a, a);
  CHECK(zero.dx == 0.0);
  CHECK(zero.dy == 0.0);

  // Downstream motion gives negative dy.
  CHECK(dislocation(b, a).dy < 0.0);
}

TEST_CASE("codec: symmetric bins put zero in the center class")
{
  const auto codec = LabelCodec::uniform(21, -15.0, 15.0, 41, -100.0, 100.0);
  const auto l = codec.encode({0.0, 0.0});
  CHECK(l.x == 10);
  CHECK(l.y == 20);
  const auto d = codec.decode({10, 20});
  CHECK(d.dx == Catch::Approx(0.0).margin(1e-12));
  CHECK(d.dy == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("codec: clamping at the outer edges")
{
  const auto codec = LabelCodec::uniform(21, -15.0, 15.0, 41, 0.0, 200.0);
  CHECK(codec.encode({-100.0, 50.0}).x == 0);
  CHECK(codec.encode({100.0, 50.0}).x == 20);
  CHECK(codec.encode({0.0, 1e9}).y == 40);
  CHECK(codec.encode({0.0, -5.0}).y == 0);
}

TEST_CASE("codec: binary search agrees with the linear-scan oracle")
{
  const auto codec = LabelCodec::uniform(21, -15.0, 15.0, 41, 0.0, 200.0);
  std::mt19937_64 rng = testutil::rng(11);
  std::uniform_real_distribution<double> ux(-25.0, 25.0);
  std::uniform_real_distribution<double> uy(-40.0, 260.0);
  for (int i = 0; i < 100000; ++i) {
    const Dislocation d{ux(rng), uy(rng)};
    const auto l = codec.encode(d);
    CHECK(l.x == bin_scan(codec.lat_edges, d.dx));
    CHECK(l.y == bin_scan(codec.lon_edges, d.dy));
  }
  // Edge values land in the bin they open.
  for (int k = 0; k < codec.c1(); ++k)
    CHECK(codec.encode({codec.lat_edges[k], 0.0}).x == k);
}

TEST_CASE("codec: round trip and half-bin-width bound")
{
  const auto codec = LabelCodec::uniform(21, -15.0, 15.0, 41, 0.0, 200.0);
  const double lat_half = 0.5 * (codec.lat_edges[1] - codec.lat_edges[0]);
  const double lon_half = 0.5 * (codec.lon_edges[1] - codec.lon_edges[0]);

  // encode(decode(l)) is the identity on all label pairs.
  for (int x = 0; x < codec.c1(); ++x)
    for (int y = 0; y < codec.c2(); ++y)
      CHECK(codec.encode(codec.decode({x, y})) == DislocationLabel{x, y});

  std::mt19937_64 rng = testutil::rng(13);
  std::uniform_real_distribution<double> ux(-15.0, 15.0);
  std::uniform_real_distribution<double> uy(0.0, 200.0);
  for (int i = 0; i < 10000; ++i) {
    const Dislocation d{ux(rng), uy(rng)};
    const auto back = codec.decode(codec.encode(d));
    CHECK(std::abs(back.dx - d.dx) <= lat_half + 1e-12);
    CHECK(std::abs(back.dy - d.dy) <= lon_half + 1e-12);
  }

  CHECK_THROWS_AS(codec.decode({21, 0}), IndexOutOfRange);
  CHECK_THROWS_AS(codec.decode({0, -1}), IndexOutOfRange);
}

TEST_CASE("reconstruct: zero labels keep the position constant")
{
  const auto g = testutil::straight_fairway();
  const auto codec = LabelCodec::uniform(21, -15.0, 15.0, 41, -100.0, 100.0);
  const NavFrameState start{2.0, 60.0};
  const std::vector<DislocationLabel> labels(5, {10, 20});  // both center classes
  const auto pts = reconstruct(start, labels, codec, g);
  const Vec2 p0 = g.from_nav(start);
  for (const auto & p : pts) {
    CHECK(p.x == Catch::Approx(p0.x).margin(1e-9));
    CHECK(p.y == Catch::Approx(p0.y).margin(1e-9));
  }
}

TEST_CASE("reconstruct: single step moves along axis and normal")
{
  const auto g = testutil::straight_fairway();
  const auto codec = LabelCodec::uniform(21, -15.0, 15.0, 41, 0.0, 200.0);
  const NavFrameState start{2.0, 60.0};
  const DislocationLabel l = codec.encode({4.0, 120.0});
  const auto d = codec.decode(l);
  const auto pts = reconstruct(start, std::vector<DislocationLabel>{l}, codec, g);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].x == Catch::Approx(2000.0 + d.dy).margin(1e-9));
  CHECK(pts[0].y == Catch::Approx(60.0 + d.dx).margin(1e-9));
}

TEST_CASE("reconstruct: codec round trip accumulates at most half bin widths")
{
  const auto g = testutil::curved_fairway();
  const auto codec = LabelCodec::uniform(21, -15.0, 15.0, 41, 0.0, 200.0);
  const double lat_half = 0.5 * (codec.lat_edges[1] - codec.lat_edges[0]);
  const double lon_half = 0.5 * (codec.lon_edges[1] - codec.lon_edges[0]);

  // A smooth synthetic nav-frame track.
  std::vector<NavFrameState> track;
  for (int i = 0; i <= 10; ++i)
    track.push_back({1.0 + 0.160 * i, 55.0 + 3.0 * std::sin(0.6 * i)});

  std::vector<DislocationLabel> labels;
  for (std::size_t i = 1; i < track.size(); ++i)
    labels.push_back(codec.encode(dislocation(track[i - 1], track[i])));

  const auto pts = reconstruct(track[0], labels, codec, g);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 truth = g.from_nav(track[i + 1]);
    const double steps = static_cast<double>(i + 1);
    // Loose composition bound: per-step quantization error is at most half a
    // bin width per axis; curvature couples the axes only mildly here.
    CHECK((pts[i] - truth).norm() <= steps * (lat_half + lon_half) + 1e-6);
  }
}

TEST_CASE("reconstruct: leaving the geometry span raises")
{
  const auto g = testutil::straight_fairway(2000.0);
  const auto codec = LabelCodec::uniform(21, -15.0, 15.0, 41, 0.0, 200.0);
  const NavFrameState start{1.9, 60.0};
  const std::vector<DislocationLabel> labels(5, codec.encode({0.0, 190.0}));
  CHECK_THROWS_AS(reconstruct(start, labels, codec, g), ProjectionOutOfRange);
}

TEST_CASE("reconstruct_heading on a straight fairway matches nav-frame rollout")
{
  const auto g = testutil::straight_fairway();
  const auto codec = LabelCodec::uniform(21, -15.0, 15.0, 41, 0.0, 200.0);
  // Heading-aligned motion: zero lateral dislocation. The two frames coincide
  // exactly here; once dx is nonzero the heading frame rotates away.
  const std::vector<DislocationLabel> labels = {
    codec.encode({0.0, 150.0}), codec.encode({0.0, 150.0}), codec.encode({0.0, 140.0})};
  const NavFrameState start{2.0, 60.0};
  const auto nav_pts = reconstruct(start, labels, codec, g);
  const auto head_pts =
    reconstruct_heading({1850.0, 60.0}, {2000.0, 60.0}, labels, codec);
  REQUIRE(nav_pts.size() == head_pts.size());
  for (std::size_t i = 0; i < nav_pts.size(); ++i)
    CHECK((nav_pts[i] - head_pts[i]).norm() < 1e-9);
}
