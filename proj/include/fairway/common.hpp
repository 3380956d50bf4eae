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

#ifndef FAIRWAY__COMMON_HPP_
#define FAIRWAY__COMMON_HPP_

#include <cmath>
#include <stdexcept>
#include <string>

namespace fairway
{

/// Base class of all library errors.
struct Error : std::runtime_error
{
  explicit Error(const std::string & msg) : std::runtime_error(msg) {}
};

struct ProjectionOutOfRange : Error
{
  using Error::Error;
};
struct IndexOutOfRange : Error
{
  using Error::Error;
};
struct TooShort : Error
{
  using Error::Error;
};
struct DegenerateAttention : Error
{
  using Error::Error;
};
struct VariantMismatch : Error
{
  using Error::Error;
};
struct NonFinite : Error
{
  using Error::Error;
};
struct ManifestMismatch : Error
{
  using Error::Error;
};

/// Plain 2D point/vector in meters.
struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 & operator+=(const Vec2 & o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }

  double dot(const Vec2 & o) const { return x * o.x + y * o.y; }
  double cross(const Vec2 & o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }

  Vec2 normalized() const
  {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
  }

  // Counter-clockwise perpendicular (the "left" of this direction).
  Vec2 perp_left() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2 & v)
{
  return {s * v.x, s * v.y};
}

inline bool is_finite(const Vec2 & v)
{
  return std::isfinite(v.x) && std::isfinite(v.y);
}

}  // namespace fairway

#endif  // FAIRWAY__COMMON_HPP_
