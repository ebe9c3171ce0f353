/*
 * Copyright (C) 2026 The hybridnav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef HYBRIDNAV__VEC2_HPP
#define HYBRIDNAV__VEC2_HPP

#include <cmath>

namespace hybridnav {

//==============================================================================
/// Planar vector in meters. Used both for positions and displacements.
struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator/(const Vec2& a, double s) { return {a.x/s, a.y/s}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;

  constexpr double dot(const Vec2& o) const { return x*o.x + y*o.y; }
  constexpr double cross(const Vec2& o) const { return x*o.y - y*o.x; }
  constexpr double squared_norm() const { return x*x + y*y; }
  double norm() const { return std::hypot(x, y); }

  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
};

using Point2 = Vec2;

inline double distance(const Point2& a, const Point2& b)
{
  return (a - b).norm();
}

//==============================================================================
/// Planar rotation stored as (cos, sin).
class Rotation2
{
public:
  Rotation2() = default;
  explicit Rotation2(double angle)
  : _angle(angle), _c(std::cos(angle)), _s(std::sin(angle))
  {}

  double angle() const { return _angle; }

  Vec2 apply(const Vec2& v) const { return {_c*v.x - _s*v.y, _s*v.x + _c*v.y}; }
  Vec2 inverse_apply(const Vec2& v) const { return {_c*v.x + _s*v.y, -_s*v.x + _c*v.y}; }

private:
  double _angle = 0.0;
  double _c = 1.0;
  double _s = 0.0;
};

} // namespace hybridnav

#endif // HYBRIDNAV__VEC2_HPP
