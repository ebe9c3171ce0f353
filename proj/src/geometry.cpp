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

#include <hybridnav/geometry.hpp>
#include <hybridnav/error.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace hybridnav {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

} // anonymous namespace

//==============================================================================
std::string_view to_string(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::TargetTooClose: return "TargetTooClose";
    case ErrorCode::OutsideRegion: return "OutsideRegion";
    case ErrorCode::OutOfExtent: return "OutOfExtent";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::GradientUndefined: return "GradientUndefined";
    case ErrorCode::ZenoGuard: return "ZenoGuard";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::InsideObstacle: return "InsideObstacle";
    case ErrorCode::NoSaddleFound: return "NoSaddleFound";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

//==============================================================================
Covering Covering::build(
  const Point2& center,
  double radius,
  const Point2& target,
  double target_margin)
{
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(ErrorCode::InvalidParameter, "obstacle radius must be > 0");

  if (!(target_margin >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "target margin must be >= 0");

  if (!center.is_finite() || !target.is_finite())
    throw Error(ErrorCode::InvalidParameter, "non-finite coordinates");

  const double apex = 2.0*kSqrt2*radius;
  const Vec2 offset = target - center;
  if (offset.norm() <= apex + target_margin)
  {
    std::ostringstream msg;
    msg << "|p_T - p0| = " << offset.norm() << " must exceed "
        << apex + target_margin;
    throw Error(ErrorCode::TargetTooClose, msg.str());
  }

  Covering c;
  c._obstacle = Obstacle{center, radius};
  c._target = target;
  c._target_margin = target_margin;
  c._apex_offset = apex;
  c._frame = Rotation2(std::atan2(offset.y, offset.x));
  return c;
}

//==============================================================================
double Covering::inscribed_radius() const
{
  return _apex_offset/kSqrt2;
}

//==============================================================================
Point2 Covering::to_aligned(const Point2& world) const
{
  return _frame.inverse_apply(world - _obstacle.center);
}

//==============================================================================
Point2 Covering::to_world(const Point2& aligned) const
{
  return _obstacle.center + _frame.apply(aligned);
}

//==============================================================================
Vec2 Covering::wedge_local(Mode q, const Point2& world) const
{
  const Point2 a = to_aligned(world);
  // O_1's complement has its apex at (0, -a) and opens towards +v. Mirroring
  // v maps O_2 onto O_1.
  const double v = (q == Mode::One) ? a.y : -a.y;
  return {a.x, v + _apex_offset};
}

//==============================================================================
bool Covering::in_region(Mode q, const Point2& p) const
{
  const Vec2 w = wedge_local(q, p);
  return w.y < std::abs(w.x);
}

//==============================================================================
bool Covering::in_closure(Mode q, const Point2& p, double tolerance) const
{
  const Vec2 w = wedge_local(q, p);
  return w.y <= std::abs(w.x) + tolerance;
}

//==============================================================================
bool Covering::in_union(const Point2& p) const
{
  return in_region(Mode::One, p) || in_region(Mode::Two, p);
}

//==============================================================================
bool Covering::in_diamond(const Point2& p) const
{
  const Point2 a = to_aligned(p);
  return std::abs(a.x) + std::abs(a.y) <= _apex_offset;
}

//==============================================================================
Point2 Covering::nearest_in_union(const Point2& p, double margin) const
{
  if (in_union(p))
    return p;
  const Point2 a = to_aligned(p);
  const Vec2 normal{
    a.x < 0.0 ? -std::numbers::sqrt2/2.0 : std::numbers::sqrt2/2.0,
    a.y < 0.0 ? -std::numbers::sqrt2/2.0 : std::numbers::sqrt2/2.0};
  const double depth = (_apex_offset - std::abs(a.x) - std::abs(a.y))/std::numbers::sqrt2;
  return to_world(a + (depth + margin)*normal);
}

//==============================================================================
double Covering::dist_to_complement(Mode q, const Point2& p) const
{
  return project_to_complement(q, p).distance;
}

//==============================================================================
Projection Covering::project_to_complement(Mode q, const Point2& p) const
{
  const Vec2 w = wedge_local(q, p);
  const double au = std::abs(w.x);

  Projection out;
  if (w.y >= au)
  {
    out.nearest = p;
    return out;
  }

  // Fold onto u >= 0. The only candidate edge is the ray from the apex along
  // (1,1)/sqrt(2); the apex is nearest when the projection parameter is not
  // positive.
  const double t = (au + w.y)/kSqrt2;
  const double su = (w.x < 0.0) ? -1.0 : 1.0;
  Vec2 local_grad;
  Vec2 local_nearest;
  if (t <= 0.0)
  {
    out.distance = std::hypot(w.x, w.y);
    local_grad = Vec2{w.x, w.y}/out.distance;
    local_nearest = Vec2{0.0, 0.0};
  }
  else
  {
    out.distance = (au - w.y)/kSqrt2;
    local_grad = Vec2{su/kSqrt2, -1.0/kSqrt2};
    local_nearest = Vec2{su*t/kSqrt2, t/kSqrt2};
  }

  // Undo the apex shift and the mode mirror, then rotate back.
  const double sign = (q == Mode::One) ? 1.0 : -1.0;
  const Vec2 aligned_nearest{
    local_nearest.x, sign*(local_nearest.y - _apex_offset)};
  const Vec2 aligned_grad{local_grad.x, sign*local_grad.y};

  out.nearest = to_world(aligned_nearest);
  out.gradient = _frame.apply(aligned_grad);
  return out;
}

//==============================================================================
Wedge Covering::complement_wedge(Mode q) const
{
  const double sign = (q == Mode::One) ? 1.0 : -1.0;
  return Wedge{
    to_world({0.0, -sign*_apex_offset}),
    _frame.apply({0.0, sign})};
}

//==============================================================================
std::array<Point2, 4> Covering::diamond_vertices() const
{
  const double a = _apex_offset;
  return {
    to_world({a, 0.0}), to_world({0.0, a}),
    to_world({-a, 0.0}), to_world({0.0, -a})};
}

} // namespace hybridnav
