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

#ifndef HYBRIDNAV__GEOMETRY_HPP
#define HYBRIDNAV__GEOMETRY_HPP

#include <hybridnav/vec2.hpp>

#include <array>

namespace hybridnav {

//==============================================================================
/// Logic mode of the hybrid controller. Each mode owns one region of the
/// covering and one potential field.
enum class Mode : int
{
  One = 1,
  Two = 2
};

constexpr Mode other(Mode q) { return q == Mode::One ? Mode::Two : Mode::One; }
constexpr int index(Mode q) { return static_cast<int>(q) - 1; }

//==============================================================================
/// Closed disk {p : |p - center| <= radius}.
struct Obstacle
{
  Point2 center;
  double radius = 1.0;

  bool contains(const Point2& p) const
  {
    return (p - center).norm() <= radius;
  }

  /// Signed clearance from the disk surface (negative inside).
  double clearance(const Point2& p) const
  {
    return (p - center).norm() - radius;
  }
};

//==============================================================================
/// Closed convex cone bounded by two 45 degree rays meeting at `apex`. The
/// cone opens along `opening` (a unit vector, world frame).
struct Wedge
{
  Point2 apex;
  Vec2 opening;
};

//==============================================================================
/// Result of projecting a point onto the closed complement of a region.
struct Projection
{
  /// Euclidean distance to the complement, zero when inside it.
  double distance = 0.0;

  /// Nearest point of the complement (world frame).
  Point2 nearest;

  /// Unit gradient of the distance function (world frame). Zero when the
  /// point lies in the complement.
  Vec2 gradient;
};

//==============================================================================
/// Covering {O_1, O_2} of the plane minus a diamond around the obstacle.
///
/// Internally everything is evaluated in an aligned frame whose origin is
/// the obstacle center and whose +x axis points at the target. In that frame
/// with a = 2*sqrt(2)*radius:
///
///   O_1 = { v < |u| - a }   (complement wedge has apex (0,-a), opens up)
///   O_2 = { v > a - |u| }   (complement wedge has apex (0, a), opens down)
///
/// so that O_1 u O_2 is the plane minus the diamond |u| + |v| <= a, whose
/// inscribed radius is 2*radius.
///
/// Instances are immutable after construction.
class Covering
{
public:
  /// Default tolerance for closure membership tests.
  static constexpr double closure_tolerance = 1e-9;

  /// Throws Error(TargetTooClose) when |target - center| <= 2*sqrt(2)*radius
  /// + target_margin and Error(InvalidParameter) when radius <= 0.
  static Covering build(
    const Point2& center,
    double radius,
    const Point2& target,
    double target_margin);

  const Obstacle& obstacle() const { return _obstacle; }
  const Point2& target() const { return _target; }
  double target_margin() const { return _target_margin; }
  double frame_angle() const { return _frame.angle(); }

  /// Distance from the obstacle center to a diamond vertex.
  double apex_offset() const { return _apex_offset; }
  double inscribed_radius() const;
  double circumscribed_radius() const { return _apex_offset; }

  Point2 to_aligned(const Point2& world) const;
  Point2 to_world(const Point2& aligned) const;

  /// Membership in the open set O_q.
  bool in_region(Mode q, const Point2& p) const;

  /// Membership in closure(O_q), widened by `tolerance` meters.
  bool in_closure(Mode q, const Point2& p,
    double tolerance = closure_tolerance) const;

  /// Membership in the open set O = O_1 u O_2.
  bool in_union(const Point2& p) const;

  /// Membership in the closed diamond (the complement of O).
  bool in_diamond(const Point2& p) const;

  /// p itself when p is in O; otherwise the foot of p on the nearest diamond
  /// edge, moved `margin` meters outward.
  Point2 nearest_in_union(const Point2& p, double margin) const;

  /// Distance from p to the closed wedge R^2 \ O_q.
  double dist_to_complement(Mode q, const Point2& p) const;

  /// Distance, nearest point and distance gradient with respect to R^2 \ O_q.
  Projection project_to_complement(Mode q, const Point2& p) const;

  /// The closed wedge R^2 \ O_q.
  Wedge complement_wedge(Mode q) const;

  /// Diamond vertices in world coordinates: +u, +v, -u, -v in the aligned
  /// frame.
  std::array<Point2, 4> diamond_vertices() const;

private:
  Covering() = default;

  // Position relative to the apex of the complement wedge of O_q, in a frame
  // where that wedge opens along +v. Mode Two is the mirror image of mode One.
  Vec2 wedge_local(Mode q, const Point2& world) const;

  Obstacle _obstacle;
  Point2 _target;
  double _target_margin = 0.0;
  double _apex_offset = 0.0;
  Rotation2 _frame;
};

} // namespace hybridnav

#endif // HYBRIDNAV__GEOMETRY_HPP
