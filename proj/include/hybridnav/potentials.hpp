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

#ifndef HYBRIDNAV__POTENTIALS_HPP
#define HYBRIDNAV__POTENTIALS_HPP

#include <hybridnav/geometry.hpp>

#include <limits>

namespace hybridnav {

/// Value returned by the potentials outside their region. Compares greater
/// than every finite energy.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

//==============================================================================
/// Activation width of the logarithmic barrier, measured in squared meters.
struct BarrierParams
{
  double width = 1.0;

  /// Throws Error(InvalidParameter) unless 0 < width <= 1.
  void validate() const;
};

/// Attraction term: -|p - target|^2.
double attraction(const Point2& p, const Point2& target);

/// B(s) = (s - w)^2 log(1/s) on (0, w], zero above w, +infinity at s = 0.
double barrier(double s, const BarrierParams& params);

/// dB/ds. Equals -infinity at s = 0.
double barrier_deriv(double s, const BarrierParams& params);

/// d^2B/ds^2 (zero above the activation width).
double barrier_second_deriv(double s, const BarrierParams& params);

//==============================================================================
/// The pair of localization functions
///
///   V_q(p) = B(d_q(p)^2) + |p - target|^2   for p in O_q,
///   V_q(p) = +infinity                      otherwise,
///
/// where d_q is the distance to R^2 \ O_q.
class PotentialField
{
public:
  /// Uses the covering's own target. Throws Error(InvalidParameter) if the
  /// barrier is active at the target, which would move the minimum of V_q
  /// away from it.
  PotentialField(Covering covering, BarrierParams barrier);

  /// Same covering with the attraction centered on `target` instead. Used
  /// for moving targets; no check on the barrier band is performed.
  PotentialField retargeted(const Point2& target) const;

  const Covering& covering() const { return _covering; }
  const Point2& target() const { return _target; }
  const BarrierParams& barrier_params() const { return _barrier; }

  double value(Mode q, const Point2& p) const;

  /// Throws Error(OutsideRegion) when p is not in O_q.
  Vec2 gradient(Mode q, const Point2& p) const;

  /// Proper indicator of the target on O_q. V_q itself is used, so the class
  /// K-infinity bounds on both sides are the identity.
  double proper_indicator(Mode q, const Point2& p) const { return value(q, p); }

private:
  PotentialField(Covering covering, BarrierParams barrier, Point2 target);

  Covering _covering;
  BarrierParams _barrier;
  Point2 _target;
};

} // namespace hybridnav

#endif // HYBRIDNAV__POTENTIALS_HPP
