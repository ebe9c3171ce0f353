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

#include <hybridnav/potentials.hpp>
#include <hybridnav/error.hpp>

#include <cmath>
#include <sstream>

namespace hybridnav {

//==============================================================================
void BarrierParams::validate() const
{
  if (!(width > 0.0 && width <= 1.0))
    throw Error(ErrorCode::InvalidParameter, "barrier width must be in (0, 1]");
}

//==============================================================================
double attraction(const Point2& p, const Point2& target)
{
  return -(p - target).squared_norm();
}

//==============================================================================
double barrier(double s, const BarrierParams& params)
{
  if (s > params.width)
    return 0.0;
  if (s <= 0.0)
    return kInfinity;
  const double gap = s - params.width;
  return gap*gap*std::log(1.0/s);
}

//==============================================================================
double barrier_deriv(double s, const BarrierParams& params)
{
  if (s > params.width)
    return 0.0;
  if (s <= 0.0)
    return -kInfinity;
  const double gap = s - params.width;
  return 2.0*gap*std::log(1.0/s) - gap*gap/s;
}

//==============================================================================
double barrier_second_deriv(double s, const BarrierParams& params)
{
  if (s > params.width)
    return 0.0;
  if (s <= 0.0)
    return kInfinity;
  const double gap = s - params.width;
  return 2.0*std::log(1.0/s) - 4.0*gap/s + gap*gap/(s*s);
}

//==============================================================================
PotentialField::PotentialField(Covering covering, BarrierParams barrier)
: PotentialField(covering, barrier, covering.target())
{
  for (const Mode q : {Mode::One, Mode::Two})
  {
    const double d = _covering.dist_to_complement(q, _target);
    if (d*d <= _barrier.width)
    {
      std::ostringstream msg;
      msg << "barrier active at the target for mode " << static_cast<int>(q)
          << " (distance " << d << ")";
      throw Error(ErrorCode::InvalidParameter, msg.str());
    }
  }
}

//==============================================================================
PotentialField::PotentialField(
  Covering covering, BarrierParams barrier, Point2 target)
: _covering(std::move(covering)),
  _barrier(barrier),
  _target(target)
{
  _barrier.validate();
}

//==============================================================================
PotentialField PotentialField::retargeted(const Point2& target) const
{
  return PotentialField(_covering, _barrier, target);
}

//==============================================================================
double PotentialField::value(Mode q, const Point2& p) const
{
  if (!_covering.in_region(q, p))
    return kInfinity;

  const double d = _covering.dist_to_complement(q, p);
  return barrier(d*d, _barrier) - attraction(p, _target);
}

//==============================================================================
Vec2 PotentialField::gradient(Mode q, const Point2& p) const
{
  if (!_covering.in_region(q, p))
  {
    throw Error(ErrorCode::OutsideRegion,
      "gradient requested outside O_" + std::to_string(static_cast<int>(q)));
  }

  const Projection proj = _covering.project_to_complement(q, p);
  const double d = proj.distance;
  Vec2 g = 2.0*(p - _target);
  const double dB = barrier_deriv(d*d, _barrier);
  if (dB != 0.0)
    g += (dB*2.0*d)*proj.gradient;
  return g;
}

} // namespace hybridnav
