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

#include <hybridnav/error.hpp>
#include <hybridnav/potentials.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hybridnav;

namespace {

PotentialField default_field(double width = 1.0)
{
  return PotentialField(
    Covering::build({0.0, 0.0}, 4.0, {20.0, 0.0}, 0.5), BarrierParams{width});
}

double fd_derivative(double (*f)(double, const BarrierParams&),
  double s, const BarrierParams& b, double h)
{
  return (f(s + h, b) - f(s - h, b))/(2.0*h);
}

} // namespace

//==============================================================================
TEST(Barrier, ClosedFormValues)
{
  const BarrierParams b{1.0};
  // (0.5 - 1)^2 * ln 2
  EXPECT_NEAR(barrier(0.5, b), 0.25*std::log(2.0), 1e-15);
  // (0.1 - 1)^2 * ln 10
  EXPECT_NEAR(barrier(0.1, b), 0.81*std::log(10.0), 1e-14);
  EXPECT_DOUBLE_EQ(barrier(1.0, b), 0.0);
  EXPECT_DOUBLE_EQ(barrier(3.0, b), 0.0);
  EXPECT_EQ(barrier(0.0, b), kInfinity);

  const BarrierParams narrow{0.25};
  EXPECT_DOUBLE_EQ(barrier(0.3, narrow), 0.0);
  EXPECT_NEAR(barrier(0.125, narrow), 0.125*0.125*std::log(8.0), 1e-15);
}

TEST(Barrier, DerivativesMatchFiniteDifferences)
{
  for (double w : {1.0, 0.5, 0.1})
  {
    const BarrierParams b{w};
    for (double s = 0.01*w; s < 0.99*w; s += 0.037*w)
    {
      const double h = 1e-6*s;
      EXPECT_NEAR(barrier_deriv(s, b), fd_derivative(&barrier, s, b, h),
        1e-6*std::max(1.0, std::abs(barrier_deriv(s, b))));
      EXPECT_NEAR(barrier_second_deriv(s, b), fd_derivative(&barrier_deriv, s, b, h),
        1e-5*std::max(1.0, std::abs(barrier_second_deriv(s, b))));
    }
    EXPECT_DOUBLE_EQ(barrier_deriv(1.5*w, b), 0.0);
    // C^1 at the activation width.
    EXPECT_NEAR(barrier_deriv(w*(1.0 - 1e-9), b), 0.0, 1e-8);
  }
  EXPECT_EQ(barrier_deriv(0.0, BarrierParams{1.0}), -kInfinity);
}

TEST(Barrier, RejectsWidthOutsideUnitInterval)
{
  EXPECT_THROW(BarrierParams{0.0}.validate(), Error);
  EXPECT_THROW(BarrierParams{1.5}.validate(), Error);
  EXPECT_NO_THROW(BarrierParams{1.0}.validate());
}

TEST(Attraction, NegativeSquaredDistance)
{
  EXPECT_DOUBLE_EQ(attraction({3.0, 4.0}, {0.0, 0.0}), -25.0);
}

//==============================================================================
TEST(PotentialField, ValueAwayFromTheBarrier)
{
  const PotentialField f = default_field();
  EXPECT_DOUBLE_EQ(f.value(Mode::One, {20.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(f.value(Mode::Two, {20.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(f.value(Mode::One, {0.0, -30.0}), 400.0 + 900.0);
  EXPECT_EQ(f.value(Mode::Two, {0.0, -30.0}), kInfinity);
  EXPECT_EQ(f.value(Mode::One, {0.0, 0.0}), kInfinity);
  EXPECT_THROW(f.gradient(Mode::Two, {0.0, -30.0}), Error);

  const Vec2 g = f.gradient(Mode::One, {0.0, -30.0});
  EXPECT_DOUBLE_EQ(g.x, -40.0);
  EXPECT_DOUBLE_EQ(g.y, -60.0);
}

TEST(PotentialField, ValueInsideTheBarrierBand)
{
  const PotentialField f = default_field();
  const Covering& c = f.covering();
  // 0.5 m below the lower vertex, along the v axis of O_1.
  const Point2 p{0.0, -c.apex_offset() - 0.5};
  const double d = c.dist_to_complement(Mode::One, p);
  EXPECT_NEAR(d, 0.5, 1e-12);
  const double s = d*d;
  const double expected = (s - 1.0)*(s - 1.0)*std::log(1.0/s) + (p - f.target()).squared_norm();
  EXPECT_NEAR(f.value(Mode::One, p), expected, 1e-12);
}

TEST(PotentialField, RejectsTargetInsideBand)
{
  // Target 0.3 m outside the diamond vertex: the barrier would be active
  // there with width 1.
  const double a = 2.0*std::sqrt(2.0)*4.0;
  EXPECT_THROW(PotentialField(
    Covering::build({0.0, 0.0}, 4.0, {a + 0.6, 0.0}, 0.5), BarrierParams{1.0}), Error);
}

//==============================================================================
TEST(PotentialFieldProperty, GradientMatchesCentralDifferences)
{
  const PotentialField f = default_field();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  int checked = 0;
  while (checked < 2000)
  {
    const Point2 p{u(rng), u(rng)};
    for (Mode q : {Mode::One, Mode::Two})
    {
      const double d = f.covering().dist_to_complement(q, p);
      if (d < 0.05)
        continue;
      const double h = 1e-6;
      const Vec2 fd{
        (f.value(q, p + Vec2{h, 0.0}) - f.value(q, p - Vec2{h, 0.0}))/(2.0*h),
        (f.value(q, p + Vec2{0.0, h}) - f.value(q, p - Vec2{0.0, h}))/(2.0*h)};
      const Vec2 g = f.gradient(q, p);
      ASSERT_LE((g - fd).norm(), 1e-5*std::max(1.0, g.norm()))
        << "q=" << index(q) + 1 << " p=" << p.x << "," << p.y;
      ++checked;
    }
  }
}

TEST(PotentialFieldProperty, TargetIsTheUniqueMinimum)
{
  const PotentialField f = default_field();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int i = 0; i < 5000; ++i)
  {
    const Point2 p{u(rng), u(rng)};
    for (Mode q : {Mode::One, Mode::Two})
    {
      const double v = f.value(q, p);
      ASSERT_GE(v, (p - f.target()).squared_norm());
      ASSERT_EQ(std::isfinite(v), f.covering().in_region(q, p));
    }
  }
}

TEST(PotentialField, RetargetedKeepsTheCovering)
{
  const PotentialField f = default_field();
  const PotentialField g = f.retargeted({18.0, 5.0});
  EXPECT_EQ(g.covering().apex_offset(), f.covering().apex_offset());
  EXPECT_EQ(g.covering().frame_angle(), f.covering().frame_angle());
  EXPECT_DOUBLE_EQ(g.value(Mode::Two, {18.0, 5.0}), 0.0);
}
