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
#include <hybridnav/geometry.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hybridnav;

namespace {

Covering default_covering()
{
  return Covering::build({0.0, 0.0}, 4.0, {20.0, 0.0}, 0.5);
}

// Distance from p to the ray apex + t*dir, t >= 0.
double ray_distance(const Point2& p, const Point2& apex, const Vec2& dir)
{
  const double t = std::max(0.0, (p - apex).dot(dir));
  return (p - (apex + t*dir)).norm();
}

// Reference distance to the complement wedge of O_1 in the aligned frame
// used by default_covering() (identity rotation): the set v + a >= |u|.
double wedge_one_distance(const Point2& p, double a)
{
  if (p.y + a >= std::abs(p.x))
    return 0.0;
  const double s = std::numbers::sqrt2/2.0;
  return std::min(
    ray_distance(p, {0.0, -a}, {s, s}),
    ray_distance(p, {0.0, -a}, {-s, s}));
}

} // namespace

//==============================================================================
TEST(Covering, DiamondRadii)
{
  const Covering c = default_covering();
  EXPECT_NEAR(c.apex_offset(), 8.0*std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(c.inscribed_radius(), 8.0, 1e-12);
  EXPECT_NEAR(c.frame_angle(), 0.0, 1e-15);
}

TEST(Covering, RegionsOnAxes)
{
  const Covering c = default_covering();
  EXPECT_TRUE(c.in_region(Mode::One, {0.0, -20.0}));
  EXPECT_FALSE(c.in_region(Mode::Two, {0.0, -20.0}));
  EXPECT_TRUE(c.in_region(Mode::Two, {0.0, 20.0}));
  EXPECT_FALSE(c.in_region(Mode::One, {0.0, 20.0}));
  EXPECT_TRUE(c.in_region(Mode::One, {20.0, 0.0}));
  EXPECT_TRUE(c.in_region(Mode::Two, {20.0, 0.0}));
  EXPECT_TRUE(c.in_diamond({0.0, 0.0}));
  EXPECT_FALSE(c.in_union({0.0, 0.0}));
}

TEST(Covering, VerticesOfRotatedFrame)
{
  const Covering c = Covering::build({1.0, 2.0}, 1.0, {1.0, 12.0}, 0.5);
  const double a = 2.0*std::numbers::sqrt2;
  const auto v = c.diamond_vertices();
  // +u points at the target, i.e. along +y in the world.
  EXPECT_NEAR(v[0].x, 1.0, 1e-12);
  EXPECT_NEAR(v[0].y, 2.0 + a, 1e-12);
  EXPECT_NEAR(v[1].x, 1.0 - a, 1e-12);
  EXPECT_NEAR(v[1].y, 2.0, 1e-12);
  EXPECT_NEAR(v[2].y, 2.0 - a, 1e-12);
  EXPECT_NEAR(v[3].x, 1.0 + a, 1e-12);
}

TEST(Covering, RejectsBadInputs)
{
  EXPECT_THROW(Covering::build({0.0, 0.0}, 0.0, {20.0, 0.0}, 0.5), Error);
  // 2*sqrt(2)*4 + 0.5 = 11.81
  EXPECT_THROW(Covering::build({0.0, 0.0}, 4.0, {11.8, 0.0}, 0.5), Error);
  EXPECT_NO_THROW(Covering::build({0.0, 0.0}, 4.0, {11.9, 0.0}, 0.5));
}

TEST(Covering, DistanceMatchesReference)
{
  const Covering c = default_covering();
  const double a = c.apex_offset();
  EXPECT_NEAR(c.dist_to_complement(Mode::One, {0.0, -20.0}),
    wedge_one_distance({0.0, -20.0}, a), 1e-12);
  EXPECT_NEAR(c.dist_to_complement(Mode::One, {0.0, -20.0}),
    20.0 - a, 1e-12);
  EXPECT_DOUBLE_EQ(c.dist_to_complement(Mode::One, {0.0, 0.0}), 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int i = 0; i < 2000; ++i)
  {
    const Point2 p{u(rng), u(rng)};
    ASSERT_NEAR(c.dist_to_complement(Mode::One, p), wedge_one_distance(p, a), 1e-9)
      << p.x << ", " << p.y;
    // Mode Two mirrors mode One through the u axis.
    ASSERT_NEAR(c.dist_to_complement(Mode::Two, p),
      wedge_one_distance({p.x, -p.y}, a), 1e-9);
  }
}

//==============================================================================
TEST(CoveringProperty, PartitionOfThePlane)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial)
  {
    const Point2 center{u(rng), u(rng)};
    const double th = ang(rng);
    const Point2 target = center + 25.0*Vec2{std::cos(th), std::sin(th)};
    const Covering c = Covering::build(center, 3.0, target, 0.5);
    EXPECT_TRUE(c.in_region(Mode::One, target));
    EXPECT_TRUE(c.in_region(Mode::Two, target));
    for (int i = 0; i < 500; ++i)
    {
      const Point2 p = center + Vec2{u(rng), u(rng)};
      ASSERT_NE(c.in_union(p), c.in_diamond(p));
      ASSERT_EQ(c.in_union(p), c.in_region(Mode::One, p) || c.in_region(Mode::Two, p));
      if (c.obstacle().contains(p))
        ASSERT_TRUE(c.in_diamond(p));
      // Inscribed radius 2*rho.
      if (distance(p, center) < 2.0*3.0 - 1e-9)
        ASSERT_TRUE(c.in_diamond(p));
    }
  }
}

TEST(CoveringProperty, ProjectionIsConsistent)
{
  const Covering c = Covering::build({2.0, -1.0}, 4.0, {-15.0, 9.0}, 0.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 3000; ++i)
  {
    const Point2 p{u(rng), u(rng)};
    for (Mode q : {Mode::One, Mode::Two})
    {
      const Projection pr = c.project_to_complement(q, p);
      ASSERT_NEAR(pr.distance, c.dist_to_complement(q, p), 1e-12);
      ASSERT_NEAR(distance(p, pr.nearest), pr.distance, 1e-9);
      ASSERT_FALSE(c.in_region(q, pr.nearest + 1e-9*(pr.nearest - p)));
      if (pr.distance > 0.0)
      {
        ASSERT_NEAR(pr.gradient.norm(), 1.0, 1e-12);
        ASSERT_TRUE(c.in_region(q, p));
      }
    }
  }
}

TEST(CoveringProperty, DistanceIsOneLipschitz)
{
  const Covering c = default_covering();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 3000; ++i)
  {
    const Point2 p{u(rng), u(rng)};
    const Point2 r{u(rng), u(rng)};
    for (Mode q : {Mode::One, Mode::Two})
    {
      ASSERT_LE(std::abs(c.dist_to_complement(q, p) - c.dist_to_complement(q, r)),
        distance(p, r) + 1e-12);
    }
  }
}

TEST(CoveringProperty, NearestInUnion)
{
  const Covering c = default_covering();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (int i = 0; i < 3000; ++i)
  {
    const Point2 p{u(rng), u(rng)};
    const Point2 r = c.nearest_in_union(p, 0.05);
    if (c.in_union(p))
    {
      ASSERT_EQ(r, p);
      continue;
    }
    ASSERT_TRUE(c.in_union(r));
    // 0.05 outside the nearest edge: |u| + |v| = a + 0.05*sqrt(2).
    const Point2 a = c.to_aligned(r);
    ASSERT_NEAR(std::abs(a.x) + std::abs(a.y),
      c.apex_offset() + 0.05*std::numbers::sqrt2, 1e-9);
  }
}

TEST(CoveringProperty, AlignedFrameRoundTrip)
{
  const Covering c = Covering::build({3.0, 4.0}, 2.0, {-10.0, -12.0}, 0.5);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i)
  {
    const Point2 p{u(rng), u(rng)};
    const Point2 back = c.to_world(c.to_aligned(p));
    ASSERT_NEAR(back.x, p.x, 1e-10);
    ASSERT_NEAR(back.y, p.y, 1e-10);
  }
  const Point2 t = c.to_aligned(c.target());
  EXPECT_NEAR(t.y, 0.0, 1e-10);
  EXPECT_GT(t.x, 0.0);
}
