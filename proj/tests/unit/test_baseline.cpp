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

#include <hybridnav/baseline.hpp>
#include <hybridnav/error.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hybridnav;

namespace {

const Obstacle kObstacle{{0.0, 0.0}, 0.2};
const Point2 kTarget{10.0, 0.0};
constexpr double kBeta = 8.0;

NavigationFunction demo_nav(double beta = kBeta)
{
  return NavigationFunction(kTarget, kObstacle, beta, BarrierParams{1.0});
}

// x-derivative of phi on the negative x axis as a function of the
// clearance d, written out from phi = -|p - p_T|^2 - beta*B(d^2) with
// B(s) = (s - 1)^2 ln(1/s).
double axis_slope(double d)
{
  const double s = d*d;
  const double dB = s >= 1.0 ? 0.0 : 2.0*(s - 1.0)*std::log(1.0/s) - (s - 1.0)*(s - 1.0)/s;
  const double x = -(kObstacle.radius + d);
  return -2.0*(x - kTarget.x) + kBeta*dB*2.0*d;
}

double bisect_axis_saddle()
{
  double lo = 1e-6;  // slope -> -inf near the surface
  double hi = 1.0;   // pure attraction, slope > 0
  for (int i = 0; i < 200; ++i)
  {
    const double mid = 0.5*(lo + hi);
    (axis_slope(mid) < 0.0 ? lo : hi) = mid;
  }
  return -(kObstacle.radius + 0.5*(lo + hi));
}

} // namespace

//==============================================================================
TEST(Mat2, EigenDecomposition)
{
  const Mat2 m{2.0, 1.0, 2.0};
  const auto [lo, hi] = m.eigenvalues();
  EXPECT_NEAR(lo, 1.0, 1e-14);
  EXPECT_NEAR(hi, 3.0, 1e-14);
  const Vec2 v = m.eigenvector(hi);
  EXPECT_NEAR(v.norm(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(v.x), std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(v.x*v.y, 0.5, 1e-14);

  const Mat2 diag{-4.0, 0.0, 5.0};
  EXPECT_EQ(diag.eigenvalues(), std::make_pair(-4.0, 5.0));
  EXPECT_NEAR(std::abs(diag.eigenvector(5.0).y), 1.0, 1e-14);
}

TEST(NavigationFunction, ValueAndInsideObstacle)
{
  const NavigationFunction nav = demo_nav();
  EXPECT_DOUBLE_EQ(nav.value(kTarget), 0.0);
  // d = 0.5: beta*(0.25 - 1)^2*ln 4
  const Point2 p{0.0, 0.7};
  EXPECT_NEAR(nav.value(p), -(100.0 + 0.49) - kBeta*0.5625*std::log(4.0), 1e-12);
  EXPECT_THROW(nav.value({0.1, 0.0}), Error);
}

TEST(NavigationFunctionProperty, DerivativesMatchFiniteDifferences)
{
  const NavigationFunction nav = demo_nav();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int checked = 0;
  while (checked < 500)
  {
    const Point2 p{u(rng), u(rng)};
    if (kObstacle.clearance(p) < 0.05)
      continue;
    ++checked;
    const double h = 1e-6;
    const Vec2 ex{h, 0.0};
    const Vec2 ey{0.0, h};
    const Vec2 g = nav.gradient(p);
    const Vec2 fd{
      (nav.value(p + ex) - nav.value(p - ex))/(2.0*h),
      (nav.value(p + ey) - nav.value(p - ey))/(2.0*h)};
    ASSERT_LE((g - fd).norm(), 1e-5*std::max(1.0, g.norm()));

    const Mat2 H = nav.hessian(p);
    const Vec2 hx = (nav.gradient(p + ex) - nav.gradient(p - ex))/(2.0*h);
    const Vec2 hy = (nav.gradient(p + ey) - nav.gradient(p - ey))/(2.0*h);
    const double scale = std::max({1.0, std::abs(H.xx), std::abs(H.yy)});
    ASSERT_NEAR(H.xx, hx.x, 1e-4*scale);
    ASSERT_NEAR(H.xy, hx.y, 1e-4*scale);
    ASSERT_NEAR(H.xy, hy.x, 1e-4*scale);
    ASSERT_NEAR(H.yy, hy.y, 1e-4*scale);
  }
}

//==============================================================================
TEST(FindSaddle, MatchesOneDimensionalRoot)
{
  const SaddlePoint s = find_saddle(demo_nav());
  EXPECT_NEAR(s.position.x, bisect_axis_saddle(), 1e-9);
  EXPECT_NEAR(s.position.y, 0.0, 1e-12);
  EXPECT_LT(s.gradient_norm, 1e-8);
  EXPECT_LT(s.stable_eigenvalue, 0.0);
  EXPECT_GT(s.unstable_eigenvalue, 0.0);
  // Ascent escapes sideways; the axis is the stable manifold.
  EXPECT_NEAR(std::abs(s.unstable_direction.y), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(s.stable_direction.x), 1.0, 1e-9);
}

TEST(FindSaddle, NoRepulsionHasNoSaddle)
{
  EXPECT_THROW(find_saddle(demo_nav(0.0)), Error);
}

//==============================================================================
TEST(AdversarialDisturbance, RespectsBudgetAndRadius)
{
  const NavigationFunction nav = demo_nav();
  const SaddlePoint s = find_saddle(nav);
  const AdversarialDisturbance adv(0.1, s, 0.5);
  const Vec2 near = adv.against_smooth(s.position + Vec2{0.0, 0.05}, nav, 1.0, 0.01);
  EXPECT_NEAR(near.norm(), 0.1, 1e-12);
  // Pushes back toward the stable line (y = 0).
  EXPECT_LT(near.y, 0.0);
  EXPECT_EQ(adv.against_smooth(s.position + Vec2{0.0, 2.0}, nav, 1.0, 0.01), Vec2(0.0, 0.0));

  const AdversarialDisturbance idle(0.0, s, 0.5);
  EXPECT_EQ(idle.against_smooth(s.position + Vec2{0.0, 0.05}, nav, 1.0, 0.01), Vec2(0.0, 0.0));
  EXPECT_NEAR(std::abs(adv.escape_coordinate(s.position + Vec2{0.3, 0.2})), 0.2, 1e-9);
}

TEST(SimulateSmooth, ConvergesWithoutDisturbance)
{
  const NavigationFunction nav = demo_nav();
  const HybridArc arc = simulate_smooth(nav, {-3.0, 2.0},
    [](const Point2&) { return Vec2{}; }, SmoothParams{});
  EXPECT_EQ(arc.termination, Termination::Converged);
  EXPECT_LE(distance(arc.back().state.p, kTarget), 0.5);
  EXPECT_EQ(arc.jump_count(), 0u);
}

//==============================================================================
TEST(DemoStuck, SmoothStuckHybridConverges)
{
  const DemoResult r = demo_stuck(DemoConfig{});
  EXPECT_GT(r.smooth_final_distance, 5.0);
  EXPECT_EQ(r.hybrid.termination, Termination::Converged);
  EXPECT_LE(r.hybrid_final_distance, 0.5);
  EXPECT_LE(r.max_disturbance, 0.1 + 1e-12);
  EXPECT_NEAR(r.smooth_stuck_duration, 50.0, 1e-9);
}

TEST(DemoStuck, ZeroBudgetOffTheStableLineBothConverge)
{
  DemoConfig c;
  c.budget = 0.0;
  c.initial_offset = {0.0, 0.3};
  const DemoResult r = demo_stuck(c);
  EXPECT_EQ(r.max_disturbance, 0.0);
  EXPECT_LE(r.smooth_final_distance, 0.5);
  EXPECT_EQ(r.hybrid.termination, Termination::Converged);
}

TEST(DemoStuck, Deterministic)
{
  const DemoResult a = demo_stuck(DemoConfig{});
  const DemoResult b = demo_stuck(DemoConfig{});
  ASSERT_EQ(a.smooth.samples.size(), b.smooth.samples.size());
  EXPECT_EQ(a.smooth.back().state.p, b.smooth.back().state.p);
  EXPECT_EQ(a.hybrid.back().state.p, b.hybrid.back().state.p);
}
