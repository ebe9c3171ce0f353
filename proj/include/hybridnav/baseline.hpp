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

#ifndef HYBRIDNAV__BASELINE_HPP
#define HYBRIDNAV__BASELINE_HPP

#include <hybridnav/hybrid.hpp>

#include <functional>
#include <optional>

namespace hybridnav {

//==============================================================================
/// Symmetric 2x2 matrix.
struct Mat2
{
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  Vec2 apply(const Vec2& v) const { return {xx*v.x + xy*v.y, xy*v.x + yy*v.y}; }

  /// Eigenvalues in ascending order.
  std::pair<double, double> eigenvalues() const;

  /// Unit eigenvector for `eigenvalue`.
  Vec2 eigenvector(double eigenvalue) const;
};

//==============================================================================
/// Smooth navigation function
///
///   phi(p) = -|p - target|^2 - beta*B(dist(p, N)^2),
///
/// maximized at the target and driven to -infinity at the obstacle surface.
/// The closed loop ascends it: p' = k grad phi(p + e).
class NavigationFunction
{
public:
  NavigationFunction(
    Point2 target, Obstacle obstacle, double repulsion, BarrierParams barrier);

  const Point2& target() const { return _target; }
  const Obstacle& obstacle() const { return _obstacle; }
  double repulsion() const { return _repulsion; }
  const BarrierParams& barrier_params() const { return _barrier; }

  /// Throws Error(InsideObstacle) for p in the obstacle disk.
  double value(const Point2& p) const;
  Vec2 gradient(const Point2& p) const;
  Mat2 hessian(const Point2& p) const;

private:
  void check(const Point2& p) const;

  Point2 _target;
  Obstacle _obstacle;
  double _repulsion;
  BarrierParams _barrier;
};

//==============================================================================
struct SaddlePoint
{
  Point2 position;
  double gradient_norm = 0.0;
  Mat2 hessian;
  double stable_eigenvalue = 0.0;
  double unstable_eigenvalue = 0.0;

  /// Unit eigenvectors of the Hessian. For the ascent dynamics the positive
  /// eigenvalue is the escape direction.
  Vec2 stable_direction;
  Vec2 unstable_direction;
};

/// Newton iteration on grad phi = 0 seeded along the ray from the obstacle
/// center pointing away from the target. Throws Error(NoSaddleFound) if no
/// seed converges to a non-target critical point with an indefinite Hessian.
SaddlePoint find_saddle(const NavigationFunction& nav);

//==============================================================================
/// Greedy bounded perturbation that keeps a trajectory pinned to the stable
/// manifold of the saddle, approximated by the line through the saddle along
/// its stable eigenvector.
class AdversarialDisturbance
{
public:
  static constexpr std::size_t default_directions = 16;

  AdversarialDisturbance(
    double budget,
    SaddlePoint saddle,
    double engagement_radius,
    std::size_t directions = default_directions);

  double budget() const { return _budget; }
  double engagement_radius() const { return _engagement_radius; }
  const SaddlePoint& saddle() const { return _saddle; }

  /// Offset of p from the stable line, measured along the unstable direction.
  double escape_coordinate(const Point2& p) const;

  /// Picks the candidate e (|e| = budget, evenly spaced directions) whose
  /// one-step successor lies closest to the stable line. `successor` returns
  /// nullopt for inadmissible candidates. Returns zero outside the engagement
  /// radius, for a zero budget, or when no candidate is admissible.
  Vec2 select(
    const Point2& p,
    const std::function<std::optional<Point2>(const Vec2& e)>& successor) const;

  /// Adversary against the smooth loop, using one Euler step of
  /// p' = k grad phi(p + e).
  Vec2 against_smooth(
    const Point2& p, const NavigationFunction& nav, double gain, double step) const;

  /// Adversary against the hybrid flow in mode q, using one Euler step of
  /// p' = -k grad V_q(p + e). Candidates with p + e outside O_q are skipped.
  Vec2 against_hybrid(
    const HybridState& state,
    const PotentialField& field,
    double gain,
    double step) const;

private:
  double _budget;
  SaddlePoint _saddle;
  double _engagement_radius;
  std::size_t _directions;
};

//==============================================================================
struct SmoothParams
{
  double gain = 1.0;
  double step = 0.01;
  double horizon = 50.0;
  double delta = 0.5;
};

/// Integrates p' = k grad phi(p + e(p)) with RK4, holding e over each step.
/// The returned arc uses the standard sample layout: q is always One,
/// `estimate` is p + e, and v1 = v2 = -phi(p). Stops on reaching the delta
/// ball or the horizon.
HybridArc simulate_smooth(
  const NavigationFunction& nav,
  const Point2& initial,
  const std::function<Vec2(const Point2&)>& disturbance,
  const SmoothParams& params);

//==============================================================================
struct DemoConfig
{
  Obstacle obstacle{{0.0, 0.0}, 0.2};
  Point2 target{10.0, 0.0};
  double target_margin = 0.5;
  double repulsion = 8.0;
  BarrierParams barrier;
  double budget = 0.1;
  double engagement_radius = 0.5;
  std::size_t directions = AdversarialDisturbance::default_directions;
  double horizon = 50.0;

  /// Start point relative to the saddle.
  Vec2 initial_offset{0.0, 0.0};

  SmoothParams smooth;
  ControllerParams hybrid;
};

struct DemoResult
{
  SaddlePoint saddle;
  Point2 initial;
  HybridArc smooth;
  HybridArc hybrid;
  double smooth_final_distance = 0.0;
  double hybrid_final_distance = 0.0;
  double smooth_max_saddle_distance = 0.0;

  /// Time the smooth arc spent within 1 m of the saddle.
  double smooth_stuck_duration = 0.0;

  /// Largest |e| applied to either loop.
  double max_disturbance = 0.0;
};

/// Runs both controllers from the same start under the same disturbance
/// budget.
DemoResult demo_stuck(const DemoConfig& config);

} // namespace hybridnav

#endif // HYBRIDNAV__BASELINE_HPP
