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

#include <cmath>
#include <numbers>

namespace hybridnav {

namespace {

constexpr std::size_t kSaddleSeeds = 64;
constexpr int kNewtonIterations = 100;
constexpr double kSaddleTolerance = 1e-8;

} // anonymous namespace

//==============================================================================
std::pair<double, double> Mat2::eigenvalues() const
{
  const double mean = 0.5*(xx + yy);
  const double half_gap = std::hypot(0.5*(xx - yy), xy);
  return {mean - half_gap, mean + half_gap};
}

//==============================================================================
Vec2 Mat2::eigenvector(double eigenvalue) const
{
  const Vec2 a{xy, eigenvalue - xx};
  const Vec2 b{eigenvalue - yy, xy};
  const Vec2& v = a.squared_norm() >= b.squared_norm() ? a : b;
  const double n = v.norm();
  if (n > 1e-300)
    return v/n;
  // Multiple of the identity; any direction works.
  return std::abs(eigenvalue - xx) <= std::abs(eigenvalue - yy)
    ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
}

//==============================================================================
NavigationFunction::NavigationFunction(
  Point2 target, Obstacle obstacle, double repulsion, BarrierParams barrier)
: _target(target),
  _obstacle(obstacle),
  _repulsion(repulsion),
  _barrier(barrier)
{
  _barrier.validate();
  if (!(obstacle.radius > 0.0))
    throw Error(ErrorCode::InvalidParameter, "obstacle radius must be > 0");
  if (!(repulsion >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "repulsion weight must be >= 0");
}

//==============================================================================
void NavigationFunction::check(const Point2& p) const
{
  if (_obstacle.clearance(p) <= 0.0)
    throw Error(ErrorCode::InsideObstacle, "navigation function evaluated inside N");
}

//==============================================================================
double NavigationFunction::value(const Point2& p) const
{
  check(p);
  const double d = _obstacle.clearance(p);
  const double rep = _repulsion == 0.0 ? 0.0 : _repulsion*barrier(d*d, _barrier);
  return attraction(p, _target) - rep;
}

//==============================================================================
Vec2 NavigationFunction::gradient(const Point2& p) const
{
  check(p);
  Vec2 g = -2.0*(p - _target);
  const double d = _obstacle.clearance(p);
  const double dB = barrier_deriv(d*d, _barrier);
  if (_repulsion != 0.0 && dB != 0.0)
  {
    const Vec2 radial = p - _obstacle.center;
    g -= (_repulsion*dB*2.0*d/radial.norm())*radial;
  }
  return g;
}

//==============================================================================
Mat2 NavigationFunction::hessian(const Point2& p) const
{
  check(p);
  Mat2 h{-2.0, 0.0, -2.0};
  const double d = _obstacle.clearance(p);
  const double s = d*d;
  if (_repulsion == 0.0 || s > _barrier.width)
    return h;

  const Vec2 radial = p - _obstacle.center;
  const double r = radial.norm();
  const Vec2 n = radial/r;

  // Radial profile f(r) = beta*B((r - rho)^2).
  const double f1 = _repulsion*barrier_deriv(s, _barrier)*2.0*d;
  const double f2 = _repulsion*(
    barrier_second_deriv(s, _barrier)*4.0*s + 2.0*barrier_deriv(s, _barrier));
  const double tangential = f1/r;

  h.xx -= f2*n.x*n.x + tangential*(1.0 - n.x*n.x);
  h.xy -= f2*n.x*n.y - tangential*n.x*n.y;
  h.yy -= f2*n.y*n.y + tangential*(1.0 - n.y*n.y);
  return h;
}

//==============================================================================
SaddlePoint find_saddle(const NavigationFunction& nav)
{
  const Obstacle& obs = nav.obstacle();
  Vec2 away = obs.center - nav.target();
  if (away.norm() == 0.0)
    throw Error(ErrorCode::NoSaddleFound, "target coincides with obstacle center");
  away = away/away.norm();

  // The repulsion is only active within sqrt(width) of the surface.
  const double band = std::sqrt(nav.barrier_params().width);
  for (std::size_t i = 1; i < kSaddleSeeds; ++i)
  {
    Point2 x = obs.center
      + (obs.radius + band*static_cast<double>(i)/kSaddleSeeds)*away;

    for (int it = 0; it < kNewtonIterations; ++it)
    {
      const Vec2 g = nav.gradient(x);
      if (g.norm() < 1e-13*(1.0 + (x - nav.target()).norm()))
        break;

      const Mat2 h = nav.hessian(x);
      const double det = h.xx*h.yy - h.xy*h.xy;
      if (det == 0.0 || !std::isfinite(det))
        break;
      const Vec2 step{
        ( h.yy*g.x - h.xy*g.y)/det,
        (-h.xy*g.x + h.xx*g.y)/det};

      double scale = 1.0;
      Point2 next = x - step;
      while (obs.clearance(next) <= 0.0 && scale > 1e-12)
      {
        scale *= 0.5;
        next = x - scale*step;
      }
      if (obs.clearance(next) <= 0.0)
        break;
      x = next;
    }

    if (obs.clearance(x) <= 0.0)
      continue;
    const Vec2 g = nav.gradient(x);
    if (!(g.norm() < kSaddleTolerance))
      continue;
    if ((x - nav.target()).norm() < 1e-6)
      continue;

    const Mat2 h = nav.hessian(x);
    const auto [lo, hi] = h.eigenvalues();
    if (!(lo < 0.0 && hi > 0.0))
      continue;

    SaddlePoint sp;
    sp.position = x;
    sp.gradient_norm = g.norm();
    sp.hessian = h;
    sp.stable_eigenvalue = lo;
    sp.unstable_eigenvalue = hi;
    sp.stable_direction = h.eigenvector(lo);
    sp.unstable_direction = h.eigenvector(hi);
    return sp;
  }

  throw Error(ErrorCode::NoSaddleFound,
    "no non-target critical point found behind the obstacle");
}

//==============================================================================
AdversarialDisturbance::AdversarialDisturbance(
  double budget,
  SaddlePoint saddle,
  double engagement_radius,
  std::size_t directions)
: _budget(budget),
  _saddle(saddle),
  _engagement_radius(engagement_radius),
  _directions(directions)
{
  if (!(budget >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "disturbance budget must be >= 0");
  if (directions == 0)
    throw Error(ErrorCode::InvalidParameter, "need at least one direction");
}

//==============================================================================
double AdversarialDisturbance::escape_coordinate(const Point2& p) const
{
  return (p - _saddle.position).dot(_saddle.unstable_direction);
}

//==============================================================================
Vec2 AdversarialDisturbance::select(
  const Point2& p,
  const std::function<std::optional<Point2>(const Vec2& e)>& successor) const
{
  if (_budget <= 0.0 || (p - _saddle.position).norm() > _engagement_radius)
    return {};

  Vec2 best;
  double best_cost = kInfinity;
  for (std::size_t i = 0; i < _directions; ++i)
  {
    const double angle = 2.0*std::numbers::pi*static_cast<double>(i)
      /static_cast<double>(_directions);
    const Vec2 e{_budget*std::cos(angle), _budget*std::sin(angle)};
    const std::optional<Point2> next = successor(e);
    if (!next)
      continue;
    const double cost = std::abs(escape_coordinate(*next));
    if (cost < best_cost)
    {
      best_cost = cost;
      best = e;
    }
  }
  return best;
}

//==============================================================================
Vec2 AdversarialDisturbance::against_smooth(
  const Point2& p, const NavigationFunction& nav, double gain, double step) const
{
  return select(p, [&](const Vec2& e) -> std::optional<Point2> {
    const Point2 perceived = p + e;
    if (nav.obstacle().clearance(perceived) <= 0.0)
      return std::nullopt;
    return p + (step*gain)*nav.gradient(perceived);
  });
}

//==============================================================================
Vec2 AdversarialDisturbance::against_hybrid(
  const HybridState& state,
  const PotentialField& field,
  double gain,
  double step) const
{
  return select(state.p, [&](const Vec2& e) -> std::optional<Point2> {
    const Point2 perceived = state.p + e;
    if (!field.covering().in_region(state.q, perceived))
      return std::nullopt;
    return state.p - (step*gain)*field.gradient(state.q, perceived);
  });
}

//==============================================================================
HybridArc simulate_smooth(
  const NavigationFunction& nav,
  const Point2& initial,
  const std::function<Vec2(const Point2&)>& disturbance,
  const SmoothParams& params)
{
  if (!(params.step > 0.0) || !(params.gain > 0.0))
    throw Error(ErrorCode::InvalidParameter, "smooth loop needs step, gain > 0");

  HybridArc arc;
  Point2 p = initial;
  std::size_t steps = 0;
  const auto max_steps = static_cast<std::size_t>(
    std::llround(std::ceil(params.horizon/params.step - 1e-9)));
  const double h = params.step;
  const double k = params.gain;
  const Obstacle& obs = nav.obstacle();

  auto record = [&](const Vec2& e) {
    ArcSample s;
    s.time = {static_cast<double>(steps)*h, 0};
    s.state = {p, Mode::One};
    s.estimate = p + e;
    s.target = nav.target();
    s.v1 = s.v2 = obs.clearance(p) > 0.0 ? -nav.value(p) : kInfinity;
    s.event = Event::Flow;
    arc.samples.push_back(s);
  };

  while (true)
  {
    if (obs.clearance(p) <= 0.0)
    {
      record({});
      arc.termination = Termination::LeftDomain;
      arc.detail = "trajectory entered the obstacle";
      break;
    }

    const Vec2 e = disturbance ? disturbance(p) : Vec2{};
    record(e);

    if ((p - nav.target()).norm() <= params.delta)
    {
      arc.termination = Termination::Converged;
      break;
    }
    if (steps >= max_steps)
    {
      arc.termination = Termination::TimeLimit;
      break;
    }

    const Point2 x1 = p + e;
    if (obs.clearance(x1) <= 0.0)
    {
      arc.termination = Termination::LeftDomain;
      arc.detail = "perceived position inside the obstacle";
      break;
    }

    auto rhs = [&](const Point2& x) { return k*nav.gradient(x); };
    const Vec2 k1 = rhs(x1);
    Point2 next = p + h*k1;
    const Point2 x2 = x1 + (0.5*h)*k1;
    if (obs.clearance(x2) > 0.0)
    {
      const Vec2 k2 = rhs(x2);
      const Point2 x3 = x1 + (0.5*h)*k2;
      if (obs.clearance(x3) > 0.0)
      {
        const Vec2 k3 = rhs(x3);
        const Point2 x4 = x1 + h*k3;
        if (obs.clearance(x4) > 0.0)
          next = p + (h/6.0)*(k1 + 2.0*k2 + 2.0*k3 + rhs(x4));
      }
    }
    p = next;
    ++steps;
  }
  return arc;
}

//==============================================================================
DemoResult demo_stuck(const DemoConfig& config)
{
  const NavigationFunction nav(
    config.target, config.obstacle, config.repulsion, config.barrier);

  DemoResult out;
  out.saddle = find_saddle(nav);
  out.initial = out.saddle.position + config.initial_offset;

  const AdversarialDisturbance adversary(
    config.budget, out.saddle, config.engagement_radius, config.directions);

  SmoothParams sp = config.smooth;
  sp.horizon = config.horizon;
  out.smooth = simulate_smooth(nav, out.initial,
    [&](const Point2& p) {
      const Vec2 e = adversary.against_smooth(p, nav, sp.gain, sp.step);
      out.max_disturbance = std::max(out.max_disturbance, e.norm());
      return e;
    }, sp);

  const Covering cov = Covering::build(
    config.obstacle.center, config.obstacle.radius, config.target,
    config.target_margin);
  const PotentialField field(cov, config.barrier);

  ControllerParams hp = config.hybrid;
  hp.t_max = config.horizon;
  SimulationSetup setup{field, out.initial, std::nullopt, exact_estimator(), {}};
  setup.estimator = [&](const HybridState& s, double, const std::optional<Point2>&) {
    const Vec2 e = adversary.against_hybrid(s, field, hp.gain, hp.step);
    out.max_disturbance = std::max(out.max_disturbance, e.norm());
    return EstimateResult{s.p + e, false};
  };
  out.hybrid = simulate(setup, hp);

  out.smooth_final_distance = (out.smooth.back().state.p - config.target).norm();
  out.hybrid_final_distance = (out.hybrid.back().state.p - config.target).norm();

  out.smooth_stuck_duration = out.smooth.back().time.t;
  for (const ArcSample& s : out.smooth.samples)
  {
    const double r = (s.state.p - out.saddle.position).norm();
    out.smooth_max_saddle_distance = std::max(out.smooth_max_saddle_distance, r);
    if (r > 1.0 && s.time.t < out.smooth_stuck_duration)
      out.smooth_stuck_duration = s.time.t;
  }
  return out;
}

} // namespace hybridnav
