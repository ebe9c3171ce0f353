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

#include <hybridnav/scenarios.hpp>
#include <hybridnav/error.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace hybridnav {

namespace {

//==============================================================================
template<typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& f)
{
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1)
  {
    for (std::size_t i = 0; i < n; ++i)
      f(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
  {
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < n; i = next++)
        f(i);
    });
  }
}

//==============================================================================
double segment_distance(const Point2& a, const Point2& b, const Point2& c)
{
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  double s = len2 > 0.0 ? (c - a).dot(ab)/len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (a + s*ab - c).norm();
}

constexpr std::uint64_t kLeaderStream = 0x6c65616465720001ULL;

} // anonymous namespace

//==============================================================================
std::string_view to_string(TargetMode m)
{
  switch (m)
  {
    case TargetMode::Static: return "static";
    case TargetMode::Waypoints: return "waypoints";
    case TargetMode::Leader: return "leader";
  }
  return "static";
}

//==============================================================================
Point2 TargetProvider::at(double t) const
{
  if (mode == TargetMode::Static || path.empty())
    return position;
  if (path.size() == 1 || speed <= 0.0)
    return path.front();

  double remaining = std::max(0.0, t)*speed;
  for (std::size_t i = 1; i < path.size(); ++i)
  {
    const Vec2 seg = path[i] - path[i - 1];
    const double len = seg.norm();
    if (remaining <= len)
      return len > 0.0 ? path[i - 1] + (remaining/len)*seg : path[i];
    remaining -= len;
  }
  return path.back();
}

//==============================================================================
Point2 TargetProvider::initial() const
{
  return at(0.0);
}

//==============================================================================
double TargetProvider::path_duration() const
{
  if (mode == TargetMode::Static || path.size() < 2 || speed <= 0.0)
    return 0.0;
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i)
    len += (path[i] - path[i - 1]).norm();
  return len/speed;
}

//==============================================================================
void TargetProvider::validate() const
{
  if (mode == TargetMode::Static)
  {
    if (!position.is_finite())
      throw Error(ErrorCode::InvalidParameter, "target position must be finite");
    if (window && !window->contains(position))
      throw Error(ErrorCode::InvalidParameter, "target outside its window");
    return;
  }

  if (path.empty())
    throw Error(ErrorCode::InvalidParameter, "moving target needs a path");
  if (!(speed >= 0.0) || !std::isfinite(speed))
    throw Error(ErrorCode::InvalidParameter, "target speed must be >= 0");
  for (const Point2& p : path)
  {
    if (!p.is_finite())
      throw Error(ErrorCode::InvalidParameter, "path vertices must be finite");
    if (window && !window->contains(p))
      throw Error(ErrorCode::InvalidParameter, "path leaves the target window");
  }
}

//==============================================================================
RenderSpec Scenario::render_spec() const
{
  RenderSpec spec;
  spec.extent = extent;
  spec.width = perception.width;
  spec.height = perception.height;
  spec.blob_sigma = perception.blob_sigma;
  return spec;
}

//==============================================================================
Covering Scenario::covering() const
{
  return Covering::build(
    obstacle.center, obstacle.radius, target.initial(), target_margin);
}

//==============================================================================
PotentialField Scenario::field() const
{
  return PotentialField(covering(), barrier);
}

//==============================================================================
void Scenario::validate() const
{
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::InvalidParameter, msg);
  };

  controller.validate();
  barrier.validate();
  errors.validate();
  leader_errors.validate();
  target.validate();

  if (!(obstacle.radius > 0.0))
    fail("obstacle radius must be > 0");
  if (!(extent.width() > 0.0 && extent.height() > 0.0))
    fail("extent must have positive width and height");
  if (!(target_margin >= 0.0))
    fail("target margin must be >= 0");
  if (!(tracking_bound > 0.0))
    fail("tracking bound must be > 0");
  if (initial_positions.empty())
    fail("at least one initial position is required");
  if (paired_occlusion && errors.occlusions.empty())
    fail("paired occlusion runs need at least one occlusion rectangle");

  // Builds the covering and checks the barrier at the target.
  const PotentialField f = field();
  const Covering& cov = f.covering();

  if (target.mode != TargetMode::Static)
  {
    const double clear = cov.circumscribed_radius() + target_margin;
    for (std::size_t i = 1; i < target.path.size(); ++i)
    {
      if (segment_distance(target.path[i - 1], target.path[i], obstacle.center) <= clear)
      {
        std::ostringstream msg;
        msg << "target path segment " << i - 1 << " passes within " << clear
            << " of the obstacle center";
        throw Error(ErrorCode::TargetTooClose, msg.str());
      }
    }
  }

  for (const Point2& p : initial_positions)
  {
    if (!p.is_finite())
      fail("initial positions must be finite");
    if (!extent.contains(p))
      throw Error(ErrorCode::OutOfExtent, "initial position outside the extent");
  }

  if (perception.enabled)
  {
    render_spec().validate();
    const Rect& r = perception.region;
    if (!(perception.spacing > 0.0))
      fail("perception grid spacing must be > 0");
    if (!(r.width() >= 0.0 && r.height() >= 0.0))
      fail("perception region is empty");
    if (!extent.contains({r.x_min, r.y_min}) || !extent.contains({r.x_max, r.y_max}))
      throw Error(ErrorCode::OutOfExtent, "perception region outside the extent");
  }
  else if (target.mode == TargetMode::Leader)
  {
    fail("leader targets need perception enabled");
  }

  if (target.mode == TargetMode::Leader
    && target.speed > TargetProvider::slow_target_ratio*controller.gain)
  {
    std::ostringstream msg;
    msg << "leader speed " << target.speed << " exceeds "
        << TargetProvider::slow_target_ratio << "*k = "
        << TargetProvider::slow_target_ratio*controller.gain;
    fail(msg.str());
  }
}

//==============================================================================
std::uint64_t run_seed(std::uint64_t scenario_seed, std::size_t index)
{
  // splitmix64 finalizer
  std::uint64_t z = scenario_seed + 0x9e3779b97f4a7c15ULL*(index + 1);
  z = (z ^ (z >> 30))*0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27))*0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//==============================================================================
RunMetrics metrics(
  const HybridArc& arc,
  const Obstacle& obstacle,
  double delta,
  const std::vector<Point2>& leader,
  double tracking_bound)
{
  RunMetrics m;
  m.jump_count = arc.jump_count();
  m.min_obstacle_clearance = kInfinity;
  for (const ArcSample& s : arc.samples)
  {
    m.min_obstacle_clearance =
      std::min(m.min_obstacle_clearance, obstacle.clearance(s.state.p));
    m.max_perception_error =
      std::max(m.max_perception_error, (s.estimate - s.state.p).norm());
    if (!m.time_to_converge && (s.state.p - s.target).norm() <= delta)
      m.time_to_converge = s.time.t;
  }

  if (leader.empty() || leader.size() != arc.samples.size())
  {
    m.converged = arc.termination == Termination::Converged;
    return m;
  }

  const double t_end = arc.back().time.t;
  double worst = 0.0;
  for (std::size_t i = 0; i < leader.size(); ++i)
  {
    const ArcSample& s = arc.samples[i];
    if (s.time.t >= 0.8*t_end)
      worst = std::max(worst, (s.state.p - leader[i]).norm());
  }
  m.tracking_error = worst;
  m.converged = arc.termination != Termination::LeftDomain
    && arc.termination != Termination::ZenoGuard
    && worst <= tracking_bound;
  return m;
}

//==============================================================================
namespace {
const Scenario& validated(const Scenario& s)
{
  s.validate();
  return s;
}
} // anonymous namespace

//==============================================================================
ScenarioContext::ScenarioContext(Scenario scenario)
: _scenario(std::move(scenario)),
  _field(validated(_scenario).field())
{
  if (_scenario.perception.enabled)
  {
    const PerceptionConfig& pc = _scenario.perception;
    TrainingSet training = collect_training_data(
      _scenario.scene(), pc.region, pc.spacing, _scenario.render_spec(),
      pc.training_occlusions);
    _map = std::make_shared<const PerceptionMap>(
      PerceptionMap::fit(std::move(training), pc.mode));
  }
}

//==============================================================================
RunResult ScenarioContext::run_once(
  std::size_t index, std::uint64_t seed, bool occluded) const
{
  const Scenario& s = _scenario;
  RunResult out;
  out.index = index;
  out.initial = s.initial_positions.at(index);
  out.seed = seed;

  ErrorModel model = s.errors;
  model.seed = seed;
  if (!occluded)
    model.occlusions.clear();

  ErrorModel leader_model = s.leader_errors;
  leader_model.seed = run_seed(seed, kLeaderStream);

  try
  {
    PerceptionSensor sensor(_map, s.scene(), model);
    PerceptionSensor leader_sensor(_map, s.scene(), leader_model);

    SimulationSetup setup{_field, out.initial, std::nullopt, sensor_estimator(sensor), {}};
    if (s.target.mode == TargetMode::Waypoints)
    {
      setup.moving_target = [&s](double t) { return s.target.at(t); };
      setup.stop_at_target = false;
    }
    else if (s.target.mode == TargetMode::Leader)
    {
      setup.moving_target =
        [&s, &leader_sensor, prev = std::optional<Point2>()](double t) mutable {
          const EstimateResult r = leader_sensor.estimate(s.target.at(t), prev);
          prev = r.position;
          return r.position;
        };
      setup.stop_at_target = false;
    }

    out.arc = simulate(setup, s.controller);
  }
  catch (const Error& e)
  {
    out.error = e.what();
    out.arc.termination = Termination::LeftDomain;
    out.arc.detail = e.what();
  }

  if (out.arc.samples.empty())
  {
    ArcSample first;
    first.state = {out.initial, Mode::One};
    first.estimate = out.initial;
    first.target = s.target.initial();
    first.v1 = _field.value(Mode::One, out.initial);
    first.v2 = _field.value(Mode::Two, out.initial);
    out.arc.samples.push_back(first);
  }

  if (s.target.mode == TargetMode::Leader)
  {
    out.leader.reserve(out.arc.samples.size());
    for (const ArcSample& sample : out.arc.samples)
      out.leader.push_back(s.target.at(sample.time.t));
  }

  out.metrics = metrics(
    out.arc, s.obstacle, s.controller.delta, out.leader, s.tracking_bound);
  return out;
}

//==============================================================================
RunResult ScenarioContext::run(std::size_t index, std::uint64_t seed) const
{
  if (!_scenario.paired_occlusion)
    return run_once(index, seed, true);

  const RunResult clear = run_once(index, seed, false);
  RunResult occluded = run_once(index, seed, true);
  occluded.reference = clear.metrics;
  return occluded;
}

//==============================================================================
std::vector<RunResult> run_scenario(const Scenario& scenario, std::size_t workers)
{
  return run_scenario(ScenarioContext(scenario), workers);
}

//==============================================================================
std::vector<RunResult> run_scenario(
  const ScenarioContext& context, std::size_t workers)
{
  const Scenario& s = context.scenario();
  std::vector<RunResult> results(s.initial_positions.size());
  parallel_for(results.size(), workers, [&](std::size_t i) {
    results[i] = context.run(i, run_seed(s.seed, i));
  });
  return results;
}

//==============================================================================
std::size_t SweepResult::total() const
{
  std::size_t n = 0;
  for (const auto& r : runs)
    n += r.size();
  return n;
}

//==============================================================================
std::size_t SweepResult::converged() const
{
  std::size_t n = 0;
  for (const auto& r : runs)
    for (const RunResult& x : r)
      n += x.metrics.converged ? 1 : 0;
  return n;
}

//==============================================================================
std::size_t SweepResult::clear() const
{
  std::size_t n = 0;
  for (const auto& r : runs)
    for (const RunResult& x : r)
      n += x.metrics.min_obstacle_clearance >= 0.0 ? 1 : 0;
  return n;
}

//==============================================================================
SweepResult sweep(
  const ScenarioContext& context,
  std::uint64_t first_seed,
  std::size_t count,
  std::size_t workers)
{
  const std::size_t per_seed = context.scenario().initial_positions.size();
  SweepResult out;
  out.seeds.resize(count);
  out.runs.assign(count, std::vector<RunResult>(per_seed));
  for (std::size_t s = 0; s < count; ++s)
    out.seeds[s] = first_seed + s;

  parallel_for(count*per_seed, workers, [&](std::size_t task) {
    const std::size_t s = task/per_seed;
    const std::size_t i = task%per_seed;
    out.runs[s][i] = context.run(i, run_seed(out.seeds[s], i));
  });
  return out;
}

} // namespace hybridnav
