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

#ifndef HYBRIDNAV__SCENARIOS_HPP
#define HYBRIDNAV__SCENARIOS_HPP

#include <hybridnav/hybrid.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hybridnav {

//==============================================================================
enum class TargetMode
{
  Static,
  Waypoints,
  Leader
};

std::string_view to_string(TargetMode m);

/// Where the target is at time t.
///
/// Static: always `position`. Waypoints: moves along `path` at `speed` and
/// stops at the last vertex. Leader: a leader agent follows `path` the same
/// way; the follower is attracted to the leader's perceived position.
struct TargetProvider
{
  /// Leader speeds above this multiple of the controller gain are rejected.
  static constexpr double slow_target_ratio = 0.1;

  TargetMode mode = TargetMode::Static;
  Point2 position;
  std::vector<Point2> path;
  double speed = 0.0;

  /// Compact window the target has to stay in.
  std::optional<Rect> window;

  /// Path position after `t` seconds (`position` for Static).
  Point2 at(double t) const;

  /// Target used to align the covering.
  Point2 initial() const;

  /// Time after which the path target stops moving.
  double path_duration() const;

  void validate() const;
};

//==============================================================================
struct PerceptionConfig
{
  /// Without a map the estimate is the true position plus the error model.
  bool enabled = false;
  Rect region;
  double spacing = 1.0;
  PredictionMode mode = PredictionMode::NearestNeighbor;
  int width = 25;
  int height = 15;
  double blob_sigma = 1.0;
  std::vector<Rect> training_occlusions;
};

//==============================================================================
struct Scenario
{
  std::string name = "scenario";

  Obstacle obstacle{{0.0, 0.0}, 4.0};
  Rect extent{-45.0, 30.0, -25.0, 20.0};
  double target_margin = 0.5;
  BarrierParams barrier;

  ControllerParams controller;
  PerceptionConfig perception;

  /// Runtime error model; its seed is replaced by a per-run seed.
  ErrorModel errors;

  /// Error model of the follower's view of the leader.
  ErrorModel leader_errors;

  /// Runs each initial condition a second time without runtime occlusions
  /// and attaches the metrics as the reference.
  bool paired_occlusion = false;

  /// Follower runs count as converged when the distance to the true leader
  /// stays below this over the last 20% of the run.
  double tracking_bound = 2.0;

  std::vector<Point2> initial_positions;
  TargetProvider target;
  std::uint64_t seed = 0;

  Scene scene() const { return {obstacle, target.initial()}; }
  RenderSpec render_spec() const;
  Covering covering() const;
  PotentialField field() const;

  /// Throws Error(InvalidParameter | TargetTooClose | OutOfExtent) on an
  /// inconsistent scenario.
  void validate() const;
};

/// Seed of run `index` derived from the scenario seed.
std::uint64_t run_seed(std::uint64_t scenario_seed, std::size_t index);

//==============================================================================
struct RunMetrics
{
  bool converged = false;
  /// First sample time inside the delta ball; empty if never reached.
  std::optional<double> time_to_converge;
  std::size_t jump_count = 0;
  /// min |p - p0| - rho over true positions.
  double min_obstacle_clearance = 0.0;
  /// max |estimate - p| over the arc.
  double max_perception_error = 0.0;
  /// Leader runs only: max distance to the true leader over the last 20%.
  std::optional<double> tracking_error;
};

struct RunResult
{
  std::size_t index = 0;
  Point2 initial;
  std::uint64_t seed = 0;
  HybridArc arc;

  /// True leader positions at the arc sample times (leader runs only).
  std::vector<Point2> leader;

  RunMetrics metrics;

  /// Metrics of the unoccluded partner run (paired occlusion only).
  std::optional<RunMetrics> reference;

  /// Engine error that ended the run, if any.
  std::string error;
};

/// Extracts the metrics from an arc. `leader` may be empty.
RunMetrics metrics(
  const HybridArc& arc,
  const Obstacle& obstacle,
  double delta,
  const std::vector<Point2>& leader = {},
  double tracking_bound = 0.0);

//==============================================================================
/// Immutable per-scenario data shared by all runs.
class ScenarioContext
{
public:
  /// Validates the scenario and fits the perception map if enabled.
  explicit ScenarioContext(Scenario scenario);

  const Scenario& scenario() const { return _scenario; }
  const PotentialField& field() const { return _field; }
  std::shared_ptr<const PerceptionMap> map() const { return _map; }

  /// Runs initial condition `index` with the given seed. Engine errors are
  /// stored in the result rather than thrown.
  RunResult run(std::size_t index, std::uint64_t seed) const;

private:
  RunResult run_once(std::size_t index, std::uint64_t seed, bool occluded) const;

  Scenario _scenario;
  PotentialField _field;
  std::shared_ptr<const PerceptionMap> _map;
};

/// One result per initial condition, ordered by index. Runs are spread over
/// `workers` threads.
std::vector<RunResult> run_scenario(const Scenario& scenario, std::size_t workers = 1);

std::vector<RunResult> run_scenario(
  const ScenarioContext& context, std::size_t workers = 1);

//==============================================================================
struct SweepResult
{
  std::vector<std::uint64_t> seeds;
  /// runs[s] holds the results for seeds[s].
  std::vector<std::vector<RunResult>> runs;

  std::size_t total() const;
  std::size_t converged() const;
  std::size_t clear() const;
};

/// Runs the scenario with seeds seed, seed + 1, ..., seed + count - 1.
SweepResult sweep(
  const ScenarioContext& context,
  std::uint64_t first_seed,
  std::size_t count,
  std::size_t workers = 1);

} // namespace hybridnav

#endif // HYBRIDNAV__SCENARIOS_HPP
