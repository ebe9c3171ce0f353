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

#ifndef HYBRIDNAV__HYBRID_HPP
#define HYBRIDNAV__HYBRID_HPP

#include <hybridnav/perception.hpp>
#include <hybridnav/potentials.hpp>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hybridnav {

//==============================================================================
/// What the simulator does with an estimate at which neither potential is
/// finite (inside the diamond, or on its boundary).
enum class InvalidEstimatePolicy
{
  /// Replace the estimate by the nearest point of O lying
  /// `projection_margin` meters outside the diamond.
  Project,
  /// Apply zero input for the step and wait for the next estimate.
  Pause,
  /// Reuse the last valid estimate, like a dropped frame. Pauses while no
  /// valid estimate has been seen yet.
  Hold,
  /// Stop the run with Termination::LeftDomain.
  Halt
};

std::string_view to_string(InvalidEstimatePolicy p);

//==============================================================================
struct ControllerParams
{
  double gain = 1.0;
  double chi = 1.1;
  double lambda = 0.09;
  double step = 0.01;
  double t_max = 200.0;
  std::size_t j_max = 100;
  double dwell = 0.0;
  double delta = 0.5;
  InvalidEstimatePolicy invalid_estimate = InvalidEstimatePolicy::Project;
  double projection_margin = 0.05;

  /// Throws Error(InvalidParameter) unless gain > 0, chi > 1,
  /// 0 < lambda < chi - 1, step > 0, t_max >= 0, dwell >= 0, delta > 0,
  /// projection_margin > 0.
  void validate() const;
};

struct HybridState
{
  Point2 p;
  Mode q = Mode::One;
};

struct HybridTime
{
  double t = 0.0;
  std::size_t j = 0;
};

enum class Event
{
  Flow,
  Jump,
  Dropout
};

std::string_view to_string(Event e);

//==============================================================================
/// One point of a hybrid arc. `event` tells how the sample was reached (the
/// first sample is labeled Flow); `estimate` is the controller's position
/// belief at that point; v1 and v2 are evaluated at the true position.
struct ArcSample
{
  HybridTime time;
  HybridState state;
  Point2 estimate;
  Point2 target;
  double v1 = 0.0;
  double v2 = 0.0;
  Event event = Event::Flow;
};

enum class Termination
{
  Converged,
  TimeLimit,
  ZenoGuard,
  LeftDomain
};

std::string_view to_string(Termination t);

struct HybridArc
{
  std::vector<ArcSample> samples;
  Termination termination = Termination::TimeLimit;
  std::string detail;

  const ArcSample& back() const { return samples.back(); }
  std::size_t jump_count() const { return samples.empty() ? 0 : samples.back().time.j; }
};

//==============================================================================
/// V_q <= chi*V_{3-q}. Both infinite is treated as outside.
bool flow_condition(double v_q, double v_other, const ControllerParams& params);

/// V_q >= (chi - lambda)*V_{3-q}. Both infinite is treated as outside.
bool jump_condition(double v_q, double v_other, const ControllerParams& params);

bool in_flow_set(const PotentialField& field, const Point2& est, Mode q,
  const ControllerParams& params);

bool in_jump_set(const PotentialField& field, const Point2& est, Mode q,
  const ControllerParams& params);

enum class Action
{
  Flow,
  Jump,
  Halt
};

/// Flow-priority hysteresis supervisor: jump only when the flow condition
/// fails strictly and the dwell time has elapsed.
Action supervise(
  const PotentialField& field,
  const HybridState& state,
  const Point2& est,
  const ControllerParams& params,
  double time_since_jump);

/// One RK4 step of p' = -k grad V_q(p + e), where the perception error
/// e = est - p is held over the step. Falls back to an explicit Euler step
/// at `est` if an intermediate stage leaves O_q. Throws
/// Error(GradientUndefined) when est is not in O_q.
HybridState flow_step(
  const HybridState& state,
  const Point2& est,
  const PotentialField& field,
  const ControllerParams& params);

/// p+ = p, q+ = 3 - q.
HybridState jump(const HybridState& state);

/// argmin_q V_q(p); ties go to mode One.
Mode initial_mode(const PotentialField& field, const Point2& p);

//==============================================================================
/// Produces the controller's position estimate for the current state.
using EstimateFn = std::function<EstimateResult(
  const HybridState& state, double t, const std::optional<Point2>& prev)>;

/// Exact perception: the estimate is the true position.
EstimateFn exact_estimator();

/// Adapts a sensor; the sensor must outlive the returned function.
EstimateFn sensor_estimator(PerceptionSensor& sensor);

struct SimulationSetup
{
  PotentialField field;
  Point2 initial_position;
  std::optional<Mode> initial_mode;
  EstimateFn estimator = exact_estimator();

  /// Time-varying target. The covering stays fixed; only the attraction
  /// center moves.
  std::function<Point2(double t)> moving_target;

  /// When false the run continues past the delta ball until t_max; used for
  /// tracking a moving target.
  bool stop_at_target = true;
};

/// Runs estimate -> supervise -> (flow | jump) until the true position is
/// within delta of the target (if stop_at_target), t reaches t_max, j reaches j_max, or the
/// supervisor halts.
HybridArc simulate(const SimulationSetup& setup, const ControllerParams& params);

//==============================================================================
struct LyapunovPoint
{
  double t = 0.0;
  std::size_t j = 0;
  double value = 0.0;
};

/// Active potential V_{q}(p) at every sample, with the target recorded in
/// the sample.
std::vector<LyapunovPoint> lyapunov_trace(
  const HybridArc& arc, const PotentialField& field);

struct LyapunovReport
{
  std::size_t flow_checks = 0;
  std::size_t jump_checks = 0;
  std::size_t flow_violations = 0;
  std::size_t jump_violations = 0;

  /// Largest V(next) - V(prev) over flow steps.
  double worst_flow_increase = -kInfinity;

  /// Largest V(after) - V(before)/(chi - lambda) over jumps.
  double worst_jump_excess = -kInfinity;

  bool passed() const { return flow_violations == 0 && jump_violations == 0; }
};

/// Flow steps may not increase V by more than 1e-9*h; jumps must satisfy
/// V_new <= V_old/(chi - lambda) + 1e-12.
LyapunovReport check_lyapunov(
  const HybridArc& arc,
  const PotentialField& field,
  const ControllerParams& params);

} // namespace hybridnav

#endif // HYBRIDNAV__HYBRID_HPP
