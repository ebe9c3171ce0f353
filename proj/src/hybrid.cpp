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

#include <hybridnav/hybrid.hpp>
#include <hybridnav/error.hpp>

#include <cmath>
#include <limits>

namespace hybridnav {

namespace {

constexpr double kFlowTolerancePerStep = 1e-9;
constexpr double kJumpTolerance = 1e-12;

bool finite_somewhere(double a, double b)
{
  return std::isfinite(a) || std::isfinite(b);
}

} // anonymous namespace

//==============================================================================
void ControllerParams::validate() const
{
  auto fail = [](const char* msg) {
    throw Error(ErrorCode::InvalidParameter, msg);
  };
  if (!(gain > 0.0)) fail("gain k must be > 0");
  if (!(chi > 1.0)) fail("chi must be > 1");
  if (!(lambda > 0.0 && lambda < chi - 1.0)) fail("lambda must be in (0, chi - 1)");
  if (!(step > 0.0)) fail("step h must be > 0");
  if (!(t_max >= 0.0)) fail("t_max must be >= 0");
  if (!(dwell >= 0.0)) fail("dwell must be >= 0");
  if (!(delta > 0.0)) fail("delta must be > 0");
  if (!(projection_margin > 0.0)) fail("projection margin must be > 0");
}

//==============================================================================
std::string_view to_string(InvalidEstimatePolicy p)
{
  switch (p)
  {
    case InvalidEstimatePolicy::Project: return "project";
    case InvalidEstimatePolicy::Pause: return "pause";
    case InvalidEstimatePolicy::Hold: return "hold";
    case InvalidEstimatePolicy::Halt: return "halt";
  }
  return "pause";
}

//==============================================================================
std::string_view to_string(Event e)
{
  switch (e)
  {
    case Event::Flow: return "flow";
    case Event::Jump: return "jump";
    case Event::Dropout: return "dropout";
  }
  return "flow";
}

//==============================================================================
std::string_view to_string(Termination t)
{
  switch (t)
  {
    case Termination::Converged: return "converged";
    case Termination::TimeLimit: return "time_limit";
    case Termination::ZenoGuard: return "zeno_guard";
    case Termination::LeftDomain: return "left_domain";
  }
  return "time_limit";
}

//==============================================================================
bool flow_condition(double v_q, double v_other, const ControllerParams& params)
{
  if (!finite_somewhere(v_q, v_other))
    return false;
  return v_q <= params.chi*v_other;
}

//==============================================================================
bool jump_condition(double v_q, double v_other, const ControllerParams& params)
{
  if (!finite_somewhere(v_q, v_other))
    return false;
  return v_q >= (params.chi - params.lambda)*v_other;
}

//==============================================================================
bool in_flow_set(const PotentialField& field, const Point2& est, Mode q,
  const ControllerParams& params)
{
  const Covering& c = field.covering();
  if (!c.in_closure(Mode::One, est) && !c.in_closure(Mode::Two, est))
    return false;
  return flow_condition(field.value(q, est), field.value(other(q), est), params);
}

//==============================================================================
bool in_jump_set(const PotentialField& field, const Point2& est, Mode q,
  const ControllerParams& params)
{
  const Covering& c = field.covering();
  if (!c.in_closure(Mode::One, est) && !c.in_closure(Mode::Two, est))
    return false;
  return jump_condition(field.value(q, est), field.value(other(q), est), params);
}

//==============================================================================
Action supervise(
  const PotentialField& field,
  const HybridState& state,
  const Point2& est,
  const ControllerParams& params,
  double time_since_jump)
{
  const Covering& c = field.covering();
  if (!c.in_closure(Mode::One, est) && !c.in_closure(Mode::Two, est))
    return Action::Halt;

  const double vq = field.value(state.q, est);
  const double vo = field.value(other(state.q), est);
  if (!finite_somewhere(vq, vo))
    return Action::Halt;

  if (flow_condition(vq, vo, params))
    return Action::Flow;

  // vq > chi*vo, hence strictly inside the jump set.
  if (time_since_jump >= params.dwell)
    return Action::Jump;

  return std::isfinite(vq) ? Action::Flow : Action::Halt;
}

//==============================================================================
HybridState flow_step(
  const HybridState& state,
  const Point2& est,
  const PotentialField& field,
  const ControllerParams& params)
{
  if (!field.covering().in_region(state.q, est))
  {
    throw Error(ErrorCode::GradientUndefined,
      "estimate outside O_" + std::to_string(static_cast<int>(state.q)));
  }

  const double h = params.step;
  const double k = params.gain;
  const Covering& cov = field.covering();
  auto rhs = [&](const Point2& x) { return -k*field.gradient(state.q, x); };

  const Vec2 k1 = rhs(est);
  const Point2 x2 = est + (0.5*h)*k1;
  if (cov.in_region(state.q, x2))
  {
    const Vec2 k2 = rhs(x2);
    const Point2 x3 = est + (0.5*h)*k2;
    if (cov.in_region(state.q, x3))
    {
      const Vec2 k3 = rhs(x3);
      const Point2 x4 = est + h*k3;
      if (cov.in_region(state.q, x4))
      {
        const Vec2 k4 = rhs(x4);
        return {state.p + (h/6.0)*(k1 + 2.0*k2 + 2.0*k3 + k4), state.q};
      }
    }
  }

  return {state.p + h*k1, state.q};
}

//==============================================================================
HybridState jump(const HybridState& state)
{
  return {state.p, other(state.q)};
}

//==============================================================================
Mode initial_mode(const PotentialField& field, const Point2& p)
{
  return field.value(Mode::Two, p) < field.value(Mode::One, p)
    ? Mode::Two : Mode::One;
}

//==============================================================================
EstimateFn exact_estimator()
{
  return [](const HybridState& s, double, const std::optional<Point2>&) {
    return EstimateResult{s.p, false};
  };
}

//==============================================================================
EstimateFn sensor_estimator(PerceptionSensor& sensor)
{
  return [&sensor](const HybridState& s, double, const std::optional<Point2>& prev) {
    return sensor.estimate(s.p, prev);
  };
}

//==============================================================================
HybridArc simulate(const SimulationSetup& setup, const ControllerParams& params)
{
  params.validate();

  const auto field_at = [&](double t) {
    return setup.moving_target
      ? setup.field.retargeted(setup.moving_target(t))
      : setup.field;
  };

  HybridArc arc;
  double t = 0.0;
  std::size_t steps = 0;
  std::size_t j = 0;
  double last_jump = -std::numeric_limits<double>::infinity();
  PotentialField field = field_at(0.0);

  HybridState state{
    setup.initial_position,
    setup.initial_mode.value_or(initial_mode(field, setup.initial_position))};

  std::optional<Point2> last_output;
  std::optional<Point2> last_valid;
  Point2 est = state.p;
  bool usable = true;

  // Returns false if the estimator failed outright.
  auto acquire = [&](Event& event) {
    EstimateResult r;
    try
    {
      r = setup.estimator(state, t, last_output);
    }
    catch (const Error& e)
    {
      arc.detail = e.what();
      return false;
    }

    event = r.dropped ? Event::Dropout : Event::Flow;
    est = r.position;
    last_output = r.position;
    usable = finite_somewhere(
      field.value(Mode::One, r.position), field.value(Mode::Two, r.position));
    if (usable)
    {
      last_valid = r.position;
      return true;
    }

    if (params.invalid_estimate == InvalidEstimatePolicy::Project)
    {
      est = field.covering().nearest_in_union(r.position, params.projection_margin);
      usable = true;
      return true;
    }

    event = Event::Dropout;
    if (params.invalid_estimate == InvalidEstimatePolicy::Hold && last_valid)
    {
      est = *last_valid;
      usable = true;
    }
    return true;
  };

  auto record = [&](Event event) {
    ArcSample s;
    s.time = {t, j};
    s.state = state;
    s.estimate = est;
    s.target = field.target();
    s.v1 = field.value(Mode::One, state.p);
    s.v2 = field.value(Mode::Two, state.p);
    s.event = event;
    arc.samples.push_back(s);
  };

  Event event = Event::Flow;
  if (!acquire(event))
  {
    record(Event::Flow);
    arc.termination = Termination::LeftDomain;
    return arc;
  }
  record(event);

  const auto max_steps = static_cast<std::size_t>(std::llround(
    std::ceil(params.t_max/params.step - 1e-9)));

  while (true)
  {
    if (setup.stop_at_target && (state.p - field.target()).norm() <= params.delta)
    {
      arc.termination = Termination::Converged;
      break;
    }
    if (steps >= max_steps)
    {
      arc.termination = (state.p - field.target()).norm() <= params.delta
        ? Termination::Converged : Termination::TimeLimit;
      break;
    }

    Action action = Action::Flow;
    if (usable)
      action = supervise(field, state, est, params, t - last_jump);
    else if (params.invalid_estimate == InvalidEstimatePolicy::Halt)
      action = Action::Halt;

    if (action == Action::Halt)
    {
      arc.termination = Termination::LeftDomain;
      arc.detail = "estimate left the flow and jump sets";
      break;
    }

    if (action == Action::Jump)
    {
      state = jump(state);
      ++j;
      last_jump = t;
      record(Event::Jump);
      if (j >= params.j_max)
      {
        arc.termination = Termination::ZenoGuard;
        arc.detail = "jump budget exhausted";
        break;
      }
      continue;
    }

    if (usable)
      state = flow_step(state, est, field, params);
    ++steps;
    t = static_cast<double>(steps)*params.step;
    if (setup.moving_target)
      field = field_at(t);

    if (!acquire(event))
    {
      record(Event::Flow);
      arc.termination = Termination::LeftDomain;
      break;
    }
    record(event);
  }
  return arc;
}

//==============================================================================
std::vector<LyapunovPoint> lyapunov_trace(
  const HybridArc& arc, const PotentialField& field)
{
  std::vector<LyapunovPoint> out;
  out.reserve(arc.samples.size());
  for (const ArcSample& s : arc.samples)
  {
    double v = 0.0;
    if (s.target == field.target())
      v = field.value(s.state.q, s.state.p);
    else
      v = field.retargeted(s.target).value(s.state.q, s.state.p);
    out.push_back({s.time.t, s.time.j, v});
  }
  return out;
}

//==============================================================================
LyapunovReport check_lyapunov(
  const HybridArc& arc,
  const PotentialField& field,
  const ControllerParams& params)
{
  LyapunovReport report;
  const auto trace = lyapunov_trace(arc, field);
  for (std::size_t i = 1; i < trace.size(); ++i)
  {
    const LyapunovPoint& a = trace[i - 1];
    const LyapunovPoint& b = trace[i];
    if (b.j == a.j)
    {
      ++report.flow_checks;
      const double inc = b.value - a.value;
      report.worst_flow_increase = std::max(report.worst_flow_increase, inc);
      if (!(inc <= kFlowTolerancePerStep*params.step))
        ++report.flow_violations;
    }
    else
    {
      ++report.jump_checks;
      const double excess = b.value - a.value/(params.chi - params.lambda);
      report.worst_jump_excess = std::max(report.worst_jump_excess, excess);
      if (!(excess <= kJumpTolerance))
        ++report.jump_violations;
    }
  }
  return report;
}

} // namespace hybridnav
