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

#include <hybridnav/verify.hpp>
#include <hybridnav/error.hpp>
#include <hybridnav/io.hpp>

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

namespace hybridnav {

using nlohmann::json;

namespace {

json point_json(const Point2& p) { return json::array({p.x, p.y}); }

Check make_check(std::string name, bool passed, double value, double limit,
  const json& counterexample = nullptr)
{
  Check c;
  c.name = std::move(name);
  c.passed = passed;
  c.value = value;
  c.limit = limit;
  if (!passed && !counterexample.is_null())
    c.counterexample = counterexample.dump();
  return c;
}

// Boundary radius of O along `dir` from the obstacle center, by bisection
// on membership.
double union_boundary_radius(const Covering& cov, const Vec2& dir)
{
  const Point2 c = cov.obstacle().center;
  double lo = 0.0;
  double hi = 2.0*cov.circumscribed_radius();
  for (int i = 0; i < 80; ++i)
  {
    const double mid = 0.5*(lo + hi);
    if (cov.in_union(c + mid*dir))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5*(lo + hi);
}

} // anonymous namespace

//==============================================================================
bool SuiteReport::passed() const
{
  return first_failure() == nullptr;
}

//==============================================================================
const Check* SuiteReport::first_failure() const
{
  for (const Check& c : checks)
    if (!c.passed)
      return &c;
  return nullptr;
}

//==============================================================================
Suite parse_suite(const std::string& name)
{
  if (name == "geometry") return Suite::Geometry;
  if (name == "gradient") return Suite::Gradient;
  if (name == "lyapunov") return Suite::Lyapunov;
  if (name == "coverage") return Suite::Coverage;
  if (name == "all") return Suite::All;
  throw Error(ErrorCode::ConfigError, "unknown verification suite \"" + name + "\"");
}

//==============================================================================
SuiteReport verify_geometry(
  const Scenario& scenario, const VerifyConfig& config, std::uint64_t seed)
{
  SuiteReport report;
  report.suite = "geometry";
  const Covering cov = scenario.covering();
  const Obstacle& obs = cov.obstacle();
  const double rho = obs.radius;
  const std::size_t n = std::max<std::size_t>(1, config.geometry_samples);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Inscribed radius, measured along evenly spaced rays.
  double min_radius = kInfinity;
  Vec2 worst_dir;
  for (std::size_t i = 0; i < n; ++i)
  {
    const double a = 2.0*std::numbers::pi*(static_cast<double>(i) + unit(rng))
      /static_cast<double>(n);
    const Vec2 dir{std::cos(a), std::sin(a)};
    const double r = union_boundary_radius(cov, dir);
    if (r < min_radius)
    {
      min_radius = r;
      worst_dir = dir;
    }
  }
  const double radius_tol = 1e-6*rho + rho*(1.0 - std::cos(2.0*std::numbers::pi/static_cast<double>(n)))*4.0;
  report.checks.push_back(make_check("inscribed_radius",
    std::abs(cov.inscribed_radius() - 2.0*rho) <= 1e-12*rho
      && min_radius >= 2.0*rho - 1e-9*rho
      && min_radius <= 2.0*rho + radius_tol,
    min_radius, 2.0*rho,
    {{"direction", point_json(worst_dir)}, {"radius", min_radius},
     {"analytic", cov.inscribed_radius()}}));

  report.checks.push_back(make_check("obstacle_margin",
    min_radius - rho >= rho - 1e-9*rho, min_radius - rho, rho,
    {{"direction", point_json(worst_dir)}}));

  const Point2 target = cov.target();
  const bool target_ok = cov.in_region(Mode::One, target) && cov.in_region(Mode::Two, target);
  report.checks.push_back(make_check("target_in_both_regions", target_ok,
    std::min(cov.dist_to_complement(Mode::One, target),
             cov.dist_to_complement(Mode::Two, target)), 0.0,
    {{"target", point_json(target)}}));

  // Obstacle samples must lie in neither region.
  std::size_t hits = 0;
  json first_hit = nullptr;
  for (std::size_t i = 0; i < n; ++i)
  {
    const double r = rho*std::sqrt(unit(rng));
    const double a = 2.0*std::numbers::pi*unit(rng);
    const Point2 p = obs.center + Vec2{r*std::cos(a), r*std::sin(a)};
    if (cov.in_union(p))
    {
      if (!hits)
        first_hit = {{"point", point_json(p)}};
      ++hits;
    }
  }
  report.checks.push_back(make_check("obstacle_disjoint_from_regions",
    hits == 0, static_cast<double>(hits), 0.0, first_hit));

  // The window splits into O and the diamond; regions keep distance from N.
  const double span = 4.0*cov.circumscribed_radius();
  std::size_t bad = 0;
  json first_bad = nullptr;
  for (std::size_t i = 0; i < n; ++i)
  {
    const Point2 p = obs.center
      + Vec2{span*(2.0*unit(rng) - 1.0), span*(2.0*unit(rng) - 1.0)};
    const bool in_o = cov.in_union(p);
    const bool consistent = in_o != cov.in_diamond(p)
      && (!in_o || (p - obs.center).norm() >= 2.0*rho - 1e-9*rho);
    bool dist_ok = true;
    for (const Mode q : {Mode::One, Mode::Two})
      dist_ok = dist_ok && (cov.in_region(q, p) == (cov.dist_to_complement(q, p) > 0.0));
    if (!consistent || !dist_ok)
    {
      if (!bad)
        first_bad = {{"point", point_json(p)}, {"in_union", in_o},
          {"in_diamond", cov.in_diamond(p)}};
      ++bad;
    }
  }
  report.checks.push_back(make_check("partition_consistency",
    bad == 0, static_cast<double>(bad), 0.0, first_bad));
  return report;
}

//==============================================================================
SuiteReport verify_gradient(
  const Scenario& scenario, const VerifyConfig& config, std::uint64_t seed)
{
  SuiteReport report;
  report.suite = "gradient";
  const PotentialField field = scenario.field();
  const Covering& cov = field.covering();
  const Point2 c = cov.obstacle().center;
  const double half = cov.circumscribed_radius() + config.max_boundary_distance + 1.0;
  const double h = config.fd_step;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-half, half);

  for (const Mode q : {Mode::One, Mode::Two})
  {
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    double worst = 0.0;
    json worst_case = nullptr;
    while (accepted < config.gradient_points && attempts < 1000*config.gradient_points)
    {
      ++attempts;
      const Point2 p = c + Vec2{coord(rng), coord(rng)};
      if (!cov.in_region(q, p))
        continue;
      const double d = cov.dist_to_complement(q, p);
      if (!(d > config.min_boundary_distance && d < config.max_boundary_distance))
        continue;
      ++accepted;

      const Vec2 g = field.gradient(q, p);
      const Vec2 fd{
        (field.value(q, p + Vec2{h, 0.0}) - field.value(q, p - Vec2{h, 0.0}))/(2.0*h),
        (field.value(q, p + Vec2{0.0, h}) - field.value(q, p - Vec2{0.0, h}))/(2.0*h)};
      const double err = (g - fd).norm()/std::max(g.norm(), 1e-12);
      if (!(err <= worst) || !std::isfinite(err))
      {
        worst = err;
        worst_case = {{"q", static_cast<int>(q)}, {"point", point_json(p)},
          {"boundary_distance", d}, {"analytic", point_json(g)},
          {"finite_difference", point_json(fd)}, {"relative_error", err}};
      }
    }
    const std::string name = "gradient_q" + std::to_string(static_cast<int>(q));
    const bool enough = accepted == config.gradient_points;
    report.checks.push_back(make_check(name,
      enough && worst < config.gradient_tolerance, worst, config.gradient_tolerance,
      enough ? worst_case : json{{"accepted_points", accepted}}));
  }
  return report;
}

//==============================================================================
SuiteReport verify_lyapunov(
  const Scenario& scenario, const VerifyConfig& config, std::uint64_t seed)
{
  SuiteReport report;
  report.suite = "lyapunov";
  const PotentialField field = scenario.field();
  const Covering& cov = field.covering();
  const ControllerParams& params = scenario.controller;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(scenario.extent.x_min, scenario.extent.x_max);
  std::uniform_real_distribution<double> uy(scenario.extent.y_min, scenario.extent.y_max);

  std::size_t flow_violations = 0;
  std::size_t jump_violations = 0;
  std::size_t bad_terminations = 0;
  std::size_t flow_checks = 0;
  std::size_t jump_checks = 0;
  std::size_t max_jumps = 0;
  double worst_flow = -kInfinity;
  double worst_jump = -kInfinity;
  double min_clearance = kInfinity;
  json first_flow = nullptr;
  json first_jump = nullptr;
  json first_term = nullptr;
  json first_clear = nullptr;
  json first_jumps = nullptr;

  for (std::size_t run = 0; run < config.lyapunov_runs; ++run)
  {
    auto draw = [&](bool straddle) -> std::optional<Point2> {
      const Point2 p{ux(rng), uy(rng)};
      const double d1 = cov.dist_to_complement(Mode::One, p);
      const double d2 = cov.dist_to_complement(Mode::Two, p);
      if ((p - field.target()).norm() <= params.delta)
        return std::nullopt;
      if (!straddle)
        return std::max(d1, d2) >= 0.5 ? std::optional<Point2>(p) : std::nullopt;
      if (std::min(d1, d2) < 0.01)
        return std::nullopt;
      const double v1 = field.value(Mode::One, p);
      const double v2 = field.value(Mode::Two, p);
      return std::max(v1, v2) > params.chi*std::min(v1, v2)
        ? std::optional<Point2>(p) : std::nullopt;
    };

    // Odd runs start in both regions with the larger potential active and
    // past the switching threshold, so the arc opens with a finite jump.
    std::optional<Point2> p0;
    bool straddle = run % 2 == 1;
    for (std::size_t attempt = 0; straddle && !p0 && attempt < 100000; ++attempt)
      p0 = draw(true);
    if (!p0)
      straddle = false;
    while (!p0)
      p0 = draw(false);

    const std::optional<Mode> start = straddle
      ? std::optional<Mode>(other(initial_mode(field, *p0))) : std::nullopt;
    const SimulationSetup setup{field, *p0, start, exact_estimator(), {}};
    const HybridArc arc = simulate(setup, params);
    const LyapunovReport lr = check_lyapunov(arc, field, params);
    const json where = {{"run", run}, {"initial", point_json(*p0)}};

    flow_checks += lr.flow_checks;
    jump_checks += lr.jump_checks;
    if (lr.flow_violations && first_flow.is_null())
      first_flow = {{"run", where}, {"worst_increase", lr.worst_flow_increase}};
    if (lr.jump_violations && first_jump.is_null())
      first_jump = {{"run", where}, {"worst_excess", lr.worst_jump_excess}};
    flow_violations += lr.flow_violations;
    jump_violations += lr.jump_violations;
    worst_flow = std::max(worst_flow, lr.worst_flow_increase);
    worst_jump = std::max(worst_jump, lr.worst_jump_excess);

    if (arc.termination != Termination::Converged
      && arc.termination != Termination::TimeLimit)
    {
      if (first_term.is_null())
        first_term = {{"run", where},
          {"termination", std::string(to_string(arc.termination))},
          {"detail", arc.detail}};
      ++bad_terminations;
    }

    max_jumps = std::max(max_jumps, arc.jump_count());
    if (arc.jump_count() > config.max_jumps && first_jumps.is_null())
      first_jumps = {{"run", where}, {"jumps", arc.jump_count()}};

    for (const ArcSample& s : arc.samples)
    {
      const double cl = cov.obstacle().clearance(s.state.p);
      if (cl < min_clearance)
      {
        min_clearance = cl;
        if (cl < 0.0 && first_clear.is_null())
          first_clear = {{"run", where}, {"point", point_json(s.state.p)}, {"t", s.time.t}};
      }
    }
  }

  report.checks.push_back(make_check("flow_nonincrease",
    flow_violations == 0 && flow_checks > 0, worst_flow,
    1e-9*params.step, first_flow));
  report.checks.push_back(make_check("jump_contraction",
    jump_violations == 0, jump_checks ? worst_jump : 0.0, 1e-12, first_jump));
  report.checks.push_back(make_check("termination",
    bad_terminations == 0, static_cast<double>(bad_terminations), 0.0, first_term));
  report.checks.push_back(make_check("jump_count",
    max_jumps <= config.max_jumps, static_cast<double>(max_jumps),
    static_cast<double>(config.max_jumps), first_jumps));
  report.checks.push_back(make_check("obstacle_clearance",
    min_clearance >= 0.0, min_clearance, 0.0, first_clear));
  return report;
}

//==============================================================================
SuiteReport verify_coverage(
  const Scenario& scenario, const VerifyConfig& config, std::uint64_t seed)
{
  SuiteReport report;
  report.suite = "coverage";
  if (!scenario.perception.enabled)
  {
    report.checks.push_back(make_check("perception_enabled", false, 0.0, 1.0,
      {{"reason", "scenario has no perception map"}}));
    return report;
  }

  const PerceptionConfig& pc = scenario.perception;
  const TrainingSet training = collect_training_data(
    scenario.scene(), pc.region, pc.spacing, scenario.render_spec(),
    pc.training_occlusions);
  const PerceptionMap map = PerceptionMap::fit(training, pc.mode);

  if (pc.mode == PredictionMode::NearestNeighbor)
  {
    double worst = 0.0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < training.size(); ++i)
    {
      const double e = map.training_residual(i).norm();
      if (e > worst)
      {
        worst = e;
        worst_i = i;
      }
    }
    report.checks.push_back(make_check("training_exactness", worst == 0.0, worst, 0.0,
      {{"index", worst_i}, {"position", point_json(training.positions[worst_i])}}));
  }

  const double lipschitz = map.lipschitz();
  const double epsilon = certified_epsilon(map);
  const CoverageRegion region = coverage(map, lipschitz, epsilon);
  report.checks.push_back(make_check("coverage_nonempty",
    !region.empty(), static_cast<double>(region.centers.size()),
    static_cast<double>(training.size())));

  if (region.empty())
    return report;

  const BoundCheck bound = verify_bound(
    map, scenario.scene(), region, config.coverage_samples, epsilon, seed);
  report.checks.push_back(make_check("error_bound",
    bound.passed && bound.samples == config.coverage_samples,
    bound.max_error, epsilon,
    {{"point", point_json(bound.worst)}, {"error", bound.max_error},
     {"epsilon", epsilon}, {"lipschitz", lipschitz}, {"radius", region.radius},
     {"samples", bound.samples}}));
  return report;
}

//==============================================================================
std::vector<SuiteReport> run_verify(const Config& config, Suite suite)
{
  std::vector<SuiteReport> out;
  const Scenario& s = config.scenario;
  if (suite == Suite::Geometry || suite == Suite::All)
    out.push_back(verify_geometry(s, config.verify, config.seed));
  if (suite == Suite::Gradient || suite == Suite::All)
    out.push_back(verify_gradient(s, config.verify, config.seed));
  if (suite == Suite::Lyapunov || suite == Suite::All)
    out.push_back(verify_lyapunov(s, config.verify, config.seed));
  if (suite == Suite::Coverage || suite == Suite::All)
    out.push_back(verify_coverage(s, config.verify, config.seed));
  return out;
}

} // namespace hybridnav
