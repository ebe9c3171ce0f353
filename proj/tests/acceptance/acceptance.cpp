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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Scenario files are read from HYBRIDNAV_SCENARIO_DIR.

#include <hybridnav/config.hpp>
#include <hybridnav/io.hpp>
#include <hybridnav/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

using namespace hybridnav;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string scenario_dir()
{
  if (const char* env = std::getenv("HYBRIDNAV_SCENARIO_DIR"))
    return env;
  return HYBRIDNAV_SCENARIO_DIR;
}

Config load(const std::string& name)
{
  return load_config(scenario_dir() + "/" + name + ".json");
}

struct Outcome
{
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body)
{
  Outcome o;
  try
  {
    o = body();
  }
  catch (const std::exception& e)
  {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.passed)
    ++failures;
  std::printf("%s %d %s: %s\n", o.passed ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string summary(const SuiteReport& r)
{
  std::ostringstream s;
  for (const Check& c : r.checks)
    s << c.name << "=" << format_double(c.value) << (c.passed ? " " : "(!) ");
  if (const Check* c = r.first_failure())
    s << "counterexample " << c->counterexample;
  return s.str();
}

std::string arcs_csv(const std::vector<RunResult>& runs)
{
  std::ostringstream out;
  for (const RunResult& r : runs)
    write_arc_csv(out, r.arc);
  return out.str();
}

// Arcs collected for the completeness criterion.
std::vector<const HybridArc*> all_arcs;

} // namespace

int main()
{
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());

  Config fig7;
  try
  {
    fig7 = load("fig7");
  }
  catch (const std::exception& e)
  {
    std::printf("FAIL 0 load scenarios: %s\n", e.what());
    return 1;
  }

  SweepResult fig7_sweep;
  report(1, "fig7 sweep", [&] {
    const auto start = Clock::now();
    const ScenarioContext ctx(fig7.scenario);
    fig7_sweep = sweep(ctx, fig7.seed, 100, workers);
    const double elapsed = seconds_since(start);
    const double conv = static_cast<double>(fig7_sweep.converged())/fig7_sweep.total();
    double min_clear = kInfinity;
    for (const auto& runs : fig7_sweep.runs)
      for (const RunResult& r : runs)
      {
        min_clear = std::min(min_clear, r.metrics.min_obstacle_clearance);
        all_arcs.push_back(&r.arc);
      }
    std::ostringstream d;
    d << fig7_sweep.converged() << "/" << fig7_sweep.total() << " converged, "
      << fig7_sweep.clear() << "/" << fig7_sweep.total() << " clear, min clearance "
      << format_double(min_clear) << " m, " << elapsed << " s";
    return Outcome{conv >= 0.95 && fig7_sweep.clear() == fig7_sweep.total() && elapsed < 60.0,
      d.str()};
  });

  report(2, "lyapunov", [&] {
    VerifyConfig v = fig7.verify;
    v.lyapunov_runs = 20;
    const SuiteReport r = verify_lyapunov(fig7.scenario, v, fig7.seed);
    return Outcome{r.passed(), summary(r)};
  });

  report(3, "coverage bound", [&] {
    VerifyConfig v = fig7.verify;
    v.coverage_samples = 10000;
    Scenario s = fig7.scenario;
    s.perception.spacing = 1.0;
    const auto start = Clock::now();
    const SuiteReport r = verify_coverage(s, v, fig7.seed);
    const double elapsed = seconds_since(start);
    std::ostringstream d;
    d << summary(r) << elapsed << " s";
    return Outcome{r.passed() && elapsed < 30.0, d.str()};
  });

  report(4, "gradient", [&] {
    VerifyConfig v = fig7.verify;
    v.gradient_points = 1000;
    v.fd_step = 1e-5;
    v.gradient_tolerance = 1e-5;
    v.min_boundary_distance = 0.01;
    v.max_boundary_distance = 10.0;
    const SuiteReport r = verify_gradient(fig7.scenario, v, fig7.seed);
    return Outcome{r.passed(), summary(r)};
  });

  DemoResult demo;
  report(5, "adversarial contrast", [&] {
    const Config adv = load("adversarial");
    const auto start = Clock::now();
    demo = demo_stuck(adv.adversarial);
    const DemoResult again = demo_stuck(adv.adversarial);
    const double elapsed = seconds_since(start)/2.0;
    all_arcs.push_back(&demo.hybrid);
    const bool same = demo.smooth.back().state.p == again.smooth.back().state.p
      && demo.hybrid.back().state.p == again.hybrid.back().state.p;
    std::ostringstream d;
    d << "smooth " << format_double(demo.smooth_final_distance) << " m, hybrid "
      << format_double(demo.hybrid_final_distance) << " m ("
      << to_string(demo.hybrid.termination) << "), " << elapsed << " s";
    return Outcome{demo.smooth_final_distance > 5.0
        && demo.hybrid.termination == Termination::Converged
        && demo.hybrid_final_distance <= adv.adversarial.target_margin
        && same && elapsed < 10.0,
      d.str()};
  });

  report(6, "no zeno", [&] {
    std::size_t bad = 0;
    std::size_t zeno = 0;
    std::size_t max_jumps = 0;
    for (const HybridArc* a : all_arcs)
    {
      if (a->termination != Termination::Converged && a->termination != Termination::TimeLimit)
        ++bad;
      if (a->termination == Termination::ZenoGuard)
        ++zeno;
      max_jumps = std::max(max_jumps, a->jump_count());
    }
    std::ostringstream d;
    d << all_arcs.size() << " arcs, " << bad << " other terminations, " << zeno
      << " zeno guards, max jumps " << max_jumps;
    return Outcome{!all_arcs.empty() && bad == 0 && max_jumps <= 10, d.str()};
  });

  report(7, "determinism", [&] {
    Scenario s = fig7.scenario;
    s.seed = fig7.seed + 17;
    const ScenarioContext ctx(s);
    const std::string a = arcs_csv(run_scenario(ctx, 1));
    const std::string b = arcs_csv(run_scenario(ctx, 1));
    const std::string c = arcs_csv(run_scenario(ctx, std::max<std::size_t>(2, workers)));
    const std::string d = arcs_csv(run_scenario(ScenarioContext(s), 1));
    std::ostringstream out;
    out << a.size() << " bytes, repeat " << (a == b ? "identical" : "differs")
        << ", multi-worker " << (a == c ? "identical" : "differs")
        << ", refit " << (a == d ? "identical" : "differs");
    return Outcome{!a.empty() && a == b && a == c && a == d, out.str()};
  });

  report(8, "geometry", [&] {
    VerifyConfig v = fig7.verify;
    v.geometry_samples = 10000;
    const SuiteReport r = verify_geometry(fig7.scenario, v, fig7.seed);
    return Outcome{r.passed(), summary(r)};
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
