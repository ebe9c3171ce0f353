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

#include <hybridnav/config.hpp>
#include <hybridnav/error.hpp>
#include <hybridnav/io.hpp>
#include <hybridnav/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hybridnav;

namespace {

enum ExitCode
{
  kOk = 0,
  kFailure = 1,
  kConfigError = 2
};

struct Options
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t workers = 1;
  std::string emit;
  std::string suite = "all";
};

//==============================================================================
/// Collects written files and turns them into the summary manifest.
class Output
{
public:
  explicit Output(fs::path root) : _root(std::move(root))
  {
    std::error_code ec;
    fs::create_directories(_root, ec);
    if (ec)
      throw Error(ErrorCode::IoError, "cannot create " + _root.string() + ": " + ec.message());
  }

  const fs::path& root() const { return _root; }

  fs::path path(const std::string& name) { return _root / name; }

  void add(const fs::path& file) { _files.push_back(file); }

  void add(const std::vector<fs::path>& files)
  {
    _files.insert(_files.end(), files.begin(), files.end());
  }

  /// Writes summary.json with the manifest appended.
  void finish(json summary) const
  {
    json files = json::array();
    for (const ManifestEntry& e : manifest(_root, _files))
      files.push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
    summary["files"] = std::move(files);
    write_text(_root / "summary.json", summary.dump(2) + "\n");
  }

private:
  fs::path _root;
  std::vector<fs::path> _files;
};

json point(const Point2& p) { return json::array({p.x, p.y}); }

json optional_number(const std::optional<double>& v)
{
  return v ? json(*v) : json(nullptr);
}

json metrics_json(const RunMetrics& m)
{
  return {
    {"converged", m.converged},
    {"time_to_converge", optional_number(m.time_to_converge)},
    {"jumps", m.jump_count},
    {"min_obstacle_clearance", m.min_obstacle_clearance},
    {"max_perception_error", m.max_perception_error},
    {"tracking_error", optional_number(m.tracking_error)}};
}

json run_json(const RunResult& r)
{
  json j = {
    {"index", r.index},
    {"initial", point(r.initial)},
    {"seed", r.seed},
    {"termination", std::string(to_string(r.arc.termination))},
    {"final_time", r.arc.samples.empty() ? 0.0 : r.arc.back().time.t},
    {"metrics", metrics_json(r.metrics)}};
  if (r.reference)
    j["reference"] = metrics_json(*r.reference);
  if (!r.error.empty())
    j["error"] = r.error;
  return j;
}

json header(const std::string& command, const Config& config)
{
  return {
    {"command", command},
    {"schema_version", Config::schema_version},
    {"seed", config.seed},
    {"scenario", config.scenario.name},
    {"config", json::parse(to_json(config))}};
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

//==============================================================================
Config resolve(const Options& opt)
{
  Config config = load_config(opt.config);
  if (opt.seed)
  {
    config.seed = *opt.seed;
    config.scenario.seed = *opt.seed;
  }
  if (!opt.out.empty())
    config.output = opt.out;
  if (!opt.emit.empty())
    config.emit = parse_emit(opt.emit);
  if (opt.workers == 0)
    throw Error(ErrorCode::ConfigError, "--workers must be at least 1");
  return config;
}

void write_leader_csv(const fs::path& path, const RunResult& r)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out << "t,x,y\n";
  for (std::size_t i = 0; i < r.leader.size(); ++i)
  {
    out << format_double(r.arc.samples[i].time.t) << ','
        << format_double(r.leader[i].x) << ','
        << format_double(r.leader[i].y) << '\n';
  }
}

LevelGrid level_grid(const Config& config, const PotentialField& field)
{
  return sample_levels(field, config.scenario.extent, config.levelsets.resolution);
}

std::vector<double> levels_for(const Config& config, const LevelGrid& grid)
{
  return config.levelsets.levels.empty()
    ? default_levels(grid) : config.levelsets.levels;
}

void emit_levelsets(Output& out, const Config& config, const LevelGrid& grid)
{
  const fs::path g = out.path("levelsets_grid.csv");
  const fs::path c = out.path("levelsets_contours.csv");
  write_levelset_grid_csv(g, grid);
  write_contours_csv(c, grid, levels_for(config, grid));
  out.add({g, c});
}

void emit_svg(
  Output& out,
  const Config& config,
  const PotentialField& field,
  const LevelGrid& grid,
  const std::vector<RunResult>& runs,
  const std::string& name)
{
  std::vector<SvgTrace> traces;
  for (const RunResult& r : runs)
    traces.push_back({&r.arc, "run " + std::to_string(r.index), ""});
  const fs::path svg = out.path(name);
  write_svg(svg, field, grid, levels_for(config, grid), traces);
  out.add(svg);
}

//==============================================================================
int cmd_simulate(const Config& config, std::size_t workers)
{
  const auto start = std::chrono::steady_clock::now();
  Output out(config.output);
  const ScenarioContext context(config.scenario);
  const std::vector<RunResult> runs = run_scenario(context, workers);

  json summary = header("simulate", config);
  json list = json::array();
  bool failed = false;
  for (const RunResult& r : runs)
  {
    failed = failed || !r.error.empty();
    list.push_back(run_json(r));
    if (config.emit.csv)
    {
      const fs::path p = out.path("run_" + std::to_string(r.index) + ".csv");
      write_arc_csv(p, r.arc);
      out.add(p);
      if (!r.leader.empty())
      {
        const fs::path l = out.path("leader_" + std::to_string(r.index) + ".csv");
        write_leader_csv(l, r);
        out.add(l);
      }
    }
    std::printf("run %zu: %s, converged=%s, jumps=%zu, clearance=%.4f\n",
      r.index, std::string(to_string(r.arc.termination)).c_str(),
      r.metrics.converged ? "yes" : "no", r.metrics.jump_count,
      r.metrics.min_obstacle_clearance);
  }
  summary["runs"] = std::move(list);

  if (config.emit.svg || config.emit.levelsets)
  {
    const LevelGrid grid = level_grid(config, context.field());
    if (config.emit.svg)
      emit_svg(out, config, context.field(), grid, runs, "trajectories.svg");
    if (config.emit.levelsets)
      emit_levelsets(out, config, grid);
  }
  summary["elapsed_seconds"] = seconds_since(start);
  out.finish(std::move(summary));
  return failed ? kFailure : kOk;
}

//==============================================================================
int cmd_sweep(const Config& config, std::size_t workers)
{
  const auto start = std::chrono::steady_clock::now();
  Output out(config.output);
  const ScenarioContext context(config.scenario);
  const SweepResult result = sweep(context, config.seed, config.sweep.seeds, workers);

  std::size_t max_jumps = 0;
  std::size_t errors = 0;
  double min_clearance = kInfinity;
  for (const auto& runs : result.runs)
  {
    for (const RunResult& r : runs)
    {
      max_jumps = std::max(max_jumps, r.metrics.jump_count);
      min_clearance = std::min(min_clearance, r.metrics.min_obstacle_clearance);
      errors += r.error.empty() ? 0 : 1;
    }
  }

  if (config.emit.csv)
  {
    const fs::path p = out.path("sweep.csv");
    std::ofstream csv(p, std::ios::binary);
    if (!csv)
      throw Error(ErrorCode::IoError, "cannot open " + p.string());
    csv << "seed,index,run_seed,termination,converged,time_to_converge,jumps,"
           "min_obstacle_clearance,max_perception_error\n";
    for (std::size_t s = 0; s < result.seeds.size(); ++s)
    {
      for (const RunResult& r : result.runs[s])
      {
        const RunMetrics& m = r.metrics;
        csv << result.seeds[s] << ',' << r.index << ',' << r.seed << ','
            << to_string(r.arc.termination) << ',' << (m.converged ? 1 : 0) << ','
            << (m.time_to_converge ? format_double(*m.time_to_converge) : "") << ','
            << m.jump_count << ','
            << format_double(m.min_obstacle_clearance) << ','
            << format_double(m.max_perception_error) << '\n';
      }
    }
    csv.close();
    out.add(p);
  }

  if (config.emit.svg && !result.runs.empty())
  {
    const LevelGrid grid = level_grid(config, context.field());
    emit_svg(out, config, context.field(), grid, result.runs.front(), "trajectories.svg");
  }

  const double total = static_cast<double>(result.total());
  json summary = header("sweep", config);
  summary["seeds"] = result.seeds.size();
  summary["runs"] = result.total();
  summary["converged"] = result.converged();
  summary["clear"] = result.clear();
  summary["converged_fraction"] = total > 0 ? result.converged()/total : 0.0;
  summary["clear_fraction"] = total > 0 ? result.clear()/total : 0.0;
  summary["max_jumps"] = max_jumps;
  summary["min_obstacle_clearance"] = min_clearance;
  summary["engine_errors"] = errors;
  summary["elapsed_seconds"] = seconds_since(start);
  out.finish(std::move(summary));

  std::printf("sweep: %zu runs, %zu converged, %zu clear, max jumps %zu\n",
    result.total(), result.converged(), result.clear(), max_jumps);
  return errors == 0 ? kOk : kFailure;
}

//==============================================================================
int cmd_fit_perception(const Config& config)
{
  const auto start = std::chrono::steady_clock::now();
  if (!config.scenario.perception.enabled)
    throw Error(ErrorCode::ConfigError, "scenario.perception: not enabled");
  Output out(config.output);
  const ScenarioContext context(config.scenario);
  const PerceptionMap& map = *context.map();
  const double fit_seconds = seconds_since(start);

  const double eps = certified_epsilon(map);
  const CoverageRegion region = coverage(map, map.lipschitz(), eps);
  const BoundCheck check = verify_bound(
    map, config.scenario.scene(), region, config.verify.coverage_samples, eps, config.seed);

  if (config.emit.csv)
    out.add(write_training_set(out.path("training"), map.training()));

  const Rect b = region.bounds();
  const json report = {
    {"samples", map.training().size()},
    {"spacing", map.training().spacing},
    {"lipschitz", map.lipschitz()},
    {"epsilon", eps},
    {"coverage_balls", region.centers.size()},
    {"coverage_radius", region.radius},
    {"coverage_bounds", {b.x_min, b.x_max, b.y_min, b.y_max}},
    {"bound_samples", check.samples},
    {"max_error", check.max_error},
    {"worst", point(check.worst)},
    {"passed", check.passed}};
  const fs::path cov = out.path("coverage.json");
  write_text(cov, report.dump(2) + "\n");
  out.add(cov);

  json summary = header("fit-perception", config);
  summary["coverage"] = report;
  summary["fit_seconds"] = fit_seconds;
  summary["elapsed_seconds"] = seconds_since(start);
  out.finish(std::move(summary));

  std::printf("fit: %zu samples, L=%.6g, epsilon=%.6g, max error=%.6g (%s)\n",
    map.training().size(), map.lipschitz(), eps, check.max_error,
    check.passed ? "pass" : "FAIL");
  if (!check.passed)
  {
    const json err = {{"error", {
      {"code", "BoundViolated"},
      {"message", "measured error exceeds the certified epsilon"},
      {"counterexample", {{"position", point(check.worst)},
        {"error", check.max_error}, {"epsilon", eps}}}}}};
    std::cerr << err.dump() << '\n';
    return kFailure;
  }
  return kOk;
}

//==============================================================================
int cmd_verify(const Config& config, const std::string& suite_name)
{
  const auto start = std::chrono::steady_clock::now();
  const Suite suite = parse_suite(suite_name);
  Output out(config.output);
  const std::vector<SuiteReport> reports = run_verify(config, suite);

  json list = json::array();
  const Check* failure = nullptr;
  std::string failed_suite;
  for (const SuiteReport& rep : reports)
  {
    json checks = json::array();
    for (const Check& c : rep.checks)
    {
      std::printf("%-9s %-32s %s value=%.6g limit=%.6g\n", rep.suite.c_str(),
        c.name.c_str(), c.passed ? "pass" : "FAIL", c.value, c.limit);
      json jc = {{"name", c.name}, {"passed", c.passed},
        {"value", c.value}, {"limit", c.limit}};
      if (!c.counterexample.empty())
        jc["counterexample"] = json::parse(c.counterexample);
      checks.push_back(std::move(jc));
    }
    list.push_back({{"suite", rep.suite}, {"passed", rep.passed()}, {"checks", checks}});
    if (!failure && rep.first_failure())
    {
      failure = rep.first_failure();
      failed_suite = rep.suite;
    }
  }

  const fs::path report = out.path("verify.json");
  write_text(report, list.dump(2) + "\n");
  out.add(report);

  json summary = header("verify", config);
  summary["suite"] = suite_name;
  summary["passed"] = failure == nullptr;
  summary["elapsed_seconds"] = seconds_since(start);
  out.finish(std::move(summary));

  if (failure)
  {
    json err = {{"error", {
      {"code", "CheckFailed"},
      {"suite", failed_suite},
      {"check", failure->name},
      {"value", failure->value},
      {"limit", failure->limit}}}};
    if (!failure->counterexample.empty())
      err["error"]["counterexample"] = json::parse(failure->counterexample);
    std::cerr << err.dump() << '\n';
    return kFailure;
  }
  return kOk;
}

//==============================================================================
int cmd_adversarial(const Config& config)
{
  const auto start = std::chrono::steady_clock::now();
  Output out(config.output);
  const DemoConfig& dc = config.adversarial;
  const DemoResult r = demo_stuck(dc);

  if (config.emit.csv)
  {
    const fs::path s = out.path("smooth.csv");
    const fs::path h = out.path("hybrid.csv");
    write_arc_csv(s, r.smooth);
    write_arc_csv(h, r.hybrid);
    out.add({s, h});
  }
  if (config.emit.svg)
  {
    const Covering cov = Covering::build(
      dc.obstacle.center, dc.obstacle.radius, dc.target, dc.target_margin);
    const PotentialField field(cov, dc.barrier);
    Rect view{dc.target.x, dc.target.x, dc.target.y, dc.target.y};
    auto include = [&](const Point2& p) {
      view.x_min = std::min(view.x_min, p.x);
      view.x_max = std::max(view.x_max, p.x);
      view.y_min = std::min(view.y_min, p.y);
      view.y_max = std::max(view.y_max, p.y);
    };
    const double a = cov.apex_offset();
    include(dc.obstacle.center - Vec2{a, a});
    include(dc.obstacle.center + Vec2{a, a});
    for (const HybridArc* arc : {&r.smooth, &r.hybrid})
      for (const ArcSample& s : arc->samples)
        include(s.state.p);
    const double pad = 0.1*std::max(view.width(), view.height());
    const double cx = 0.5*(view.x_min + view.x_max);
    const double cy = 0.5*(view.y_min + view.y_max);
    const double half = 0.5*std::max(view.width(), view.height()) + pad;
    view = {cx - half, cx + half, cy - half, cy + half};
    const LevelGrid grid = sample_levels(field, view, config.levelsets.resolution);
    const std::vector<SvgTrace> traces{
      {&r.smooth, "smooth", "#7f7f7f"},
      {&r.hybrid, "hybrid", ""}};
    const fs::path svg = out.path("adversarial.svg");
    write_svg(svg, field, grid, levels_for(config, grid), traces);
    out.add(svg);
  }

  const bool smooth_stuck = r.smooth_final_distance > 5.0;
  const bool hybrid_converged = r.hybrid.termination == Termination::Converged;
  json summary = header("adversarial", config);
  summary["saddle"] = {
    {"position", point(r.saddle.position)},
    {"stable_direction", point(r.saddle.stable_direction)},
    {"unstable_direction", point(r.saddle.unstable_direction)}};
  summary["initial"] = point(r.initial);
  summary["budget"] = dc.budget;
  summary["budget_zero"] = dc.budget == 0.0;
  summary["max_disturbance"] = r.max_disturbance;
  summary["smooth"] = {
    {"termination", std::string(to_string(r.smooth.termination))},
    {"final_distance", r.smooth_final_distance},
    {"stuck_duration", r.smooth_stuck_duration},
    {"max_saddle_distance", r.smooth_max_saddle_distance},
    {"stuck", smooth_stuck}};
  summary["hybrid"] = {
    {"termination", std::string(to_string(r.hybrid.termination))},
    {"final_distance", r.hybrid_final_distance},
    {"jumps", r.hybrid.jump_count()},
    {"converged", hybrid_converged}};
  summary["contrast"] = smooth_stuck && hybrid_converged;
  summary["elapsed_seconds"] = seconds_since(start);
  out.finish(std::move(summary));

  std::printf("saddle (%.6g, %.6g); smooth final distance %.4f (%s); "
    "hybrid final distance %.4f (%s)\n",
    r.saddle.position.x, r.saddle.position.y,
    r.smooth_final_distance, smooth_stuck ? "stuck" : "escaped",
    r.hybrid_final_distance, std::string(to_string(r.hybrid.termination)).c_str());
  return kOk;
}

//==============================================================================
int cmd_export_levelsets(const Config& config)
{
  const auto start = std::chrono::steady_clock::now();
  Output out(config.output);
  const PotentialField field = config.scenario.field();
  const LevelGrid grid = level_grid(config, field);
  emit_levelsets(out, config, grid);
  if (config.emit.svg)
    emit_svg(out, config, field, grid, {}, "levelsets.svg");

  json summary = header("export-levelsets", config);
  summary["resolution"] = config.levelsets.resolution;
  summary["levels"] = levels_for(config, grid);
  summary["elapsed_seconds"] = seconds_since(start);
  out.finish(std::move(summary));
  return kOk;
}

//==============================================================================
int report_error(const std::string& command, const std::string& code,
  const std::string& message, int exit_code)
{
  const json err = {{"error", {
    {"code", code}, {"command", command}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
  return exit_code;
}

} // namespace

//==============================================================================
int main(int argc, char** argv)
{
  CLI::App app{"Hybrid feedback navigation around an obstacle with learned perception"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "Scenario configuration (JSON)")->required();
    cmd->add_option("--seed", opt.seed, "Override the configured seed");
    cmd->add_option("--out", opt.out, "Output directory");
    cmd->add_option("--workers", opt.workers, "Worker threads")->capture_default_str();
    cmd->add_option("--emit", opt.emit, "Comma separated: csv, svg, levelsets");
    return cmd;
  };

  CLI::App* simulate = add_common(app.add_subcommand("simulate", "Run every initial condition once"));
  CLI::App* fit = add_common(app.add_subcommand("fit-perception", "Fit the perception map and certify its error bound"));
  CLI::App* verify = add_common(app.add_subcommand("verify", "Run invariant suites"));
  verify->add_option("--suite", opt.suite, "geometry, gradient, lyapunov, coverage or all")
    ->capture_default_str();
  CLI::App* adversarial = add_common(app.add_subcommand("adversarial", "Smooth vs hybrid under a saddle adversary"));
  CLI::App* sweep_cmd = add_common(app.add_subcommand("sweep", "Run the scenario over consecutive seeds"));
  CLI::App* levelsets = add_common(app.add_subcommand("export-levelsets", "Write V_1/V_2 grids and contours"));

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    return report_error("", "UsageError", e.what(), kConfigError);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Config config;
  try
  {
    config = resolve(opt);
  }
  catch (const Error& e)
  {
    return report_error(command, std::string(to_string(e.code())), e.what(), kConfigError);
  }

  try
  {
    if (*simulate) return cmd_simulate(config, opt.workers);
    if (*fit) return cmd_fit_perception(config);
    if (*verify) return cmd_verify(config, opt.suite);
    if (*adversarial) return cmd_adversarial(config);
    if (*sweep_cmd) return cmd_sweep(config, opt.workers);
    if (*levelsets) return cmd_export_levelsets(config);
  }
  catch (const Error& e)
  {
    return report_error(command, std::string(to_string(e.code())), e.what(),
      e.code() == ErrorCode::ConfigError ? kConfigError : kFailure);
  }
  catch (const std::exception& e)
  {
    return report_error(command, "InternalError", e.what(), kFailure);
  }
  return kFailure;
}
