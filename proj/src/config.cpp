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

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace hybridnav {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& msg)
{
  throw Error(ErrorCode::ConfigError, (path.empty() ? "<root>" : path) + ": " + msg);
}

//==============================================================================
/// Reads one JSON object, remembering which keys were consumed so that
/// leftovers can be reported.
class Reader
{
public:
  Reader(const json& j, std::string path)
  : _j(j), _path(std::move(path))
  {
    if (!j.is_object())
      config_error(_path, "expected an object");
  }

  const std::string& path() const { return _path; }

  std::string child(const std::string& key) const
  {
    return _path.empty() ? key : _path + "." + key;
  }

  const json* find(const std::string& key)
  {
    _seen.insert(key);
    const auto it = _j.find(key);
    return it == _j.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key)
  {
    const json* v = find(key);
    if (!v)
      config_error(child(key), "missing required key");
    return *v;
  }

  double number(const std::string& key, double fallback)
  {
    const json* v = find(key);
    return v ? as_number(*v, child(key)) : fallback;
  }

  std::size_t count(const std::string& key, std::size_t fallback)
  {
    const json* v = find(key);
    return v ? as_count(*v, child(key)) : fallback;
  }

  bool flag(const std::string& key, bool fallback)
  {
    const json* v = find(key);
    if (!v)
      return fallback;
    if (!v->is_boolean())
      config_error(child(key), "expected a boolean");
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback)
  {
    const json* v = find(key);
    if (!v)
      return fallback;
    if (!v->is_string())
      config_error(child(key), "expected a string");
    return v->get<std::string>();
  }

  void finish() const
  {
    for (const auto& [key, value] : _j.items())
    {
      if (!_seen.count(key))
        config_error(child(key), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& path)
  {
    if (!v.is_number())
      config_error(path, "expected a number");
    return v.get<double>();
  }

  static std::size_t as_count(const json& v, const std::string& path)
  {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      config_error(path, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

private:
  const json& _j;
  std::string _path;
  std::set<std::string> _seen;
};

//==============================================================================
Point2 read_point(const json& v, const std::string& path)
{
  if (!v.is_array() || v.size() != 2)
    config_error(path, "expected [x, y]");
  return {Reader::as_number(v[0], path + "[0]"), Reader::as_number(v[1], path + "[1]")};
}

std::vector<Point2> read_points(const json& v, const std::string& path)
{
  if (!v.is_array())
    config_error(path, "expected a list of [x, y]");
  std::vector<Point2> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(read_point(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::pair<double, double> read_interval(const json& v, const std::string& path)
{
  if (!v.is_array() || v.size() != 2)
    config_error(path, "expected [lo, hi]");
  const double lo = Reader::as_number(v[0], path + "[0]");
  const double hi = Reader::as_number(v[1], path + "[1]");
  if (!(lo <= hi))
    config_error(path, "expected lo <= hi");
  return {lo, hi};
}

Rect read_rect(const json& v, const std::string& path)
{
  Reader r(v, path);
  const auto [x0, x1] = read_interval(r.require("x"), r.child("x"));
  const auto [y0, y1] = read_interval(r.require("y"), r.child("y"));
  r.finish();
  return {x0, x1, y0, y1};
}

std::vector<Rect> read_rects(const json& v, const std::string& path)
{
  if (!v.is_array())
    config_error(path, "expected a list of rectangles");
  std::vector<Rect> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(read_rect(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Obstacle read_obstacle(const json& v, const std::string& path)
{
  Reader r(v, path);
  Obstacle o;
  o.center = read_point(r.require("center"), r.child("center"));
  o.radius = Reader::as_number(r.require("radius"), r.child("radius"));
  r.finish();
  return o;
}

//==============================================================================
ControllerParams read_controller(const json& v, const std::string& path)
{
  Reader r(v, path);
  ControllerParams c;
  c.gain = r.number("gain", c.gain);
  c.chi = r.number("chi", c.chi);
  c.lambda = r.number("lambda", c.lambda);
  c.step = r.number("step", c.step);
  c.t_max = r.number("t_max", c.t_max);
  c.j_max = r.count("j_max", c.j_max);
  c.dwell = r.number("dwell", c.dwell);
  c.delta = r.number("delta", c.delta);
  c.projection_margin = r.number("projection_margin", c.projection_margin);
  const std::string policy = r.text("invalid_estimate", "project");
  if (policy == "project")
    c.invalid_estimate = InvalidEstimatePolicy::Project;
  else if (policy == "pause")
    c.invalid_estimate = InvalidEstimatePolicy::Pause;
  else if (policy == "hold")
    c.invalid_estimate = InvalidEstimatePolicy::Hold;
  else if (policy == "halt")
    c.invalid_estimate = InvalidEstimatePolicy::Halt;
  else
    config_error(r.child("invalid_estimate"), "expected \"project\", \"pause\", \"hold\" or \"halt\"");
  r.finish();
  return c;
}

ErrorModel read_errors(const json& v, const std::string& path)
{
  Reader r(v, path);
  ErrorModel e;
  e.sigma = r.number("sigma", e.sigma);
  e.dropout = r.number("dropout", e.dropout);
  if (const json* o = r.find("occlusions"))
    e.occlusions = read_rects(*o, r.child("occlusions"));
  r.finish();
  return e;
}

PerceptionConfig read_perception(const json& v, const std::string& path)
{
  Reader r(v, path);
  PerceptionConfig p;
  p.enabled = r.flag("enabled", true);
  if (p.enabled || r.find("region"))
    p.region = read_rect(r.require("region"), r.child("region"));
  p.spacing = r.number("spacing", p.spacing);
  const std::string mode = r.text("mode", "nearest");
  if (mode == "nearest")
    p.mode = PredictionMode::NearestNeighbor;
  else if (mode == "local_linear")
    p.mode = PredictionMode::LocalLinear;
  else
    config_error(r.child("mode"), "expected \"nearest\" or \"local_linear\"");
  if (const json* res = r.find("resolution"))
  {
    if (!res->is_array() || res->size() != 2)
      config_error(r.child("resolution"), "expected [width, height]");
    p.width = static_cast<int>(Reader::as_count((*res)[0], r.child("resolution")));
    p.height = static_cast<int>(Reader::as_count((*res)[1], r.child("resolution")));
  }
  p.blob_sigma = r.number("blob_sigma", p.blob_sigma);
  if (const json* o = r.find("training_occlusions"))
    p.training_occlusions = read_rects(*o, r.child("training_occlusions"));
  r.finish();
  return p;
}

TargetProvider read_target(const json& v, const std::string& path)
{
  Reader r(v, path);
  TargetProvider t;
  const std::string mode = r.text("mode", "static");
  if (mode == "static")
  {
    t.mode = TargetMode::Static;
    t.position = read_point(r.require("position"), r.child("position"));
  }
  else if (mode == "waypoints" || mode == "leader")
  {
    t.mode = mode == "leader" ? TargetMode::Leader : TargetMode::Waypoints;
    t.path = read_points(r.require("path"), r.child("path"));
    t.speed = Reader::as_number(r.require("speed"), r.child("speed"));
  }
  else
  {
    config_error(r.child("mode"), "expected \"static\", \"waypoints\" or \"leader\"");
  }
  if (const json* w = r.find("window"))
    t.window = read_rect(*w, r.child("window"));
  r.finish();
  return t;
}

Scenario read_scenario(const json& v, const std::string& path)
{
  Reader r(v, path);
  Scenario s;
  s.name = r.text("name", s.name);
  s.obstacle = read_obstacle(r.require("obstacle"), r.child("obstacle"));
  s.extent = read_rect(r.require("extent"), r.child("extent"));
  s.target = read_target(r.require("target"), r.child("target"));
  s.target_margin = r.number("target_margin", s.target_margin);
  s.barrier.width = r.number("barrier_width", s.barrier.width);
  if (const json* c = r.find("controller"))
    s.controller = read_controller(*c, r.child("controller"));
  if (const json* p = r.find("perception"))
    s.perception = read_perception(*p, r.child("perception"));
  if (const json* e = r.find("errors"))
    s.errors = read_errors(*e, r.child("errors"));
  if (const json* e = r.find("leader_errors"))
    s.leader_errors = read_errors(*e, r.child("leader_errors"));
  s.paired_occlusion = r.flag("paired_occlusion", s.paired_occlusion);
  s.tracking_bound = r.number("tracking_bound", s.tracking_bound);
  s.initial_positions =
    read_points(r.require("initial_positions"), r.child("initial_positions"));
  r.finish();
  return s;
}

DemoConfig read_demo(const json& v, const std::string& path)
{
  Reader r(v, path);
  DemoConfig d;
  if (const json* o = r.find("obstacle"))
    d.obstacle = read_obstacle(*o, r.child("obstacle"));
  if (const json* t = r.find("target"))
    d.target = read_point(*t, r.child("target"));
  d.target_margin = r.number("target_margin", d.target_margin);
  d.repulsion = r.number("repulsion", d.repulsion);
  d.barrier.width = r.number("barrier_width", d.barrier.width);
  d.budget = r.number("budget", d.budget);
  d.engagement_radius = r.number("engagement_radius", d.engagement_radius);
  d.directions = r.count("directions", d.directions);
  d.horizon = r.number("horizon", d.horizon);
  if (const json* o = r.find("initial_offset"))
    d.initial_offset = read_point(*o, r.child("initial_offset"));
  if (const json* sm = r.find("smooth"))
  {
    Reader s(*sm, r.child("smooth"));
    d.smooth.gain = s.number("gain", d.smooth.gain);
    d.smooth.step = s.number("step", d.smooth.step);
    d.smooth.delta = s.number("delta", d.smooth.delta);
    s.finish();
  }
  if (const json* h = r.find("hybrid"))
    d.hybrid = read_controller(*h, r.child("hybrid"));
  r.finish();
  return d;
}

VerifyConfig read_verify(const json& v, const std::string& path)
{
  Reader r(v, path);
  VerifyConfig c;
  c.geometry_samples = r.count("geometry_samples", c.geometry_samples);
  c.gradient_points = r.count("gradient_points", c.gradient_points);
  c.fd_step = r.number("fd_step", c.fd_step);
  c.gradient_tolerance = r.number("gradient_tolerance", c.gradient_tolerance);
  c.min_boundary_distance = r.number("min_boundary_distance", c.min_boundary_distance);
  c.max_boundary_distance = r.number("max_boundary_distance", c.max_boundary_distance);
  c.lyapunov_runs = r.count("lyapunov_runs", c.lyapunov_runs);
  c.max_jumps = r.count("max_jumps", c.max_jumps);
  c.coverage_samples = r.count("coverage_samples", c.coverage_samples);
  r.finish();
  return c;
}

EmitFlags read_emit(const json& v, const std::string& path)
{
  if (!v.is_array())
    config_error(path, "expected a list of output kinds");
  EmitFlags e{false, false, false};
  for (const json& item : v)
  {
    if (!item.is_string())
      config_error(path, "expected strings");
    const std::string s = item.get<std::string>();
    if (s == "csv") e.csv = true;
    else if (s == "svg") e.svg = true;
    else if (s == "levelsets") e.levelsets = true;
    else config_error(path, "unknown output kind \"" + s + "\"");
  }
  return e;
}

//==============================================================================
json point_json(const Point2& p) { return json::array({p.x, p.y}); }

json rect_json(const Rect& r)
{
  return {{"x", {r.x_min, r.x_max}}, {"y", {r.y_min, r.y_max}}};
}

json rects_json(const std::vector<Rect>& rs)
{
  json out = json::array();
  for (const Rect& r : rs)
    out.push_back(rect_json(r));
  return out;
}

json obstacle_json(const Obstacle& o)
{
  return {{"center", point_json(o.center)}, {"radius", o.radius}};
}

json controller_json(const ControllerParams& c)
{
  return {
    {"gain", c.gain}, {"chi", c.chi}, {"lambda", c.lambda}, {"step", c.step},
    {"t_max", c.t_max}, {"j_max", c.j_max}, {"dwell", c.dwell},
    {"delta", c.delta},
    {"invalid_estimate", std::string(to_string(c.invalid_estimate))},
    {"projection_margin", c.projection_margin}};
}

json errors_json(const ErrorModel& e)
{
  return {{"sigma", e.sigma}, {"dropout", e.dropout},
    {"occlusions", rects_json(e.occlusions)}};
}

} // anonymous namespace

//==============================================================================
EmitFlags parse_emit(const std::string& list)
{
  json items = json::array();
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    if (!item.empty())
      items.push_back(item);
  }
  return read_emit(items, "--emit");
}

//==============================================================================
Config parse_config(const std::string& text)
{
  json root;
  try
  {
    root = json::parse(text);
  }
  catch (const json::parse_error& e)
  {
    config_error("", std::string("malformed JSON: ") + e.what());
  }

  Reader r(root, "");
  const json& version = r.require("schema_version");
  if (!version.is_number_integer() || version.get<long long>() != Config::schema_version)
  {
    config_error("schema_version",
      "unsupported version (expected " + std::to_string(Config::schema_version) + ")");
  }

  Config c;
  c.scenario = read_scenario(r.require("scenario"), "scenario");
  c.output = r.text("output", c.output.string());
  if (const json* s = r.find("seed"))
  {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
      config_error("seed", "expected a non-negative integer");
    c.seed = s->get<std::uint64_t>();
  }
  c.scenario.seed = c.seed;
  if (const json* e = r.find("emit"))
    c.emit = read_emit(*e, "emit");
  if (const json* s = r.find("sweep"))
  {
    Reader sw(*s, "sweep");
    c.sweep.seeds = sw.count("seeds", c.sweep.seeds);
    sw.finish();
  }
  if (const json* v = r.find("verify"))
    c.verify = read_verify(*v, "verify");
  if (const json* a = r.find("adversarial"))
    c.adversarial = read_demo(*a, "adversarial");
  if (const json* l = r.find("levelsets"))
  {
    Reader lr(*l, "levelsets");
    c.levelsets.resolution = lr.count("resolution", c.levelsets.resolution);
    if (const json* levels = lr.find("levels"))
    {
      if (!levels->is_array())
        config_error("levelsets.levels", "expected a list of numbers");
      for (const json& x : *levels)
        c.levelsets.levels.push_back(Reader::as_number(x, "levelsets.levels"));
    }
    lr.finish();
    if (c.levelsets.resolution < 2)
      config_error("levelsets.resolution", "expected >= 2");
  }
  r.finish();

  try
  {
    c.scenario.validate();
    c.adversarial.hybrid.validate();
  }
  catch (const Error& e)
  {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return c;
}

//==============================================================================
Config load_config(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

//==============================================================================
std::string to_json(const Config& c, int indent)
{
  const Scenario& s = c.scenario;

  json target;
  target["mode"] = std::string(to_string(s.target.mode));
  if (s.target.mode == TargetMode::Static)
  {
    target["position"] = point_json(s.target.position);
  }
  else
  {
    json path = json::array();
    for (const Point2& p : s.target.path)
      path.push_back(point_json(p));
    target["path"] = path;
    target["speed"] = s.target.speed;
  }
  if (s.target.window)
    target["window"] = rect_json(*s.target.window);

  json perception = {
    {"enabled", s.perception.enabled},
    {"spacing", s.perception.spacing},
    {"mode", s.perception.mode == PredictionMode::NearestNeighbor
      ? "nearest" : "local_linear"},
    {"resolution", {s.perception.width, s.perception.height}},
    {"blob_sigma", s.perception.blob_sigma},
    {"training_occlusions", rects_json(s.perception.training_occlusions)}};
  if (s.perception.enabled)
    perception["region"] = rect_json(s.perception.region);

  json inits = json::array();
  for (const Point2& p : s.initial_positions)
    inits.push_back(point_json(p));

  json scenario = {
    {"name", s.name},
    {"obstacle", obstacle_json(s.obstacle)},
    {"extent", rect_json(s.extent)},
    {"target", target},
    {"target_margin", s.target_margin},
    {"barrier_width", s.barrier.width},
    {"controller", controller_json(s.controller)},
    {"perception", perception},
    {"errors", errors_json(s.errors)},
    {"leader_errors", errors_json(s.leader_errors)},
    {"paired_occlusion", s.paired_occlusion},
    {"tracking_bound", s.tracking_bound},
    {"initial_positions", inits}};

  json emit = json::array();
  if (c.emit.csv) emit.push_back("csv");
  if (c.emit.svg) emit.push_back("svg");
  if (c.emit.levelsets) emit.push_back("levelsets");

  const VerifyConfig& v = c.verify;
  const DemoConfig& d = c.adversarial;
  json root = {
    {"schema_version", Config::schema_version},
    {"seed", c.seed},
    {"output", c.output.string()},
    {"emit", emit},
    {"scenario", scenario},
    {"sweep", {{"seeds", c.sweep.seeds}}},
    {"verify", {
      {"geometry_samples", v.geometry_samples},
      {"gradient_points", v.gradient_points},
      {"fd_step", v.fd_step},
      {"gradient_tolerance", v.gradient_tolerance},
      {"min_boundary_distance", v.min_boundary_distance},
      {"max_boundary_distance", v.max_boundary_distance},
      {"lyapunov_runs", v.lyapunov_runs},
      {"max_jumps", v.max_jumps},
      {"coverage_samples", v.coverage_samples}}},
    {"adversarial", {
      {"obstacle", obstacle_json(d.obstacle)},
      {"target", point_json(d.target)},
      {"target_margin", d.target_margin},
      {"repulsion", d.repulsion},
      {"barrier_width", d.barrier.width},
      {"budget", d.budget},
      {"engagement_radius", d.engagement_radius},
      {"directions", d.directions},
      {"horizon", d.horizon},
      {"initial_offset", point_json(d.initial_offset)},
      {"smooth", {{"gain", d.smooth.gain}, {"step", d.smooth.step},
        {"delta", d.smooth.delta}}},
      {"hybrid", controller_json(d.hybrid)}}},
    {"levelsets", {{"resolution", c.levelsets.resolution},
      {"levels", c.levelsets.levels}}}};
  return root.dump(indent);
}

} // namespace hybridnav
