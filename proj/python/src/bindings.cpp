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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace hybridnav;

namespace {

py::tuple point(const Point2& p)
{
  return py::make_tuple(p.x, p.y);
}

Point2 to_point(const std::pair<double, double>& p)
{
  return {p.first, p.second};
}

Mode to_mode(int q)
{
  if (q != 1 && q != 2)
    throw py::value_error("mode must be 1 or 2");
  return static_cast<Mode>(q);
}

py::dict arc_dict(const HybridArc& arc)
{
  py::list t, j, x, y, q, ex, ey, v1, v2, ev;
  for (const ArcSample& s : arc.samples)
  {
    t.append(s.time.t);
    j.append(s.time.j);
    x.append(s.state.p.x);
    y.append(s.state.p.y);
    q.append(static_cast<int>(s.state.q));
    ex.append(s.estimate.x);
    ey.append(s.estimate.y);
    v1.append(s.v1);
    v2.append(s.v2);
    ev.append(std::string(to_string(s.event)));
  }
  py::dict d;
  d["t"] = t;
  d["j"] = j;
  d["x"] = x;
  d["y"] = y;
  d["q"] = q;
  d["est_x"] = ex;
  d["est_y"] = ey;
  d["V1"] = v1;
  d["V2"] = v2;
  d["event"] = ev;
  d["termination"] = std::string(to_string(arc.termination));
  d["jumps"] = arc.jump_count();
  return d;
}

py::dict metrics_dict(const RunMetrics& m)
{
  py::dict d;
  d["converged"] = m.converged;
  d["time_to_converge"] = m.time_to_converge ? py::cast(*m.time_to_converge) : py::none();
  d["jump_count"] = m.jump_count;
  d["min_obstacle_clearance"] = m.min_obstacle_clearance;
  d["max_perception_error"] = m.max_perception_error;
  d["tracking_error"] = m.tracking_error ? py::cast(*m.tracking_error) : py::none();
  return d;
}

py::dict run_dict(const RunResult& r)
{
  py::dict d;
  d["index"] = r.index;
  d["initial"] = point(r.initial);
  d["seed"] = r.seed;
  d["arc"] = arc_dict(r.arc);
  d["metrics"] = metrics_dict(r.metrics);
  d["reference"] = r.reference ? py::object(metrics_dict(*r.reference)) : py::none();
  d["error"] = r.error;
  return d;
}

py::dict report_dict(const SuiteReport& r)
{
  py::list checks;
  for (const Check& c : r.checks)
  {
    py::dict d;
    d["name"] = c.name;
    d["passed"] = c.passed;
    d["value"] = c.value;
    d["limit"] = c.limit;
    d["counterexample"] = c.counterexample;
    checks.append(d);
  }
  py::dict d;
  d["suite"] = r.suite;
  d["passed"] = r.passed();
  d["checks"] = checks;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Hybrid obstacle avoidance with learned perception.";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&]() {
    return py::object(py::exception<Error>(m, "Error", PyExc_RuntimeError));
  });
  py::register_exception_translator([](std::exception_ptr p) {
    try
    {
      if (p)
        std::rethrow_exception(p);
    }
    catch (const Error& e)
    {
      py::object type = error_type.get_stored();
      py::object exc = type(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  py::class_<Covering>(m, "Covering")
    .def(py::init([](std::pair<double, double> center, double radius,
                     std::pair<double, double> target, double margin) {
           return Covering::build(to_point(center), radius, to_point(target), margin);
         }),
      py::arg("center"), py::arg("radius"), py::arg("target"), py::arg("target_margin") = 0.5)
    .def_property_readonly("inscribed_radius", &Covering::inscribed_radius)
    .def_property_readonly("circumscribed_radius", &Covering::circumscribed_radius)
    .def_property_readonly("frame_angle", &Covering::frame_angle)
    .def("in_region", [](const Covering& c, int q, std::pair<double, double> p) {
      return c.in_region(to_mode(q), to_point(p));
    })
    .def("in_union", [](const Covering& c, std::pair<double, double> p) {
      return c.in_union(to_point(p));
    })
    .def("in_diamond", [](const Covering& c, std::pair<double, double> p) {
      return c.in_diamond(to_point(p));
    })
    .def("dist_to_complement", [](const Covering& c, int q, std::pair<double, double> p) {
      return c.dist_to_complement(to_mode(q), to_point(p));
    });

  py::class_<PotentialField>(m, "PotentialField")
    .def(py::init([](const Covering& c, double w) { return PotentialField(c, BarrierParams{w}); }),
      py::arg("covering"), py::arg("barrier_width") = 1.0)
    .def_property_readonly("covering", &PotentialField::covering)
    .def("value", [](const PotentialField& f, int q, std::pair<double, double> p) {
      return f.value(to_mode(q), to_point(p));
    })
    .def("gradient", [](const PotentialField& f, int q, std::pair<double, double> p) {
      return point(f.gradient(to_mode(q), to_point(p)));
    });

  py::class_<Config>(m, "Config")
    .def_property_readonly("name", [](const Config& c) { return c.scenario.name; })
    .def_readonly("seed", &Config::seed)
    .def_property_readonly("sweep_seeds", [](const Config& c) { return c.sweep.seeds; })
    .def("to_json", [](const Config& c) { return to_json(c); })
    .def("field", [](const Config& c) { return c.scenario.field(); });

  m.def("load_config", [](const std::string& path) { return load_config(path); },
    py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("text"));

  m.def("run_scenario",
    [](const Config& c, std::optional<std::uint64_t> seed, std::size_t workers) {
      Scenario s = c.scenario;
      s.seed = seed.value_or(c.seed);
      std::vector<RunResult> runs;
      {
        py::gil_scoped_release release;
        runs = run_scenario(s, workers);
      }
      py::list out;
      for (const RunResult& r : runs)
        out.append(run_dict(r));
      return out;
    },
    py::arg("config"), py::arg("seed") = py::none(), py::arg("workers") = 1);

  m.def("arc_csv",
    [](const Config& c, std::size_t index, std::optional<std::uint64_t> seed) {
      Scenario s = c.scenario;
      s.seed = seed.value_or(c.seed);
      if (index >= s.initial_positions.size())
        throw py::index_error("no such initial position");
      const ScenarioContext ctx(s);
      std::ostringstream out;
      write_arc_csv(out, ctx.run(index, run_seed(s.seed, index)).arc);
      return out.str();
    },
    py::arg("config"), py::arg("index") = 0, py::arg("seed") = py::none());

  m.def("demo_stuck", [](const Config& c) {
    DemoResult r;
    {
      py::gil_scoped_release release;
      r = demo_stuck(c.adversarial);
    }
    py::dict d;
    d["saddle"] = point(r.saddle.position);
    d["initial"] = point(r.initial);
    d["smooth"] = arc_dict(r.smooth);
    d["hybrid"] = arc_dict(r.hybrid);
    d["smooth_final_distance"] = r.smooth_final_distance;
    d["hybrid_final_distance"] = r.hybrid_final_distance;
    d["smooth_stuck_duration"] = r.smooth_stuck_duration;
    d["max_disturbance"] = r.max_disturbance;
    return d;
  }, py::arg("config"));

  m.def("verify", [](const Config& c, const std::string& suite) {
    const Suite s = parse_suite(suite);
    std::vector<SuiteReport> reps;
    {
      py::gil_scoped_release release;
      reps = run_verify(c, s);
    }
    py::list out;
    for (const SuiteReport& r : reps)
      out.append(report_dict(r));
    return out;
  }, py::arg("config"), py::arg("suite") = "all");
}
