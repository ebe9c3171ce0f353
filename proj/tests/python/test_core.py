# Copyright (C) 2026 The hybridnav Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import pytest

import hybridnav as hn


def test_covering_radii():
    cov = hn.Covering((0.0, 0.0), 4.0, (20.0, 0.0))
    assert cov.inscribed_radius == pytest.approx(8.0)
    assert cov.circumscribed_radius == pytest.approx(8.0 * math.sqrt(2.0))
    assert cov.in_diamond((0.0, 0.0))
    assert not cov.in_union((0.0, 0.0))
    assert cov.in_region(1, (20.0, 0.0)) and cov.in_region(2, (20.0, 0.0))


def test_errors_carry_a_code():
    with pytest.raises(hn.Error) as e:
        hn.Covering((0.0, 0.0), 4.0, (5.0, 0.0))
    assert e.value.code == "TargetTooClose"
    with pytest.raises(hn.Error) as e:
        hn.parse_config("{")
    assert e.value.code == "ConfigError"


def test_potential_far_from_the_barrier():
    field = hn.PotentialField(hn.Covering((0.0, 0.0), 4.0, (20.0, 0.0)))
    # Deep inside O_1 the barrier is off: V = |p - p_T|^2.
    assert field.value(1, (0.0, -30.0)) == pytest.approx(1300.0)
    gx, gy = field.gradient(1, (0.0, -30.0))
    assert (gx, gy) == pytest.approx((-40.0, -60.0))
    assert math.isinf(field.value(1, (0.0, 0.0)))


def test_config_round_trip(scenario_dir):
    c = hn.load_config(str(scenario_dir / "fig7.json"))
    assert c.name == "fig7"
    assert c.sweep_seeds == 100
    again = hn.parse_config(c.to_json())
    assert again.to_json() == c.to_json()


def test_nominal_runs_converge(scenario_dir):
    c = hn.load_config(str(scenario_dir / "nominal.json"))
    runs = hn.run_scenario(c)
    assert len(runs) == 6
    for r in runs:
        assert r["error"] == ""
        assert r["metrics"]["converged"]
        assert r["metrics"]["min_obstacle_clearance"] > 0.0
        arc = r["arc"]
        assert len(arc["t"]) == len(arc["x"]) == len(arc["event"])
        assert arc["termination"] == "converged"


def test_arc_csv_is_deterministic(scenario_dir):
    c = hn.load_config(str(scenario_dir / "fig7.json"))
    a = hn.arc_csv(c, 0, seed=3)
    assert a.startswith("t,j,x,y,q,est_x,est_y,V1,V2,event\n")
    assert a == hn.arc_csv(c, 0, seed=3)
    assert a != hn.arc_csv(c, 0, seed=4)


def test_demo_contrast(scenario_dir):
    d = hn.demo_stuck(hn.load_config(str(scenario_dir / "adversarial.json")))
    assert d["smooth_final_distance"] > 5.0
    assert d["hybrid"]["termination"] == "converged"
    assert d["max_disturbance"] <= 0.1 + 1e-12


def test_verify_geometry(scenario_dir):
    c = hn.load_config(str(scenario_dir / "nominal.json"))
    (rep,) = hn.verify(c, "geometry")
    assert rep["passed"]
    names = [ch["name"] for ch in rep["checks"]]
    assert "inscribed_radius" in names
    with pytest.raises(hn.Error):
        hn.verify(c, "everything")
