import dataclasses
import json

import pytest

from kvseek.errors import ConfigError
from kvseek.probe import ProbeParams
from kvseek.sim.scenario import (DEFAULTS, Scenario, load_config, load_config_list, merge,
                                 scenario)


def test_defaults_are_reference_set():
    sc = scenario()
    assert (sc.controller.gain, sc.controller.c, sc.controller.filter_cutoff) == (0.2, 0.01, 2.0)
    assert (sc.probe.amplitude, sc.probe.frequency) == (0.2, 8.0)
    assert (sc.map.theta_star, sc.map.y_star, sc.map.hessian) == (8.0, 64.0, -1.0)
    assert (sc.grid.domain_length, sc.kv.damping, sc.kv.stiffness_inverse) == (1.0, 0.1, 1.0)
    assert (sc.grid.points, sc.dt, sc.t_end) == (101, 1e-3, 400.0)
    assert sc.controller.washout_cutoff == 0.0
    assert sc.steps == 400000
    assert sc.K_bar == -0.2
    assert sc.initial_field == "probe" and sc.mode == "nonaverage"
    assert sc.delta == 0.01 and sc.window_fraction == 0.2


def test_round_trip():
    sc = scenario(name="x", probe={"amplitude": 0.1}, controller={"washout_cutoff": 1.0},
                  mode="average", initial_field="zero")
    assert Scenario.from_dict(sc.to_dict()) == sc


def test_merge_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="plant.bogus"):
        merge(DEFAULTS, {"plant": {"bogus": 1}})
    with pytest.raises(ConfigError):
        merge(DEFAULTS, {"plant": 3})


@pytest.mark.parametrize("over", [
    {"dt": 0.0}, {"t_end": -1.0}, {"initial_field": "random"}, {"mode": "fast"},
    {"boundary_velocity": "guess"}, {"window_fraction": 0.7}, {"output": {"stride": 0}},
    {"output": {"stride": 3, "snapshot_stride": 10}}, {"delta": 10.0},
    {"map": {"hessian": 1.0}}, {"plant": {"damping": 0.0}}, {"plant": {"points": 2}},
    {"controller": {"gain": -1.0}}, {"probe": {"amplitude": 0.0}}, {"probe": {"frequency": "x"}},
])
def test_invalid_configs(over):
    with pytest.raises(ConfigError):
        scenario(**over)


def test_dither_off_allowed_in_average_mode():
    sc = scenario(mode="average", probe={"amplitude": 0.0})
    assert sc.probe.amplitude == 0.0


def test_mismatched_probe_rejected():
    sc = scenario()
    with pytest.raises(ConfigError):
        dataclasses.replace(sc, probe=ProbeParams(0.2, 8.0, 0.2, 1.0))
    with pytest.raises(ConfigError):
        dataclasses.replace(sc, probe=ProbeParams(0.2, 8.0, 0.1, 2.0))


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"name": "t", "probe": {"frequency": 16.0}}))
    sc = load_config(p)
    assert sc.name == "t" and sc.probe.frequency == 16.0
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config(arr)


def test_load_config_list_forms(tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps([{"name": "p"}, {"name": "q", "dt": 2e-3}]))
    assert [s.name for s in load_config_list(a)] == ["p", "q"]
    b = tmp_path / "b.json"
    b.write_text(json.dumps({"base": {"name": "s", "t_end": 10.0},
                             "scenarios": [{"probe": {"amplitude": 0.1}}, {"name": "named"}]}))
    got = load_config_list(b)
    assert [s.name for s in got] == ["s-0", "named"]
    assert all(s.t_end == 10.0 for s in got) and got[0].probe.amplitude == 0.1
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"name": "single"}))
    assert [s.name for s in load_config_list(c)] == ["single"]
    d = tmp_path / "d.json"
    d.write_text("3")
    with pytest.raises(ConfigError):
        load_config_list(d)
