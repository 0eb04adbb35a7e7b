"""Scenario definition and JSON config ingestion.

Every field has a default; the defaults are the reference parameter set
(K=0.2, c=0.01, c_bar=2, a=0.2, w=8, D=1, theta*=8, y*=64, H=-1, d=0.1).
A config file only needs the keys it overrides.
"""

import copy
from dataclasses import dataclass
import json
import math

from kvseek.controller import ControllerParams
from kvseek.errors import ConfigError
from kvseek.kernel import KernelParams
from kvseek.probe import ProbeParams
from kvseek.sim.diagnostics import check_lyapunov_delta
from kvseek.static_map import QuadraticMap
from kvseek.wave_solver import Grid, KvParams

DEFAULTS = {
    "name": "reference",
    "map": {"theta_star": 8.0, "y_star": 64.0, "hessian": -1.0},
    "plant": {"damping": 0.1, "stiffness_inverse": 1.0, "domain_length": 1.0, "points": 101},
    "probe": {"amplitude": 0.2, "frequency": 8.0},
    "controller": {"gain": 0.2, "c": 0.01, "filter_cutoff": 2.0, "washout_cutoff": 0.0},
    "dt": 1e-3,
    "t_end": 400.0,
    "theta_hat_0": 0.0,
    "initial_field": "probe",
    "mode": "nonaverage",
    "boundary_velocity": "analytic",
    "delta": 0.01,
    "window_fraction": 0.2,
    "output": {"stride": 10, "csv": None, "snapshots": None, "snapshot_stride": 1000},
}

INITIAL_FIELDS = ("probe", "zero")
MODES = ("nonaverage", "average")
BOUNDARY_VELOCITY = ("analytic", "differenced")


def merge(base, overrides, path=""):
    """Deep-merge ``overrides`` into a copy of ``base``; unknown keys are errors."""
    out = copy.deepcopy(base)
    for key, value in overrides.items():
        if key not in base:
            raise ConfigError(f"unknown config key '{path}{key}'")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"'{path}{key}' must be an object")
            out[key] = merge(base[key], value, f"{path}{key}.")
        else:
            out[key] = value
    return out


@dataclass(frozen=True)
class OutputOptions:
    stride: int = 10
    csv: str | None = None
    snapshots: str | None = None
    snapshot_stride: int = 1000


@dataclass(frozen=True)
class Scenario:
    name: str
    map: QuadraticMap
    kv: KvParams
    grid: Grid
    probe: ProbeParams
    controller: ControllerParams
    kernel: KernelParams
    dt: float
    t_end: float
    theta_hat_0: float
    initial_field: str
    mode: str
    boundary_velocity: str
    delta: float
    window_fraction: float
    output: OutputOptions

    def __post_init__(self):
        if not math.isclose(self.probe.domain_length, self.grid.domain_length, rel_tol=1e-12):
            raise ConfigError("probe and grid domain lengths differ")
        if not math.isclose(self.probe.damping, self.kv.damping, rel_tol=1e-12):
            raise ConfigError("probe and plant damping differ")
        if not self.dt > 0 or not self.t_end > 0:
            raise ConfigError("dt and t_end must be positive")
        if self.initial_field not in INITIAL_FIELDS:
            raise ConfigError(f"initial_field must be one of {INITIAL_FIELDS}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.boundary_velocity not in BOUNDARY_VELOCITY:
            raise ConfigError(f"boundary_velocity must be one of {BOUNDARY_VELOCITY}")
        if self.mode == "nonaverage" and self.probe.amplitude == 0:
            raise ConfigError("the non-average controller needs a positive dither amplitude")
        if not 0 < self.window_fraction <= 0.5:
            raise ConfigError("window_fraction must lie in (0, 0.5]")
        if self.output.stride < 1 or self.output.snapshot_stride < 1:
            raise ConfigError("output strides must be positive")
        if self.output.snapshot_stride % self.output.stride:
            raise ConfigError("snapshot_stride must be a multiple of stride")
        try:
            check_lyapunov_delta(self.delta, self.kernel.c, self.kv.damping, self.grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))

    @property
    def K_bar(self) -> float:
        return self.controller.gain * self.map.hessian

    @classmethod
    def from_dict(cls, cfg: dict) -> "Scenario":
        c = merge(DEFAULTS, cfg)
        try:
            plant = c["plant"]
            grid = Grid(float(plant["domain_length"]), int(plant["points"]))
            kv = KvParams(float(plant["damping"]), float(plant["stiffness_inverse"]))
            probe = ProbeParams(float(c["probe"]["amplitude"]), float(c["probe"]["frequency"]),
                                kv.damping, grid.domain_length)
            ctl = c["controller"]
            controller = ControllerParams(float(ctl["gain"]), float(ctl["c"]),
                                          float(ctl["filter_cutoff"]), probe,
                                          float(ctl["washout_cutoff"]))
            out = c["output"]
            return cls(
                name=str(c["name"]),
                map=QuadraticMap(**{k: float(v) for k, v in c["map"].items()}),
                kv=kv,
                grid=grid,
                probe=probe,
                controller=controller,
                kernel=KernelParams(controller.c, grid.domain_length),
                dt=float(c["dt"]),
                t_end=float(c["t_end"]),
                theta_hat_0=float(c["theta_hat_0"]),
                initial_field=c["initial_field"],
                mode=c["mode"],
                boundary_velocity=c["boundary_velocity"],
                delta=float(c["delta"]),
                window_fraction=float(c["window_fraction"]),
                output=OutputOptions(int(out["stride"]), out["csv"], out["snapshots"],
                                     int(out["snapshot_stride"])),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "map": {"theta_star": self.map.theta_star, "y_star": self.map.y_star,
                    "hessian": self.map.hessian},
            "plant": {"damping": self.kv.damping, "stiffness_inverse": self.kv.stiffness_inverse,
                      "domain_length": self.grid.domain_length, "points": self.grid.points},
            "probe": {"amplitude": self.probe.amplitude, "frequency": self.probe.frequency},
            "controller": {"gain": self.controller.gain, "c": self.controller.c,
                           "filter_cutoff": self.controller.filter_cutoff,
                           "washout_cutoff": self.controller.washout_cutoff},
            "dt": self.dt,
            "t_end": self.t_end,
            "theta_hat_0": self.theta_hat_0,
            "initial_field": self.initial_field,
            "mode": self.mode,
            "boundary_velocity": self.boundary_velocity,
            "delta": self.delta,
            "window_fraction": self.window_fraction,
            "output": {"stride": self.output.stride, "csv": self.output.csv,
                       "snapshots": self.output.snapshots,
                       "snapshot_stride": self.output.snapshot_stride},
        }


def scenario(**overrides) -> Scenario:
    """Reference scenario with nested overrides, e.g. ``scenario(probe={"amplitude": 0.1})``."""
    return Scenario.from_dict(overrides)


def load_config(path) -> Scenario:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return Scenario.from_dict(cfg)


def load_config_list(path) -> list:
    """Scenarios from a sweep file.

    Accepts a JSON list of scenario objects, an object with ``base`` and
    ``scenarios`` (each merged over ``base``), or a single scenario object.
    """
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if isinstance(cfg, list):
        return [Scenario.from_dict(item) for item in cfg]
    if isinstance(cfg, dict) and "scenarios" in cfg:
        base = merge(DEFAULTS, cfg.get("base", {}))
        out = []
        for i, item in enumerate(cfg["scenarios"]):
            merged = merge(base, item)
            if "name" not in item:
                merged["name"] = f"{base['name']}-{i}"
            out.append(Scenario.from_dict(merged))
        return out
    if isinstance(cfg, dict):
        return [Scenario.from_dict(cfg)]
    raise ConfigError(f"{path}: expected a JSON object or list")
