"""Closed-loop driver: builds the stepping core, records the time series."""

from dataclasses import dataclass, field
import math

import numpy as np

from kvseek import _backend
from kvseek import probe as probe_ops
from kvseek.errors import NumericalFailure
from kvseek.kernel import quadrature_weights
from kvseek.sim.diagnostics import DiagnosticsEvaluator, limsup_metric
from kvseek.sim.reference import ReferenceLoop
from kvseek.wave_solver import SnapshotWriter, WaveField, acceleration, step_matrix

COLUMNS = ("t", "theta", "Theta", "y", "G", "Hhat", "U", "theta_hat", "psi", "V")


def initial_field(scenario):
    """Displacement and velocity at ``t = 0`` for the configured initial field."""
    x = scenario.grid.x
    p = scenario.probe
    if scenario.initial_field == "probe":
        alpha = probe_ops.beta_r(p, x, 0.0) + scenario.theta_hat_0
        velocity = probe_ops.beta_r_t(p, x, 0.0)
    else:
        alpha = np.zeros(x.size)
        velocity = np.zeros(x.size)
        alpha[-1] = scenario.theta_hat_0 + probe_ops.dither(p, 0.0)
        velocity[-1] = probe_ops.dither_rate(p, 0.0)
    return np.asarray(alpha, dtype=float), np.asarray(velocity, dtype=float)


def _ghost_u_prev(scenario, alpha, velocity):
    # u one step before t = 0, extrapolated with the semi-discrete acceleration
    grid, p = scenario.grid, scenario.probe
    u0 = velocity - probe_ops.beta_r_t(p, grid.x, 0.0)
    u_t = np.zeros(grid.points)
    u_t[:-1] = acceleration(WaveField(alpha, velocity), scenario.kv, grid) \
        - probe_ops.beta_r_tt(p, grid.x[:-1], 0.0)
    return u0 - scenario.dt * u_t


def make_loop(scenario, backend=None):
    """Stepping core for ``scenario`` on ``backend`` (``"compiled"`` or ``"python"``)."""
    backend = backend or _backend.BACKEND
    alpha, velocity = initial_field(scenario)
    if backend == "python":
        return ReferenceLoop(scenario, alpha, velocity, backend="python")
    if backend != "compiled":
        raise ValueError(f"unknown backend '{backend}'")
    if _backend._core is None:
        raise RuntimeError("compiled core is not built")
    grid, p, ctl = scenario.grid, scenario.probe, scenario.controller
    sub, diag, sup = step_matrix(grid, scenario.kv, scenario.dt)
    C, S = probe_ops.spatial_profiles(p, grid.x)
    return _backend._core.ClosedLoop(
        alpha, velocity, grid.dx, scenario.dt, scenario.kv.damping,
        scenario.kv.stiffness_inverse, sub, diag, sup,
        p.amplitude, p.frequency, C, S,
        scenario.map.theta_star, scenario.map.y_star, scenario.map.hessian,
        scenario.mode == "average", ctl.gain, ctl.filter_cutoff, ctl.washout_cutoff,
        quadrature_weights(scenario.kernel, grid.points), scenario.K_bar,
        theta_hat=scenario.theta_hat_0,
        analytic_velocity=scenario.boundary_velocity == "analytic",
    )


@dataclass
class SimulationResult:
    scenario: object
    backend: str
    rows: dict
    # sensed values at every step
    Theta: np.ndarray
    theta: np.ndarray
    y: np.ndarray
    limsup_Theta: float = math.nan
    limsup_theta: float = math.nan
    limsup_y: float = math.nan
    extra: dict = field(default_factory=dict)

    def write_csv(self, target):
        """Write the recorded rows to a path or an open text stream."""
        if hasattr(target, "write"):
            self._write(target)
        else:
            with open(target, "w", newline="") as fh:
                self._write(fh)

    def _write(self, fh):
        fh.write(",".join(COLUMNS) + "\n")
        for vals in zip(*(self.rows[c] for c in COLUMNS)):
            fh.write(",".join(f"{v:.12g}" for v in vals) + "\n")


def run(scenario, backend=None, csv_path=None, snapshots_path=None, diagnostics=True):
    """Run ``scenario`` to ``t_end`` and return the recorded series.

    One row is recorded every ``output.stride`` steps, after the measurement
    at that step. Raises :class:`NumericalFailure` on a non-finite state.
    """
    backend = backend or _backend.BACKEND
    loop = make_loop(scenario, backend)
    grid, p = scenario.grid, scenario.probe
    steps = scenario.steps
    stride = scenario.output.stride
    snap_every = scenario.output.snapshot_stride
    csv_path = csv_path or scenario.output.csv
    snapshots_path = snapshots_path or scenario.output.snapshots
    evaluator = DiagnosticsEvaluator(scenario) if diagnostics else None
    theta_star = scenario.map.theta_star

    dense_Theta = np.empty(steps + 1)
    dense_theta = np.empty(steps + 1)
    dense_y = np.empty(steps + 1)
    n_rows = steps // stride + 1
    rows = {c: np.full(n_rows, math.nan) for c in COLUMNS}
    ghost = _ghost_u_prev(scenario, np.asarray(loop.alpha), np.asarray(loop.velocity))
    snaps = SnapshotWriter(snapshots_path, grid) if snapshots_path else None

    try:
        n = 0
        for r in range(n_rows):
            loop.sense()
            t = n * scenario.dt
            dense_Theta[n] = loop.Theta
            dense_theta[n] = loop.theta
            dense_y[n] = loop.y
            if evaluator is not None:
                u = np.array(loop.u)
                u_prev = ghost if n == 0 else np.array(loop.u_prev)
                vartheta = loop.Theta - p.amplitude * math.sin(p.frequency * t) - theta_star
                psi = evaluator.psi(vartheta, u, u_prev)
                V = evaluator.lyapunov(vartheta, u, u_prev)
            else:
                psi = V = math.nan
            for name, val in (("t", t), ("theta", loop.theta), ("Theta", loop.Theta),
                              ("y", loop.y), ("G", loop.G), ("Hhat", loop.Hhat), ("U", loop.U),
                              ("theta_hat", loop.theta_hat), ("psi", psi), ("V", V)):
                rows[name][r] = val
            if snaps is not None and n % snap_every == 0:
                snaps.write(t, loop.alpha)
            if n == steps:
                break
            loop.actuate()
            block = min(stride - 1, steps - n - 1)
            loop.run_block(block, dense_Theta, dense_theta, dense_y, n + 1)
            n += 1 + block
        else:
            # steps not a multiple of stride: sense the final step without a row
            loop.sense()
            dense_Theta[n], dense_theta[n], dense_y[n] = loop.Theta, loop.theta, loop.y
    finally:
        if snaps is not None:
            snaps.close()

    wf = scenario.window_fraction
    result = SimulationResult(
        scenario=scenario, backend=backend, rows=rows,
        Theta=dense_Theta, theta=dense_theta, y=dense_y,
        limsup_Theta=limsup_metric(dense_Theta - theta_star, wf),
        limsup_theta=limsup_metric(dense_theta - theta_star, wf),
        limsup_y=limsup_metric(dense_y - scenario.map.y_star, wf),
    )
    if csv_path:
        result.write_csv(csv_path)
    return result


__all__ = ["COLUMNS", "NumericalFailure", "SimulationResult", "initial_field", "make_loop", "run"]
