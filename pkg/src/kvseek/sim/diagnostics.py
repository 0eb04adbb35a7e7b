"""State norms, the Lyapunov functional and ultimate-bound metrics."""

import math

import numpy as np

from kvseek.kernel import KernelParams, backstepping_transform
from kvseek.wave_solver import Grid


def limsup_metric(series, window_fraction: float = 0.2) -> float:
    """Max of ``|series|`` over the final ``window_fraction`` of the samples."""
    s = np.asarray(series, dtype=float)
    if s.size == 0:
        raise ValueError("empty series")
    if not 0 < window_fraction <= 0.5:
        raise ValueError("window_fraction must lie in (0, 0.5]")
    start = min(int(math.floor((1.0 - window_fraction) * s.size)), s.size - 1)
    return float(np.max(np.abs(s[start:])))


def _norm2(values, grid):
    return float(grid.trapezoid_weights() @ (values * values))


def _derivative(values, grid):
    return np.gradient(values, grid.dx, edge_order=2)


def psi_diagnostic(vartheta: float, u, u_prev, dt: float, grid: Grid) -> float:
    """``vartheta^2 + ||u_x||^2 + ||u_t||^2`` with ``u_t`` from a backward difference.

    ``u_prev`` is the field one step of length ``dt`` earlier.
    """
    if u_prev is None:
        raise ValueError("psi needs the previous u field (missing history)")
    u = np.asarray(u, dtype=float)
    u_prev = np.asarray(u_prev, dtype=float)
    if u.shape != (grid.points,) or u_prev.shape != u.shape:
        raise ValueError("field shapes do not match the grid")
    u_t = (u - u_prev) / dt
    return vartheta * vartheta + _norm2(_derivative(u, grid), grid) + _norm2(u_t, grid)


def lyapunov_v(vartheta: float, w, w_t, kernel: KernelParams, delta: float, d: float,
               grid: Grid) -> float:
    """``0.5 [vartheta^2 + (1 + delta d)(||w_x||^2 + c ||w||^2) + ||w_t||^2 + 2 delta <w, w_t>]``."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    w = np.asarray(w, dtype=float)
    w_t = np.asarray(w_t, dtype=float)
    wts = grid.trapezoid_weights()
    elastic = _norm2(_derivative(w, grid), grid) + kernel.c * float(wts @ (w * w))
    return 0.5 * (vartheta * vartheta + (1.0 + delta * d) * elastic
                  + float(wts @ (w_t * w_t)) + 2.0 * delta * float(wts @ (w * w_t)))


def check_lyapunov_delta(delta: float, c: float, d: float, grid: Grid,
                         samples: int = 200, seed: int = 0) -> None:
    """Reject ``delta`` when the functional can go negative.

    The cross term is dominated through the Poincare bound
    ``||w||^2 <= (2D/pi)^2 ||w_x||^2`` (valid for ``w_x(0) = 0``, ``w(D) = 0``),
    giving ``delta^2 <= (1 + delta d)(pi^2 / (4 D^2) + c)``. Random modal
    states, including adversarial ``w_t = -s w``, are then sampled as a
    discrete check.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    D = grid.domain_length
    if delta * delta > (1.0 + delta * d) * (math.pi**2 / (4.0 * D * D) + c):
        raise ValueError(f"delta={delta} violates the Poincare positivity bound")
    rng = np.random.default_rng(seed)
    x = grid.x
    modes = np.array([np.cos((0.5 + n) * math.pi * x / D) for n in range(6)])
    kp = KernelParams(c, D)
    for _ in range(samples):
        w = rng.standard_normal(6) @ modes
        if rng.random() < 0.5:
            w_t = -rng.uniform(0.0, 10.0) * w
        else:
            w_t = rng.standard_normal(6) @ modes
        if lyapunov_v(0.0, w, w_t, kp, delta, d, grid) < 0:
            raise ValueError(f"delta={delta} gives a negative Lyapunov functional")


class DiagnosticsEvaluator:
    """Per-sample ``psi`` and ``V`` for a running scenario.

    The estimation error and ``K_bar = K H`` use the true map, so these are
    diagnostics only.
    """

    def __init__(self, scenario):
        self.grid = scenario.grid
        self.kernel = scenario.kernel
        self.dt = scenario.dt
        self.delta = scenario.delta
        self.d = scenario.kv.damping
        self.K_bar = scenario.K_bar

    def psi(self, vartheta, u, u_prev):
        return psi_diagnostic(vartheta, u, u_prev, self.dt, self.grid)

    def lyapunov(self, vartheta, u, u_prev):
        u_t = (np.asarray(u) - np.asarray(u_prev)) / self.dt
        w = backstepping_transform(self.kernel, u, vartheta, self.K_bar, self.grid)
        # d(vartheta)/dt = u(0, t)
        w_t = backstepping_transform(self.kernel, u_t, float(u[0]), self.K_bar, self.grid)
        return lyapunov_v(vartheta, w, w_t, self.kernel, self.delta, self.d, self.grid)
