"""Verification studies behind the ``convergence``, ``probe-check`` and ``kernel-check`` commands."""

from dataclasses import dataclass
import math

import numpy as np

from kvseek import probe as probe_ops
from kvseek.kernel import KernelParams, _kernel_value, kernel_eval
from kvseek.probe import ProbeParams
from kvseek.wave_solver import Grid, KvParams, WaveField, step


@dataclass(frozen=True)
class ConvergenceLevel:
    points: int
    dx: float
    dt: float
    max_error: float
    # one-sided second-order estimate of a_x(0) at the final time
    neumann_slope: float
    ratio: float = math.nan


def track_probe(probe: ProbeParams, kv: KvParams, points: int, dt: float, t_end: float,
                backend=None):
    """Drive the plant with ``S(t)`` from trajectory-consistent data.

    Returns ``(max_error, neumann_slope)``: the largest nodal deviation from
    ``beta_r`` over all steps and the discrete ``a_x(0)`` at the end.
    """
    grid = Grid(probe.domain_length, points)
    x = grid.x
    field = WaveField(probe_ops.beta_r(probe, x, 0.0), probe_ops.beta_r_t(probe, x, 0.0))
    steps = int(round(t_end / dt))
    err = 0.0
    for n in range(1, steps + 1):
        t = n * dt
        field = step(field, kv, grid, dt, probe_ops.dither(probe, t),
                     probe_ops.dither_rate(probe, t), backend=backend)
        err = max(err, float(np.max(np.abs(field.displacement - probe_ops.beta_r(probe, x, t)))))
    a = field.displacement
    slope = float((-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * grid.dx))
    return err, slope


def convergence_study(probe: ProbeParams, kv: KvParams, points: int = 26, dt: float = 4e-3,
                      t_end: float = 2.0, levels: int = 4, backend=None):
    """Halve ``dx`` and ``dt`` together ``levels - 1`` times; ratio is previous/current error."""
    if levels < 2:
        raise ValueError("need at least two levels")
    out = []
    for k in range(levels):
        n = (points - 1) * 2**k + 1
        h = dt / 2**k
        err, slope = track_probe(probe, kv, n, h, t_end, backend)
        ratio = out[-1].max_error / err if out else math.nan
        out.append(ConvergenceLevel(n, probe.domain_length / (n - 1), h, err, slope, ratio))
    return out


def probe_check(probe: ProbeParams, points: int = 21, times: int = 9, h: float = 1e-3):
    """Rows ``(t, x, beta_r, residual)`` over one dither period."""
    D = probe.domain_length
    rows = []
    for t in np.linspace(0.0, probe.period, times):
        for x in np.linspace(h, D - h, points):
            rows.append((float(t), float(x), float(probe_ops.beta_r(probe, x, t)),
                         float(probe_ops.pde_residual_fd(probe, x, t, h))))
    return rows


def kernel_fd_residual(params: KernelParams, x: float, sigma: float, h: float) -> float:
    """Centered-difference residual of ``k_xx - k_sigma_sigma - c k`` at ``(x, sigma)``.

    Stencil points may leave the triangle; the closed form continues
    analytically there.
    """
    c = params.c
    k0 = _kernel_value(c, x, sigma)
    k_xx = (_kernel_value(c, x + h, sigma) - 2.0 * k0 + _kernel_value(c, x - h, sigma)) / h**2
    k_ss = (_kernel_value(c, x, sigma + h) - 2.0 * k0 + _kernel_value(c, x, sigma - h)) / h**2
    return k_xx - k_ss - c * k0


def kernel_sigma_slope(params: KernelParams, x: float, h: float = 1e-4) -> float:
    """Symmetric-difference estimate of ``k_sigma(x, 0)``."""
    return (_kernel_value(params.c, x, h) - _kernel_value(params.c, x, -h)) / (2.0 * h)


def kernel_residual_max(params: KernelParams, h: float, samples: int = 12) -> float:
    """Largest FD residual over a fixed set of interior triangle points."""
    D = params.domain_length
    worst = 0.0
    for i in range(1, samples + 1):
        x = D * i / (samples + 1)
        for j in range(1, i):
            sigma = x * j / i
            worst = max(worst, abs(kernel_fd_residual(params, x, sigma, h)))
    return worst


def kernel_check(params: KernelParams, points: int = 21, h: float = 1e-3):
    """Rows ``(x, sigma, k, residual)`` on the triangle; residual is nan off the interior."""
    D = params.domain_length
    rows = []
    for x in map(float, np.linspace(0.0, D, points)):
        for sigma in (np.linspace(0.0, x, points) if x > 0 else [0.0]):
            sigma = float(min(sigma, x))
            k = kernel_eval(params, x, sigma)
            interior = h <= sigma and sigma + h <= x and x + h <= D
            res = kernel_fd_residual(params, x, sigma, h) if interior else math.nan
            rows.append((x, sigma, k, res))
    return rows
