"""Kelvin-Voigt damped wave equation on ``[0, D]``.

    eps * a_tt = a_xx + d * a_xxt,   a_x(0, t) = 0,   a(D, t) prescribed.

Second-order central differences in space (ghost-node closure at the Neumann
end) and the implicit trapezoidal rule in time. The Kelvin-Voigt term makes
the semi-discrete system stiff, so each step solves one tridiagonal system.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from kvseek import _backend


@dataclass(frozen=True)
class Grid:
    domain_length: float
    points: int

    def __post_init__(self):
        if not self.domain_length > 0:
            raise ValueError("domain_length must be positive")
        if int(self.points) != self.points or self.points < 3:
            raise ValueError("points must be an integer >= 3")

    @property
    def dx(self) -> float:
        return self.domain_length / (self.points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.domain_length, self.points)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.points, self.dx)
        w[0] = w[-1] = 0.5 * self.dx
        return w


@dataclass(frozen=True)
class KvParams:
    """Kelvin-Voigt damping ``d`` and stiffness inverse ``eps`` (1 in the ES loop)."""

    damping: float
    stiffness_inverse: float = 1.0

    def __post_init__(self):
        if not self.damping > 0:
            raise ValueError("damping must be positive")
        if not self.stiffness_inverse > 0:
            raise ValueError("stiffness_inverse must be positive")


@dataclass(frozen=True)
class WaveField:
    displacement: np.ndarray
    velocity: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        disp = np.asarray(self.displacement, dtype=float)
        vel = np.asarray(self.velocity, dtype=float)
        if disp.ndim != 1 or disp.shape != vel.shape:
            raise ValueError("displacement and velocity must be 1-D arrays of equal length")
        object.__setattr__(self, "displacement", disp)
        object.__setattr__(self, "velocity", vel)

    @classmethod
    def zeros(cls, grid: Grid, time=0.0):
        return cls(np.zeros(grid.points), np.zeros(grid.points), time)

    def check(self, grid: Grid):
        if self.displacement.shape != (grid.points,):
            raise ValueError(
                f"field has {self.displacement.shape[0]} nodes, grid has {grid.points}"
            )


@dataclass(frozen=True)
class LaplacianCoefficients:
    """Rows ``0 .. N-2`` of the discrete ``d^2/dx^2``.

    ``boundary`` multiplies the Dirichlet value in the last row.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    boundary: float = field(default=0.0)

    def apply(self, values) -> np.ndarray:
        """Apply to a full nodal array (last entry is the Dirichlet value)."""
        z = np.asarray(values, dtype=float)
        m = self.diag.shape[0]
        if z.shape != (m + 1,):
            raise ValueError(f"expected {m + 1} nodal values")
        out = self.diag * z[:m]
        out[1:] += self.sub[1:] * z[: m - 1]
        out[:-1] += self.sup[:-1] * z[1:m]
        out[-1] += self.boundary * z[m]
        return out


def discrete_laplacian(grid: Grid) -> LaplacianCoefficients:
    """Central second difference; ``a_xx(0) ~ 2 (a_1 - a_0) / dx^2`` at the Neumann end."""
    m = grid.points - 1
    idx2 = 1.0 / grid.dx**2
    sub = np.full(m, idx2)
    sup = np.full(m, idx2)
    diag = np.full(m, -2.0 * idx2)
    sub[0] = 0.0
    sup[0] = 2.0 * idx2
    sup[-1] = 0.0
    return LaplacianCoefficients(sub, diag, sup, idx2)


def step_matrix(grid: Grid, params: KvParams, dt: float):
    """Diagonals of ``eps I - (dt/2)(d + dt/2) L`` for the velocity update."""
    lap = discrete_laplacian(grid)
    kappa = 0.5 * dt * (params.damping + 0.5 * dt)
    return -kappa * lap.sub, params.stiffness_inverse - kappa * lap.diag, -kappa * lap.sup


@lru_cache(maxsize=16)
def _factored(domain_length, points, damping, eps, dt, backend):
    grid = Grid(domain_length, points)
    sub, diag, sup = step_matrix(grid, KvParams(damping, eps), dt)
    return _backend.tridiagonal(sub, diag, sup, backend=backend)


def step(field: WaveField, params: KvParams, grid: Grid, dt: float,
         boundary_value_next: float, boundary_velocity_next=None,
         backend=None) -> WaveField:
    """Advance one implicit trapezoidal step.

    With ``boundary_velocity_next=None`` the Dirichlet velocity is the backward
    difference of the boundary values (first order; meant for tests).
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    field.check(grid)
    a, v = field.displacement, field.velocity
    if boundary_velocity_next is None:
        boundary_velocity_next = (boundary_value_next - a[-1]) / dt
    lhs = _factored(grid.domain_length, grid.points, params.damping,
                    params.stiffness_inverse, float(dt), backend or _backend.BACKEND)
    lap = discrete_laplacian(grid)
    d, h = params.damping, 0.5 * dt
    z = np.empty(grid.points)
    z[:-1] = 2.0 * a[:-1] + (d + h) * v[:-1]
    z[-1] = 0.0
    boundary = (a[-1] + d * v[-1]) + (boundary_value_next + d * boundary_velocity_next)
    rhs = params.stiffness_inverse * v[:-1] + h * lap.apply(z)
    rhs[-1] += h * lap.boundary * boundary
    v_new = lhs.solve(rhs)
    if not np.all(np.isfinite(v_new)):
        raise ArithmeticError("tridiagonal solve produced non-finite values")
    disp = np.empty_like(a)
    vel = np.empty_like(v)
    disp[:-1] = a[:-1] + h * (v[:-1] + v_new)
    vel[:-1] = v_new
    disp[-1] = boundary_value_next
    vel[-1] = boundary_velocity_next
    return WaveField(disp, vel, field.time + dt)


def acceleration(field: WaveField, params: KvParams, grid: Grid) -> np.ndarray:
    """Semi-discrete ``a_tt`` at nodes ``0 .. N-2``."""
    field.check(grid)
    lap = discrete_laplacian(grid)
    return lap.apply(field.displacement + params.damping * field.velocity) / params.stiffness_inverse


def energy(field: WaveField, grid: Grid) -> float:
    """``0.5 (||a_t||^2 + ||a_x||^2)``: trapezoid norm for velocity, cell differences for the gradient."""
    field.check(grid)
    v = field.velocity
    ax = np.diff(field.displacement) / grid.dx
    return 0.5 * (float(grid.trapezoid_weights() @ (v * v)) + grid.dx * float(ax @ ax))


def pde_residual(history, grid: Grid, params: KvParams, dt: float) -> float:
    """Max interior ``|eps a_tt - a_xx - d a_xxt|`` from three consecutive snapshots."""
    if len(history) != 3:
        raise ValueError("need exactly three snapshots")
    for f in history:
        try:
            f.check(grid)
        except ValueError as exc:
            raise ValueError(f"snapshot does not match grid: {exc}") from None
    t0, t1, t2 = (f.time for f in history)
    if not (math.isclose(t1 - t0, dt, rel_tol=1e-6) and math.isclose(t2 - t1, dt, rel_tol=1e-6)):
        raise ValueError("snapshots must be spaced by dt")
    am, a0, ap = (f.displacement for f in history)

    def xx(a):
        return (a[:-2] - 2.0 * a[1:-1] + a[2:]) / grid.dx**2

    a_tt = (ap[1:-1] - 2.0 * a0[1:-1] + am[1:-1]) / dt**2
    a_xxt = (xx(ap) - xx(am)) / (2.0 * dt)
    res = params.stiffness_inverse * a_tt - xx(a0) - params.damping * a_xxt
    return float(np.max(np.abs(res)))


class SnapshotWriter:
    """CSV of displacement snapshots with header ``t,x0,x1,...``."""

    def __init__(self, path, grid: Grid):
        self._fh = open(path, "w", newline="")
        self._fh.write(",".join(["t"] + [f"x{i}" for i in range(grid.points)]) + "\n")

    def write(self, t, displacement):
        self._fh.write(",".join(f"{v:.12g}" for v in (t, *displacement)) + "\n")

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
