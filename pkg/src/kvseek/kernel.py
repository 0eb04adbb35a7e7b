"""Backstepping gain kernel and the quadratures built on it.

The kernel is the closed form

    k(x, sigma) = -c x I1(z) / z,   z = sqrt(c (x^2 - sigma^2)),

which solves ``k_xx = k_sigma_sigma + c k`` with ``k_sigma(x, 0) = 0`` and the
diagonal trace ``k(x, x) = -(c/2) x``.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

# I1 by power series only; beyond this the terms overflow before converging.
Z_MAX = 60.0
_SMALL_Z = 1e-6


@dataclass(frozen=True)
class KernelParams:
    c: float
    domain_length: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")
        if not self.domain_length > 0:
            raise ValueError("domain_length must be positive")


def bessel_i1(z: float) -> float:
    """Modified Bessel function of the first kind, order one, by power series."""
    z = float(z)
    if z < 0:
        raise ValueError("z must be non-negative")
    if z > Z_MAX:
        raise ValueError(f"z={z} exceeds the series range (z <= {Z_MAX})")
    if z == 0.0:
        return 0.0
    q = 0.25 * z * z
    term = 0.5 * z
    total = term
    m = 0
    while True:
        m += 1
        term *= q / (m * (m + 1))
        total += term
        if term < 1e-16 * total or term < 1e-300:
            return total


def _i1_ratio_series(q: float) -> float:
    # I1(z)/z as a series in q = z**2; entire in q, so negative q is the
    # analytic continuation J1(|z|)/|z| used by finite-difference stencils.
    p = 0.25 * q
    term = 0.5
    total = term
    m = 0
    while True:
        m += 1
        term *= p / (m * (m + 1))
        total += term
        if abs(term) < 1e-17 * abs(total) or abs(term) < 1e-300:
            return total


def i1_ratio(z: float) -> float:
    """``I1(z)/z`` with the removable singularity at ``z = 0`` filled in."""
    z = float(z)
    if z < 0:
        raise ValueError("z must be non-negative")
    if z <= _SMALL_Z:
        zz = z * z
        return 0.5 + zz / 16.0 + zz * zz / 384.0
    return bessel_i1(z) / z


def _kernel_value(c, x, sigma):
    # No domain checks: stencils may step outside the triangle.
    return -c * x * _i1_ratio_series(c * (x * x - sigma * sigma))


def kernel_eval(params: KernelParams, x: float, sigma: float) -> float:
    """Gain kernel ``k(x, sigma)`` on the triangle ``0 <= sigma <= x <= D``."""
    if not 0.0 <= sigma:
        raise ValueError("sigma must be non-negative")
    if sigma > x:
        raise ValueError(f"sigma={sigma} exceeds x={x}")
    if x > params.domain_length * (1 + 1e-12):
        raise ValueError("x outside the domain")
    z = math.sqrt(params.c * (x * x - sigma * sigma))
    return -params.c * x * i1_ratio(z)


def gain_weight(params: KernelParams, sigma: float) -> float:
    """Weight of the control-law integral, ``-k(D, sigma)``."""
    D = params.domain_length
    if not 0.0 <= sigma <= D:
        raise ValueError(f"sigma must lie in [0, {D}]")
    z = math.sqrt(params.c * (D * D - sigma * sigma))
    return params.c * D * i1_ratio(z)


def trapezoid_weights(points: int, dx: float) -> np.ndarray:
    w = np.full(points, dx)
    w[0] = w[-1] = 0.5 * dx
    return w


@lru_cache(maxsize=32)
def _quadrature_weights(c, D, points):
    sig = np.linspace(0.0, D, points)
    p = KernelParams(c, D)
    g = np.array([gain_weight(p, s) for s in sig])
    q = g * trapezoid_weights(points, D / (points - 1))
    q.setflags(write=False)
    return q


def quadrature_weights(params: KernelParams, points: int) -> np.ndarray:
    """Trapezoid weights times :func:`gain_weight` on a uniform grid.

    ``control_integral(u) == quadrature_weights(...) @ u``.
    """
    return _quadrature_weights(params.c, params.domain_length, int(points))


def _nodal(values, grid):
    u = np.asarray(getattr(values, "displacement", values), dtype=float)
    if u.shape != (grid.points,):
        raise ValueError(f"field has shape {u.shape}, grid expects ({grid.points},)")
    return u


def control_integral(params: KernelParams, u_field, grid) -> float:
    """Trapezoid rule for ``int_0^D gain_weight(sigma) u(sigma) dsigma``.

    ``u_field`` is a nodal array (or anything with a ``displacement`` array).
    """
    if not math.isclose(grid.domain_length, params.domain_length, rel_tol=1e-12):
        raise ValueError("grid does not span the kernel domain")
    u = _nodal(u_field, grid)
    return float(quadrature_weights(params, grid.points) @ u)


@lru_cache(maxsize=32)
def _transform_matrix(c, D, points):
    x = np.linspace(0.0, D, points)
    dx = D / (points - 1)
    B = np.zeros((points, points))
    for i in range(1, points):
        ki = np.array([_kernel_value(c, x[i], s) for s in x[: i + 1]])
        ki *= trapezoid_weights(i + 1, dx)
        B[i, : i + 1] = ki
    B.setflags(write=False)
    return B


def transform_matrix(params: KernelParams, points: int) -> np.ndarray:
    """Lower-triangular ``B`` with ``(B u)_i ~ int_0^{x_i} k(x_i, s) u(s) ds``."""
    return _transform_matrix(params.c, params.domain_length, int(points))


def backstepping_transform(params: KernelParams, u_field, vartheta: float, K_bar: float, grid) -> np.ndarray:
    """Nodal values of ``w = u - K_bar int_0^x k(x, s) u(s) ds - K_bar vartheta``."""
    u = _nodal(u_field, grid)
    B = transform_matrix(params, grid.points)
    return u - K_bar * (B @ u) - K_bar * vartheta
