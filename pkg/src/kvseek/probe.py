"""Dither generation through the damped wave actuator.

The probing signal applied at the actuated end is the trace ``beta_r(D, t)``
of the closed-form periodic solution of

    beta_tt = beta_xx + d * beta_xxt,   beta_x(0, t) = 0,   beta(0, t) = a sin(w t)

so the sensed end sees a clean ``a sin(w t)`` perturbation.
"""

from dataclasses import dataclass
import math

import numpy as np


@dataclass(frozen=True)
class ProbeParams:
    """Dither amplitude ``a``, frequency ``omega`` [rad/s], damping ``d`` and domain ``D``.

    ``amplitude == 0`` switches the dither off.
    """

    amplitude: float
    frequency: float
    damping: float
    domain_length: float

    def __post_init__(self):
        if not self.amplitude >= 0:
            raise ValueError("amplitude must be non-negative")
        if not self.frequency > 0:
            raise ValueError("frequency must be positive")
        if not self.damping >= 0:
            raise ValueError("damping must be non-negative")
        if not self.domain_length > 0:
            raise ValueError("domain_length must be positive")

    @property
    def period(self):
        return 2.0 * math.pi / self.frequency

    @property
    def spatial_frequency(self):
        return beta_bar(self.frequency, self.damping)

    @property
    def spatial_growth(self):
        return beta_hat(self.frequency, self.damping)


def _check_omega(omega, d):
    if not omega > 0:
        raise ValueError("omega must be positive")
    if not d >= 0:
        raise ValueError("d must be non-negative")


def beta_bar(omega: float, d: float) -> float:
    """Spatial oscillation rate of the reference trajectory."""
    _check_omega(omega, d)
    r = math.hypot(1.0, omega * d)
    return omega * math.sqrt((r + 1.0) / (2.0 * r * r))


def beta_hat(omega: float, d: float) -> float:
    """Spatial growth rate of the reference trajectory.

    ``sqrt(1 + w^2 d^2) - 1`` is evaluated as ``w^2 d^2 / (sqrt(1 + w^2 d^2) + 1)``
    to keep full precision for small ``w d``.
    """
    _check_omega(omega, d)
    wd = omega * d
    r = math.hypot(1.0, wd)
    return omega * math.sqrt(wd * wd / (r + 1.0) / (2.0 * r * r))


def _check_x(params, x):
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > params.domain_length):
        raise ValueError(f"x must lie in [0, {params.domain_length}]")
    return xa


def _out(val):
    return float(val) if np.ndim(val) == 0 else val


def beta_r(params: ProbeParams, x, t):
    """Reference trajectory ``beta_r(x, t)``; ``x`` and ``t`` may be arrays."""
    x = _check_x(params, x)
    bb, bh = params.spatial_frequency, params.spatial_growth
    wt = params.frequency * np.asarray(t, dtype=float)
    val = 0.5 * params.amplitude * (
        np.exp(bh * x) * np.sin(wt + bb * x) + np.exp(-bh * x) * np.sin(wt - bb * x)
    )
    return _out(val)


def beta_r_t(params: ProbeParams, x, t):
    """Exact time derivative of :func:`beta_r`."""
    x = _check_x(params, x)
    bb, bh = params.spatial_frequency, params.spatial_growth
    wt = params.frequency * np.asarray(t, dtype=float)
    val = 0.5 * params.amplitude * params.frequency * (
        np.exp(bh * x) * np.cos(wt + bb * x) + np.exp(-bh * x) * np.cos(wt - bb * x)
    )
    return _out(val)


def beta_r_tt(params: ProbeParams, x, t):
    """Exact second time derivative of :func:`beta_r` (``-w^2 beta_r``)."""
    return _out(-params.frequency**2 * np.asarray(beta_r(params, x, t)))


def dither(params: ProbeParams, t):
    """Probing signal ``S(t)`` applied at the actuated end."""
    return beta_r(params, params.domain_length, t)


def dither_rate(params: ProbeParams, t):
    """``dS/dt``, used as the analytic boundary velocity."""
    return beta_r_t(params, params.domain_length, t)


def spatial_profiles(params: ProbeParams, x):
    """Profiles ``(C, S)`` with ``beta_r = a (sin(wt) C + cos(wt) S)``.

    ``C = cosh(bh x) cos(bb x)`` and ``S = sinh(bh x) sin(bb x)``; the
    closed-loop kernels use these to evaluate the trajectory with two
    trigonometric calls per step.
    """
    x = _check_x(params, x)
    bb, bh = params.spatial_frequency, params.spatial_growth
    return np.cosh(bh * x) * np.cos(bb * x), np.sinh(bh * x) * np.sin(bb * x)


def pde_residual_fd(params: ProbeParams, x, t, h):
    """Centered finite-difference residual of ``b_tt - b_xx - d b_xxt`` at ``(x, t)``.

    Uses step ``h`` in both variables, so ``x`` must satisfy ``h <= x <= D - h``.
    """
    b = lambda xx, tt: beta_r(params, xx, tt)
    d = params.damping
    b_tt = (b(x, t + h) - 2 * b(x, t) + b(x, t - h)) / h**2

    def b_xx(tt):
        return (b(x + h, tt) - 2 * b(x, tt) + b(x - h, tt)) / h**2

    b_xxt = (b_xx(t + h) - b_xx(t - h)) / (2 * h)
    return b_tt - b_xx(t) - d * b_xxt
