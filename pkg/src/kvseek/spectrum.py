"""Eigenvalues of the Kelvin-Voigt target operator.

Mode ``n`` of ``w_tt = (1 + d d_t)(w_xx - c w)`` with ``w_x(0) = 0``,
``w(D) = 0`` on the unit domain contributes the roots of

    s^2 + d mu s + mu = 0,   mu = c + (pi/2 + pi n)^2.

Complex pairs lie on the circle ``|s + 1/d| = 1/d``; once ``d^2 mu > 4`` the
roots are real, one branch tending to ``-1/d`` and the other to ``-inf``.
"""

from dataclasses import dataclass
import math

import numpy as np


@dataclass(frozen=True)
class EigenPair:
    mode_index: int
    mu: float
    sigma_plus: complex
    sigma_minus: complex
    is_complex_pair: bool


def mode_parameter(n: int, c: float) -> float:
    return c + (0.5 * math.pi + math.pi * n) ** 2


def eigenvalues(n: int, c: float, d: float) -> EigenPair:
    if n < 0:
        raise ValueError("mode index must be non-negative")
    if c < 0:
        raise ValueError("c must be non-negative")
    if not d > 0:
        raise ValueError("d must be positive")
    mu = mode_parameter(n, c)
    b = d * mu
    gap = d * d * mu - 4.0
    if gap < 0:
        re = -0.5 * b
        im = 0.5 * math.sqrt(-mu * gap)
        return EigenPair(n, mu, complex(re, im), complex(re, -im), True)
    # larger-magnitude root first, the other from the product mu
    fast = -0.5 * (b + math.sqrt(mu * gap))
    slow = mu / fast
    return EigenPair(n, mu, complex(slow, 0.0), complex(fast, 0.0), False)


def circle_residual(pair: EigenPair, d: float) -> float:
    if not pair.is_complex_pair:
        raise ValueError(f"mode {pair.mode_index} is a real pair")
    s = pair.sigma_plus
    return abs((s.real + 1.0 / d) ** 2 + s.imag**2 - 1.0 / d**2)


def vieta_residuals(pair: EigenPair, d: float):
    """Relative errors of the sum ``-d mu`` and product ``mu``."""
    total = pair.sigma_plus + pair.sigma_minus
    prod = pair.sigma_plus * pair.sigma_minus
    return (abs(total + d * pair.mu) / (d * pair.mu), abs(prod - pair.mu) / pair.mu)


def branch_limits(c: float, d: float, n_max: int):
    """Slow and fast real branches over the real-root modes ``n <= n_max``.

    Returns ``(modes, slow, fast)`` arrays; the slow branch approaches
    ``-1/d`` and the fast branch diverges to ``-inf``.
    """
    pairs = [eigenvalues(n, c, d) for n in range(n_max + 1)]
    real = [p for p in pairs if not p.is_complex_pair]
    if not real:
        raise ValueError(f"n_max={n_max} does not reach the real-root regime")
    modes = np.array([p.mode_index for p in real])
    slow = np.array([p.sigma_plus.real for p in real])
    fast = np.array([p.sigma_minus.real for p in real])
    target = -1.0 / d
    if np.any(np.diff(np.abs(slow - target)) > 0) or np.any(np.diff(fast) > 0):
        raise ArithmeticError("real branches are not monotone")
    return modes, slow, fast


def spectrum_table(c: float, d: float, n_max: int):
    """Rows ``(n, mu, re+, im+, re-, im-, is_complex, circle_residual)``."""
    rows = []
    for n in range(n_max + 1):
        p = eigenvalues(n, c, d)
        res = circle_residual(p, d) if p.is_complex_pair else float("nan")
        rows.append((n, p.mu, p.sigma_plus.real, p.sigma_plus.imag,
                     p.sigma_minus.real, p.sigma_minus.imag, int(p.is_complex_pair), res))
    return rows
