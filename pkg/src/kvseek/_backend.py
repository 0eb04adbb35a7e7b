"""Select the compiled core or the pure-Python fallback at import.

Set ``KVSEEK_BACKEND=python`` to force the fallback.
"""

import os

import numpy as np
from scipy.linalg import solve_banded


class BandedTridiagonal:
    """Pure-Python counterpart of ``_core.Tridiagonal`` (LAPACK banded solve)."""

    def __init__(self, sub, diag, sup):
        diag = np.asarray(diag, dtype=float)
        n = diag.shape[0]
        sub = np.asarray(sub, dtype=float)
        sup = np.asarray(sup, dtype=float)
        if n < 1 or sub.shape[0] != n or sup.shape[0] != n:
            raise ValueError("sub, diag and sup must have equal positive length")
        ab = np.zeros((3, n))
        ab[0, 1:] = sup[:-1]
        ab[1] = diag
        ab[2, :-1] = sub[1:]
        self._ab = ab
        self.n = n

    def solve(self, rhs):
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape[0] != self.n:
            raise ValueError("right-hand side has wrong length")
        return solve_banded((1, 1), self._ab, rhs, check_finite=False)


_requested = os.environ.get("KVSEEK_BACKEND", "auto").lower()
_core = None
if _requested != "python":
    try:
        from kvseek import _core
    except ImportError:
        if _requested == "compiled":
            raise

BACKEND = "compiled" if _core is not None else "python"


def available_backends():
    return ("compiled", "python") if _core is not None else ("python",)


def tridiagonal(sub, diag, sup, backend=None):
    backend = backend or BACKEND
    if backend == "compiled":
        if _core is None:
            raise RuntimeError("compiled core is not built")
        return _core.Tridiagonal(sub, diag, sup)
    return BandedTridiagonal(sub, diag, sup)
