import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from kvseek.kernel import KernelParams
from kvseek.sim.diagnostics import (check_lyapunov_delta, limsup_metric, lyapunov_v,
                                    psi_diagnostic)
from kvseek.wave_solver import Grid

GRID = Grid(1.0, 101)
KERNEL = KernelParams(0.01, 1.0)


def test_limsup_constant_and_synthetic():
    assert limsup_metric(np.full(50, -2.5)) == 2.5
    t = np.linspace(0, 400, 400001)
    s = 3.0 * np.exp(-t) + 0.1 * np.sin(t)
    assert limsup_metric(s, 0.2) == pytest.approx(0.1, abs=1e-6)


def test_limsup_window_selection():
    s = np.array([100.0] * 8 + [1.0, -2.0])
    assert limsup_metric(s, 0.2) == 2.0
    assert limsup_metric(s, 0.5) == 100.0


@pytest.mark.parametrize("wf", [0.0, 0.6, -0.1])
def test_limsup_errors(wf):
    with pytest.raises(ValueError):
        limsup_metric([1.0, 2.0], wf)


def test_limsup_empty():
    with pytest.raises(ValueError):
        limsup_metric([])


def test_psi_zero_and_linear():
    z = np.zeros(101)
    assert psi_diagnostic(0.0, z, z, 1e-3, GRID) == 0.0
    x = GRID.x
    assert psi_diagnostic(0.0, x, x, 1e-3, GRID) == pytest.approx(1.0, abs=1e-4)
    assert psi_diagnostic(2.0, z, z, 1e-3, GRID) == 4.0


def test_psi_time_derivative_term():
    x = GRID.x
    # u_t = 1 everywhere
    assert psi_diagnostic(0.0, np.full(101, 1e-3), np.zeros(101), 1e-3, GRID) == pytest.approx(1.0)
    assert psi_diagnostic(0.0, x, x - 2e-3, 1e-3, GRID) == pytest.approx(1.0 + 4.0, abs=1e-4)


def test_psi_errors():
    z = np.zeros(101)
    with pytest.raises(ValueError, match="missing history"):
        psi_diagnostic(0.0, z, None, 1e-3, GRID)
    with pytest.raises(ValueError):
        psi_diagnostic(0.0, z, np.zeros(100), 1e-3, GRID)


def test_lyapunov_terms():
    z = np.zeros(101)
    assert lyapunov_v(0.0, z, z, KERNEL, 0.01, 0.1, GRID) == 0.0
    x = GRID.x
    w = 1 - x * x
    wt = np.cos(x)
    wts = GRID.trapezoid_weights()
    wx = np.gradient(w, GRID.dx, edge_order=2)
    expect = 0.5 * (0.49 + wts @ (wx * wx) + 0.01 * wts @ (w * w) + wts @ (wt * wt))
    assert lyapunov_v(0.7, w, wt, KERNEL, 0.0, 0.1, GRID) == pytest.approx(expect, rel=1e-14)
    cross = lyapunov_v(0.7, w, wt, KERNEL, 0.02, 0.1, GRID) - expect
    elastic = wts @ (wx * wx) + 0.01 * wts @ (w * w)
    assert cross == pytest.approx(0.5 * (0.02 * 0.1 * elastic + 0.04 * wts @ (w * wt)), rel=1e-12)
    with pytest.raises(ValueError):
        lyapunov_v(0.0, z, z, KERNEL, -0.1, 0.1, GRID)


def test_delta_check():
    check_lyapunov_delta(0.01, 0.01, 0.1, GRID)
    check_lyapunov_delta(0.0, 0.01, 0.1, GRID)
    with pytest.raises(ValueError):
        check_lyapunov_delta(5.0, 0.01, 0.1, GRID)
    with pytest.raises(ValueError):
        check_lyapunov_delta(-0.01, 0.01, 0.1, GRID)


@settings(max_examples=40, deadline=None)
@given(coef=st.lists(st.floats(-5, 5), min_size=4, max_size=4),
       vcoef=st.lists(st.floats(-50, 50), min_size=4, max_size=4),
       v=st.floats(-10, 10))
def test_functional_non_negative_for_accepted_delta(coef, vcoef, v):
    x = GRID.x
    modes = np.array([np.cos((0.5 + n) * math.pi * x) for n in range(4)])
    w = np.asarray(coef) @ modes
    wt = np.asarray(vcoef) @ modes
    assert lyapunov_v(v, w, wt, KERNEL, 0.01, 0.1, GRID) >= 0.0
    assert psi_diagnostic(v, w, w - 1e-3 * wt, 1e-3, GRID) >= 0.0
