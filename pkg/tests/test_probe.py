from hypothesis import given, settings, strategies as st
import mpmath as mp
import numpy as np
import pytest

from kvseek import probe as pr
from kvseek.probe import ProbeParams

TABLE = ProbeParams(0.2, 8.0, 0.1, 1.0)


def _mp_beta(omega, d, sign):
    mp.mp.dps = 40
    w, d = mp.mpf(omega), mp.mpf(d)
    r = mp.sqrt(1 + w * w * d * d)
    return float(w * mp.sqrt((r + sign) / (2 * r * r)))


def test_beta_rates_against_extended_precision():
    assert pr.beta_bar(8.0, 0.1) == pytest.approx(_mp_beta(8.0, 0.1, 1), rel=1e-14)
    assert pr.beta_hat(8.0, 0.1) == pytest.approx(_mp_beta(8.0, 0.1, -1), rel=1e-14)
    assert pr.beta_bar(8.0, 0.1) == pytest.approx(6.6709, abs=1e-4)
    assert pr.beta_hat(8.0, 0.1) == pytest.approx(2.3402, abs=5e-4)


def test_beta_rates_undamped():
    assert pr.beta_bar(3.7, 0.0) == 3.7
    assert pr.beta_hat(3.7, 0.0) == 0.0


def test_beta_bar_high_frequency_asymptote():
    w, d = 1e6, 0.1
    assert pr.beta_bar(w, d) / np.sqrt(w / (2 * d)) == pytest.approx(1.0, rel=1e-3)


def test_beta_hat_small_damping_taylor():
    assert pr.beta_hat(1.0, 1e-4) == pytest.approx(0.5e-4, rel=1e-8)


def test_rejects_bad_rates():
    with pytest.raises(ValueError):
        pr.beta_bar(0.0, 0.1)
    with pytest.raises(ValueError):
        pr.beta_hat(1.0, -0.1)


@pytest.mark.parametrize("kw", [dict(amplitude=-0.1), dict(frequency=0.0), dict(damping=-1.0),
                                dict(domain_length=0.0)])
def test_params_validation(kw):
    base = dict(amplitude=0.2, frequency=8.0, damping=0.1, domain_length=1.0)
    with pytest.raises(ValueError):
        ProbeParams(**{**base, **kw})


def test_sensed_end_sees_pure_sinusoid():
    t = np.linspace(0, 3, 301)
    np.testing.assert_allclose(pr.beta_r(TABLE, 0.0, t), 0.2 * np.sin(8 * t), atol=1e-15)
    np.testing.assert_allclose(pr.beta_r_t(TABLE, 0.0, t), 0.2 * 8 * np.cos(8 * t), atol=1e-14)


def test_undamped_reduction():
    p = ProbeParams(0.3, 5.0, 0.0, 2.0)
    x = np.linspace(0, 2, 41)[:, None]
    t = np.linspace(0, 4, 57)[None, :]
    np.testing.assert_allclose(pr.beta_r(p, x, t), 0.3 * np.sin(5 * t) * np.cos(5 * x),
                               rtol=0, atol=1e-12)
    np.testing.assert_allclose(pr.beta_r_t(p, x, t), 1.5 * np.cos(5 * t) * np.cos(5 * x),
                               rtol=0, atol=1e-12)


def test_time_derivatives_match_differences():
    x = np.linspace(0, 1, 11)
    t, h = 0.37, 1e-5
    fd = (pr.beta_r(TABLE, x, t + h) - pr.beta_r(TABLE, x, t - h)) / (2 * h)
    np.testing.assert_allclose(pr.beta_r_t(TABLE, x, t), fd, atol=1e-8)
    fd2 = (pr.beta_r_t(TABLE, x, t + h) - pr.beta_r_t(TABLE, x, t - h)) / (2 * h)
    np.testing.assert_allclose(pr.beta_r_tt(TABLE, x, t), fd2, atol=1e-7)


def test_pde_residual_second_order():
    pts = [(0.3, 0.1), (0.5, 1.3), (0.8, 2.2)]
    res = [max(abs(pr.pde_residual_fd(TABLE, x, t, h)) for x, t in pts) for h in (4e-3, 2e-3, 1e-3)]
    for a, b in zip(res, res[1:]):
        assert 3.0 < a / b < 5.0


def test_neumann_condition_at_sensed_end():
    t = np.linspace(0, 1, 7)

    def slope(h):
        f0, f1, f2 = (pr.beta_r(TABLE, k * h, t) for k in range(3))
        return np.max(np.abs((-3 * f0 + 4 * f1 - f2) / (2 * h)))

    s1, s2 = slope(1e-2), slope(5e-3)
    assert s1 <= 10 * 1e-2**2
    # the even extension kills the h^2 term, so the decay is at least second order
    assert s1 / s2 > 3.5


def test_dither_and_period():
    t = np.linspace(0, 2, 101)
    np.testing.assert_allclose(pr.dither(TABLE, t), pr.beta_r(TABLE, 1.0, t), rtol=0, atol=0)
    np.testing.assert_allclose(pr.dither(TABLE, t + TABLE.period), pr.dither(TABLE, t), atol=1e-12)
    bound = 0.2 * np.cosh(pr.beta_hat(8.0, 0.1))
    assert np.all(np.abs(pr.dither(TABLE, np.linspace(0, 10, 10001))) <= bound)


def test_dither_undamped_half_wave():
    p = ProbeParams(0.2, np.pi, 0.0, 1.0)
    t = np.linspace(0, 3, 31)
    np.testing.assert_allclose(pr.dither(p, t), -0.2 * np.sin(np.pi * t), atol=1e-15)


def test_spatial_profiles_reconstruct():
    x = np.linspace(0, 1, 21)
    C, S = pr.spatial_profiles(TABLE, x)
    t = 0.77
    np.testing.assert_allclose(0.2 * (np.sin(8 * t) * C + np.cos(8 * t) * S),
                               pr.beta_r(TABLE, x, t), atol=1e-15)


def test_outside_domain_rejected():
    with pytest.raises(ValueError):
        pr.beta_r(TABLE, 1.01, 0.0)
    with pytest.raises(ValueError):
        pr.beta_r_t(TABLE, np.array([-0.1, 0.5]), 0.0)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.01, 2.0), w=st.floats(0.5, 40.0), d=st.floats(0.0, 1.0),
       D=st.floats(0.2, 3.0), xs=st.floats(0.0, 1.0), t=st.floats(-50, 50))
def test_growth_bound(a, w, d, D, xs, t):
    p = ProbeParams(a, w, d, D)
    x = xs * D
    val = abs(pr.beta_r(p, x, t))
    grow = np.cosh(p.spatial_growth * x)
    assert val <= a * grow * (1 + 1e-12) + 1e-15
    assert a * grow <= a * np.exp(p.spatial_growth * x) * (1 + 1e-15)
    assert pr.beta_r(p, 0.0, t) == pytest.approx(a * np.sin(w * t), abs=1e-14 * (1 + a))
