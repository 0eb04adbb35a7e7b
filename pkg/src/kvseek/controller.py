"""Demodulation, the filtered boundary control law and the estimate integrator."""

from dataclasses import dataclass
import math

from kvseek.kernel import KernelParams, control_integral
from kvseek.probe import ProbeParams


@dataclass(frozen=True)
class ControllerParams:
    """Adaptation gain ``K``, backstepping ``c``, low-pass cutoff ``c_bar`` [rad/s].

    ``washout_cutoff`` [rad/s] optionally high-passes the measured output
    before demodulation; ``0`` disables it and gives the plain law.
    """

    gain: float
    c: float
    filter_cutoff: float
    probe: ProbeParams
    washout_cutoff: float = 0.0

    def __post_init__(self):
        if not self.gain > 0:
            raise ValueError("gain must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")
        if not self.filter_cutoff > 0:
            raise ValueError("filter_cutoff must be positive")
        if not self.washout_cutoff >= 0:
            raise ValueError("washout_cutoff must be non-negative")


@dataclass(frozen=True)
class ControllerState:
    theta_hat: float = 0.0
    filter_state: float = 0.0
    last_G: float = 0.0
    last_H_hat: float = 0.0
    time: float = 0.0
    # low-pass state of the washout; None until the first measurement
    washout_state: float | None = None


def demod_gradient(y: float, t: float, a: float, omega: float) -> float:
    """Gradient estimate ``G = (2/a) sin(w t) y``."""
    if not a > 0:
        raise ValueError("dither amplitude must be positive")
    return (2.0 / a) * math.sin(omega * t) * y


def demod_hessian(y: float, t: float, a: float, omega: float) -> float:
    """Hessian estimate ``H_hat = -(8/a^2) cos(2 w t) y``."""
    if not a > 0:
        raise ValueError("dither amplitude must be positive")
    return -(8.0 / (a * a)) * math.cos(2.0 * omega * t) * y


def lowpass_step(state: float, target: float, cutoff: float, dt: float) -> float:
    """One implicit-Euler step of ``x' = cutoff (target - x)``."""
    return (state + dt * cutoff * target) / (1.0 + dt * cutoff)


def control_update(state: ControllerState, params: ControllerParams, kernel: KernelParams,
                   y: float, u_field, grid, dt: float):
    """Advance the controller by ``dt`` from measurements taken at ``state.time``.

    Returns ``(new_state, U)``. ``U`` is the filtered output of
    ``K [G - H_hat * int gain_weight u]`` and ``theta_hat`` integrates it.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    probe = params.probe
    washout = state.washout_state
    if params.washout_cutoff > 0:
        washout = y if washout is None else lowpass_step(washout, y, params.washout_cutoff, dt)
        y = y - washout
    G = demod_gradient(y, state.time, probe.amplitude, probe.frequency)
    H_hat = demod_hessian(y, state.time, probe.amplitude, probe.frequency)
    raw = params.gain * (G - H_hat * control_integral(kernel, u_field, grid))
    U = lowpass_step(state.filter_state, raw, params.filter_cutoff, dt)
    new = ControllerState(
        theta_hat=state.theta_hat + U * dt,
        filter_state=U,
        last_G=G,
        last_H_hat=H_hat,
        time=state.time + dt,
        washout_state=washout,
    )
    return new, U


def average_mode_update(vartheta: float, u_av_field, H_true: float, params: ControllerParams,
                        kernel: KernelParams, grid) -> float:
    """Average control law ``K_bar vartheta - K_bar int gain_weight u``, ``K_bar = K H``.

    Needs the true Hessian and estimation error, so it is for validation only.
    """
    if not H_true < 0:
        raise ValueError("H_true must be negative")
    K_bar = params.gain * H_true
    return K_bar * vartheta - K_bar * control_integral(kernel, u_av_field, grid)
