"""Gradient extremum seeking through a Kelvin-Voigt damped wave actuator."""

from kvseek._backend import BACKEND, available_backends
from kvseek.controller import (ControllerParams, ControllerState, average_mode_update,
                               control_update, demod_gradient, demod_hessian)
from kvseek.errors import ConfigError, NumericalFailure
from kvseek.kernel import (KernelParams, backstepping_transform, bessel_i1, control_integral,
                           gain_weight, kernel_eval)
from kvseek.probe import ProbeParams, beta_bar, beta_hat, beta_r, beta_r_t, dither
from kvseek.spectrum import EigenPair, eigenvalues
from kvseek.static_map import QuadraticMap, evaluate
from kvseek.wave_solver import Grid, KvParams, WaveField, step

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConfigError", "ControllerParams", "ControllerState", "EigenPair", "Grid",
    "KernelParams", "KvParams", "NumericalFailure", "ProbeParams", "QuadraticMap", "WaveField",
    "available_backends", "average_mode_update", "backstepping_transform", "bessel_i1", "beta_bar",
    "beta_hat", "beta_r", "beta_r_t", "control_integral", "control_update", "demod_gradient",
    "demod_hessian", "dither", "eigenvalues", "evaluate", "gain_weight", "kernel_eval", "step",
]
