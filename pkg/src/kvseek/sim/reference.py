"""Pure-Python closed loop built from the public per-step operations.

Same interface as the compiled ``kvseek._core.ClosedLoop``; used when the
extension is unavailable and as the reference it is tested against.
"""

import math

import numpy as np

from kvseek import probe as probe_ops
from kvseek.controller import (ControllerState, average_mode_update, control_update,
                               demod_gradient, demod_hessian, lowpass_step)
from kvseek.errors import NumericalFailure
from kvseek.kernel import control_integral
from kvseek.static_map import evaluate
from kvseek.wave_solver import WaveField, step


class ReferenceLoop:

    def __init__(self, scenario, alpha, velocity, backend="python"):
        self.sc = scenario
        self._x = scenario.grid.x
        self.field = WaveField(np.array(alpha, dtype=float), np.array(velocity, dtype=float), 0.0)
        self.field.check(scenario.grid)
        self.n = 0
        self.dt = scenario.dt
        self.state = ControllerState(theta_hat=scenario.theta_hat_0)
        self._pending = None
        self._backend = backend
        self.sensed = False
        self.U = 0.0
        self.y = self.G = self.Hhat = self.control_integral = 0.0
        self.Theta = float(self.field.displacement[0])
        self._u = np.zeros(scenario.grid.points)
        self._u_prev = np.zeros(scenario.grid.points)

    @property
    def t(self):
        return self.n * self.dt

    @property
    def theta_hat(self):
        return self.state.theta_hat

    @property
    def filter_state(self):
        return self.state.filter_state

    @property
    def alpha(self):
        return self.field.displacement

    @property
    def velocity(self):
        return self.field.velocity

    @property
    def theta(self):
        return float(self.field.displacement[-1])

    @property
    def u(self):
        return self._u

    @property
    def u_prev(self):
        return self._u_prev

    def _washed(self, y):
        h = self.sc.controller.washout_cutoff
        if h <= 0:
            return y, self.state.washout_state
        w = self.state.washout_state
        w = y if w is None else lowpass_step(w, y, h, self.dt)
        return y - w, w

    def sense(self):
        sc = self.sc
        t = self.n * self.dt
        self.Theta = float(self.field.displacement[0])
        self.y = float(evaluate(sc.map, self.Theta))
        if not math.isfinite(self.y):
            raise NumericalFailure(self.n, "y", t)
        self._u_prev = self._u
        self._u = self.field.velocity - probe_ops.beta_r_t(sc.probe, self._x, t)
        self.control_integral = control_integral(sc.kernel, self._u, sc.grid)
        state = ControllerState(self.state.theta_hat, self.state.filter_state, self.state.last_G,
                                self.state.last_H_hat, t, self.state.washout_state)
        if sc.mode == "nonaverage":
            new, U = control_update(state, sc.controller, sc.kernel, self.y, self._u, sc.grid,
                                    self.dt)
            self.G, self.Hhat = new.last_G, new.last_H_hat
        else:
            a, w = sc.probe.amplitude, sc.probe.frequency
            vartheta = self.Theta - a * math.sin(w * t) - sc.map.theta_star
            U = average_mode_update(vartheta, self._u, sc.map.hessian, sc.controller,
                                    sc.kernel, sc.grid)
            ym, washout = self._washed(self.y)
            if a > 0:
                self.G = demod_gradient(ym, t, a, w)
                self.Hhat = demod_hessian(ym, t, a, w)
            new = ControllerState(state.theta_hat + U * self.dt, state.filter_state,
                                  self.G, self.Hhat, t + self.dt, washout)
        if not math.isfinite(U):
            raise NumericalFailure(self.n, "U", t)
        self.U = U
        self._pending = new
        self.sensed = True

    def actuate(self):
        if not self.sensed:
            raise RuntimeError("actuate() called without a preceding sense()")
        sc = self.sc
        self.sensed = False
        self.state = self._pending
        self.n += 1
        t1 = self.n * self.dt
        boundary = self.state.theta_hat + probe_ops.dither(sc.probe, t1)
        if sc.boundary_velocity == "analytic":
            rate = self.U + probe_ops.dither_rate(sc.probe, t1)
        else:
            rate = None
        try:
            self.field = step(self.field, sc.kv, sc.grid, self.dt, boundary, rate,
                              backend=self._backend)
        except ArithmeticError:
            raise NumericalFailure(self.n, "velocity", t1) from None
        if not math.isfinite(self.state.theta_hat):
            raise NumericalFailure(self.n, "theta_hat", t1)
        if not np.all(np.isfinite(self.field.displacement)):
            raise NumericalFailure(self.n, "displacement", t1)
        if not np.all(np.isfinite(self.field.velocity)):
            raise NumericalFailure(self.n, "velocity", t1)

    def run_block(self, steps, dense_Theta, dense_theta, dense_y, offset):
        if steps <= 0:
            return
        if offset < 0 or offset + steps > min(len(dense_Theta), len(dense_theta), len(dense_y)):
            raise IndexError("dense output arrays too short")
        for k in range(steps):
            self.sense()
            dense_Theta[offset + k] = self.Theta
            dense_theta[offset + k] = self.theta
            dense_y[offset + k] = self.y
            self.actuate()
