# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: tridiagonal solves and the fused closed-loop time step.

Mirrors :mod:`kvseek.sim.reference`, which composes the public Python
operations step by step. Both must agree to rounding.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, isfinite

from kvseek.errors import NumericalFailure

cnp.import_array()


cdef class Tridiagonal:
    """LU-prefactored tridiagonal matrix (Thomas algorithm).

    ``sub[i] = A[i, i-1]`` (``sub[0]`` unused), ``sup[i] = A[i, i+1]``
    (``sup[n-1]`` unused).
    """

    cdef double[::1] sub, cp, inv, work
    cdef readonly Py_ssize_t n

    def __init__(self, sub, diag, sup):
        cdef double[::1] s = np.ascontiguousarray(sub, dtype=np.float64)
        cdef double[::1] dg = np.ascontiguousarray(diag, dtype=np.float64)
        cdef double[::1] sp = np.ascontiguousarray(sup, dtype=np.float64)
        cdef Py_ssize_t i, n = dg.shape[0]
        cdef double den
        if n < 1 or s.shape[0] != n or sp.shape[0] != n:
            raise ValueError("sub, diag and sup must have equal positive length")
        self.n = n
        self.sub = s.copy()
        self.cp = np.zeros(n)
        self.inv = np.zeros(n)
        self.work = np.zeros(n)
        for i in range(n):
            den = dg[i] if i == 0 else dg[i] - s[i] * self.cp[i - 1]
            if den == 0.0:
                raise ZeroDivisionError(f"singular tridiagonal matrix at row {i}")
            self.inv[i] = 1.0 / den
            self.cp[i] = sp[i] * self.inv[i] if i < n - 1 else 0.0

    cdef void solve_into(self, double* rhs, double* out) noexcept nogil:
        cdef Py_ssize_t i, n = self.n
        cdef double* y = &self.work[0]
        y[0] = rhs[0] * self.inv[0]
        for i in range(1, n):
            y[i] = (rhs[i] - self.sub[i] * y[i - 1]) * self.inv[i]
        out[n - 1] = y[n - 1]
        for i in range(n - 2, -1, -1):
            out[i] = y[i] - self.cp[i] * out[i + 1]

    def solve(self, rhs):
        cdef double[::1] r = np.ascontiguousarray(rhs, dtype=np.float64)
        if r.shape[0] != self.n:
            raise ValueError("right-hand side has wrong length")
        out = np.empty(self.n)
        cdef double[::1] o = out
        self.solve_into(&r[0], &o[0])
        return out


cdef class ClosedLoop:
    """Closed extremum seeking loop advanced one step at a time.

    One step is ``sense()`` (measure at ``t_n``, compute ``U``) followed by
    ``actuate()`` (integrate ``theta_hat``, drive the boundary, advance the
    plant to ``t_{n+1}``).
    """

    cdef double[::1] _alpha, _v, _u, _u_prev, _rhs, _z, _vnew, _C, _S, _q
    cdef Tridiagonal _lhs
    cdef readonly Py_ssize_t points
    cdef readonly long n
    cdef readonly double dx, dt, damping, eps
    cdef readonly double amplitude, omega, C_end, S_end
    cdef readonly double theta_star, y_star, hessian
    cdef readonly int average
    cdef readonly double gain, filter_cutoff, washout_cutoff, K_bar
    cdef readonly bint analytic_velocity
    cdef public double theta_hat, filter_state, washout_state
    cdef readonly bint washout_started, sensed
    cdef readonly double y, G, Hhat, U, control_integral, Theta

    def __init__(self, alpha, velocity, double dx, double dt, double damping, double eps,
                 lhs_sub, lhs_diag, lhs_sup,
                 double amplitude, double omega, C, S,
                 double theta_star, double y_star, double hessian,
                 bint average, double gain, double filter_cutoff, double washout_cutoff,
                 weights, double K_bar,
                 double theta_hat=0.0, double filter_state=0.0, long step=0,
                 bint analytic_velocity=True):
        self._alpha = np.array(alpha, dtype=np.float64)
        self._v = np.array(velocity, dtype=np.float64)
        self.points = self._alpha.shape[0]
        if self._v.shape[0] != self.points or self.points < 3:
            raise ValueError("alpha and velocity must have the same length >= 3")
        self._C = np.array(C, dtype=np.float64)
        self._S = np.array(S, dtype=np.float64)
        self._q = np.array(weights, dtype=np.float64)
        if self._C.shape[0] != self.points or self._S.shape[0] != self.points or self._q.shape[0] != self.points:
            raise ValueError("profile and weight arrays must match the grid")
        self._lhs = Tridiagonal(lhs_sub, lhs_diag, lhs_sup)
        if self._lhs.n != self.points - 1:
            raise ValueError("plant matrix must have points - 1 rows")
        self._u = np.zeros(self.points)
        self._u_prev = np.zeros(self.points)
        self._rhs = np.zeros(self.points - 1)
        self._z = np.zeros(self.points - 1)
        self._vnew = np.zeros(self.points - 1)
        self.dx, self.dt, self.damping, self.eps = dx, dt, damping, eps
        self.amplitude, self.omega = amplitude, omega
        self.C_end, self.S_end = self._C[self.points - 1], self._S[self.points - 1]
        self.theta_star, self.y_star, self.hessian = theta_star, y_star, hessian
        self.average = average
        self.gain, self.filter_cutoff, self.washout_cutoff = gain, filter_cutoff, washout_cutoff
        self.K_bar = K_bar
        self.analytic_velocity = analytic_velocity
        self.theta_hat = theta_hat
        self.filter_state = filter_state
        self.washout_state = 0.0
        self.washout_started = False
        self.sensed = False
        self.n = step
        self.U = filter_state
        self.Theta = self._alpha[0]

    @property
    def t(self):
        return self.n * self.dt

    @property
    def alpha(self):
        return np.asarray(self._alpha)

    @property
    def velocity(self):
        return np.asarray(self._v)

    @property
    def u(self):
        return np.asarray(self._u)

    @property
    def u_prev(self):
        return np.asarray(self._u_prev)

    @property
    def theta(self):
        return self._alpha[self.points - 1]

    cdef int _sense(self) except -1:
        cdef Py_ssize_t i, N = self.points
        cdef double t = self.n * self.dt
        cdef double s1 = sin(self.omega * t), c1 = cos(self.omega * t)
        cdef double a = self.amplitude, aw = self.amplitude * self.omega
        cdef double ym, raw, acc = 0.0, e
        self.Theta = self._alpha[0]
        e = self.Theta - self.theta_star
        self.y = self.y_star + 0.5 * self.hessian * e * e
        if not isfinite(self.y):
            raise NumericalFailure(self.n, "y", t)
        ym = self.y
        if self.washout_cutoff > 0.0:
            if self.washout_started:
                self.washout_state = (self.washout_state + self.dt * self.washout_cutoff * self.y) / (
                    1.0 + self.dt * self.washout_cutoff)
            else:
                self.washout_state = self.y
                self.washout_started = True
            ym = self.y - self.washout_state
        if a > 0.0:
            self.G = (2.0 / a) * s1 * ym
            self.Hhat = -(8.0 / (a * a)) * cos(2.0 * self.omega * t) * ym
        else:
            self.G = 0.0
            self.Hhat = 0.0
        for i in range(N):
            self._u_prev[i] = self._u[i]
        for i in range(N):
            self._u[i] = self._v[i] - aw * (c1 * self._C[i] - s1 * self._S[i])
            acc += self._q[i] * self._u[i]
        self.control_integral = acc
        if self.average:
            self.U = self.K_bar * (self.Theta - a * s1 - self.theta_star) - self.K_bar * acc
        else:
            raw = self.gain * (self.G - self.Hhat * acc)
            self.filter_state = (self.filter_state + self.dt * self.filter_cutoff * raw) / (
                1.0 + self.dt * self.filter_cutoff)
            self.U = self.filter_state
        if not isfinite(self.U):
            raise NumericalFailure(self.n, "U", t)
        self.sensed = True
        return 0

    cdef int _actuate(self) except -1:
        cdef Py_ssize_t i, N = self.points, m = self.points - 1
        cdef double dt = self.dt, d = self.damping, idx2 = 1.0 / (self.dx * self.dx)
        cdef double t1, s1, c1, aB, vB, b_old, b_new, h = 0.5 * dt
        if not self.sensed:
            raise RuntimeError("actuate() called without a preceding sense()")
        self.sensed = False
        self.theta_hat += self.U * dt
        self.n += 1
        t1 = self.n * dt
        s1 = sin(self.omega * t1)
        c1 = cos(self.omega * t1)
        aB = self.theta_hat + self.amplitude * (s1 * self.C_end + c1 * self.S_end)
        if self.analytic_velocity:
            vB = self.U + self.amplitude * self.omega * (c1 * self.C_end - s1 * self.S_end)
        else:
            vB = (aB - self._alpha[N - 1]) / dt
        b_old = (self._alpha[N - 1] + d * self._v[N - 1]) * idx2
        b_new = (aB + d * vB) * idx2
        for i in range(m):
            self._z[i] = 2.0 * self._alpha[i] + (d + h) * self._v[i]
        # eps v' = L(alpha + d v), trapezoidal in time
        self._rhs[0] = self.eps * self._v[0] + h * 2.0 * (self._z[1] - self._z[0]) * idx2
        for i in range(1, m - 1):
            self._rhs[i] = self.eps * self._v[i] + h * (self._z[i - 1] - 2.0 * self._z[i] + self._z[i + 1]) * idx2
        self._rhs[m - 1] = self.eps * self._v[m - 1] + h * ((self._z[m - 2] - 2.0 * self._z[m - 1]) * idx2 + b_old + b_new)
        self._lhs.solve_into(&self._rhs[0], &self._vnew[0])
        for i in range(m):
            self._alpha[i] += h * (self._v[i] + self._vnew[i])
            self._v[i] = self._vnew[i]
        self._alpha[N - 1] = aB
        self._v[N - 1] = vB
        if not isfinite(self.theta_hat):
            raise NumericalFailure(self.n, "theta_hat", t1)
        for i in range(N):
            if not isfinite(self._alpha[i]):
                raise NumericalFailure(self.n, "displacement", t1)
            if not isfinite(self._v[i]):
                raise NumericalFailure(self.n, "velocity", t1)
        return 0

    def sense(self):
        self._sense()

    def actuate(self):
        self._actuate()

    def run_block(self, long steps, double[::1] dense_Theta, double[::1] dense_theta,
                  double[::1] dense_y, long offset):
        """Run ``steps`` full steps, storing sensed values at ``offset + k``."""
        cdef long k
        if steps <= 0:
            return
        if offset < 0 or offset + steps > dense_Theta.shape[0] or offset + steps > dense_theta.shape[0] \
                or offset + steps > dense_y.shape[0]:
            raise IndexError("dense output arrays too short")
        for k in range(steps):
            self._sense()
            dense_Theta[offset + k] = self.Theta
            dense_theta[offset + k] = self._alpha[self.points - 1]
            dense_y[offset + k] = self.y
            self._actuate()
