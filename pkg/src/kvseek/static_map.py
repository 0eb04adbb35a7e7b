"""Quadratic performance map measured by the extremum seeking loop."""

from dataclasses import dataclass
import math


@dataclass(frozen=True)
class QuadraticMap:
    """Concave quadratic map ``y = y* + (H/2)(theta - theta*)**2``.

    Only the simulation loop evaluates the map; controllers never read its
    fields.
    """

    theta_star: float
    y_star: float
    hessian: float

    def __post_init__(self):
        for name in ("theta_star", "y_star", "hessian"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.hessian < 0:
            raise ValueError(f"hessian must be strictly negative, got {self.hessian}")

    def __call__(self, theta):
        return evaluate(self, theta)


def evaluate(qmap: QuadraticMap, theta):
    """Output of the map at input ``theta`` (scalar or array)."""
    delta = theta - qmap.theta_star
    return qmap.y_star + 0.5 * qmap.hessian * delta * delta
