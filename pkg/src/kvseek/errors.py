class ConfigError(ValueError):
    """Invalid scenario configuration."""


class NumericalFailure(ArithmeticError):
    """A closed-loop quantity became non-finite."""

    def __init__(self, step, quantity, time=None):
        self.step = step
        self.quantity = quantity
        self.time = time
        where = f" (t={time:.6g})" if time is not None else ""
        super().__init__(f"non-finite {quantity} at step {step}{where}")
