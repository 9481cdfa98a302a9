"""Exception types shared across the package."""


class BranchCutCrossed(ValueError):
    """The working segment crosses the square-root branch cut (negative real axis)."""


class ZeroArgument(ValueError):
    """A square root or inverse-square map was requested at its branch point 0."""


class SectorViolation(ValueError):
    """A line direction leaves the pole-free sector |arg z| < 4*pi/5."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SingularMatrix(ArithmeticError):
    """LU factorisation hit a (numerically) zero pivot."""


class SingularJacobian(ArithmeticError):
    """Newton's linear solve failed; a pole on or near the line is the usual cause."""

    def __init__(self, iteration: int, message: str = ""):
        self.iteration = iteration
        super().__init__(message or f"singular Jacobian at Newton iteration {iteration}")
