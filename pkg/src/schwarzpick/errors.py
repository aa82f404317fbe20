"""Exception types raised by the library."""


class DegenerateNodesError(ValueError):
    """Two interpolation nodes coincide."""


class DegenerateBoundaryError(ArithmeticError):
    """A function value reached the unit circle where an interior value is needed."""


class LimitDivergenceError(ArithmeticError):
    """Richardson extrapolation of a diagonal limit did not settle."""


class InvalidBoundaryData(ValueError):
    """Boundary modulus samples are negative or not finite."""


class PoleError(ArithmeticError):
    """A node sits on a zero of the Blaschke factor used as a divisor."""


class SolverRefusal(ArithmeticError):
    """The Schur construction was requested on data without a strict solution."""

    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(f"data classified {verdict.status}; no strict Schur solution")
