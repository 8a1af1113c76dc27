"""Exception types shared across the package."""


class FermatwError(Exception):
    """Base class for package-specific errors."""


class PoleError(FermatwError, ArithmeticError):
    """An evaluation landed on (or within the exclusion radius of) a pole.

    For lattice-function poles, ``location`` is the nearest lattice point;
    for rational-map poles it is the offending input point.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class SolutionPoleError(PoleError):
    """The solution pair itself has a pole: the evaluation point is a zero
    of the underlying lattice function, not a lattice point."""


class CurveMembershipError(FermatwError, ValueError):
    """An input point is not on the required curve within tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConditioningError(FermatwError, ArithmeticError):
    """A denominator is too close to zero for a trustworthy result."""


class UnsupportedFeatureError(FermatwError, NotImplementedError):
    """Documented out-of-scope request (e.g. lattice inversion with g2 != 0)."""


class ExprError(FermatwError, ValueError):
    """Base class for expression-language errors."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class ExprSyntaxError(ExprError):
    """Malformed expression source."""


class EntireViolationError(ExprError):
    """The expression is syntactically valid but not an entire function."""


class EvalOverflowError(FermatwError, ArithmeticError):
    """Expression evaluation produced a non-finite value."""


class MultiplicityWarning(UserWarning):
    """Roots of a fiber polynomial are too close to count multiplicity safely."""
