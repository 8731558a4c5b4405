"""Exception types shared across the package."""


class FracbirthError(Exception):
    """Base class for all package errors."""


class DomainError(FracbirthError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class NonConvergenceError(FracbirthError, ArithmeticError):
    """A series or quadrature failed to meet its tolerance.

    The best available estimate and its error bound are attached so callers
    can decide whether to accept a degraded result.
    """

    def __init__(self, message, best=None, err_estimate=None):
        super().__init__(message)
        self.best = best
        self.err_estimate = err_estimate


class NonPositiveRateError(FracbirthError, ValueError):
    """A birth rate is zero or negative."""


class NearDegenerateRatesError(FracbirthError, ValueError):
    """Two birth rates are too close for the divided-difference formulas."""


class TruncationNotConvergedError(FracbirthError, ArithmeticError):
    """A truncated infinite sum stopped before its increments became negligible.

    ``partial`` carries the truncated result with its diagnostics.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DivergentMeanError(FracbirthError, ArithmeticError):
    """The requested mean is infinite (e.g. linear rates under a heavy clock)."""


class DegenerateSupportError(FracbirthError, ValueError):
    """A goodness-of-fit comparison collapsed to a single usable bin."""
