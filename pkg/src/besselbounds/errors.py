"""Exception types shared across the package."""


class BesselBoundsError(Exception):
    """Base class for errors raised by this package."""


class DomainError(BesselBoundsError, ValueError):
    """Arguments fall outside a function's mathematical domain."""


class EvaluationError(BesselBoundsError, RuntimeError):
    """A numerical method failed to produce a trustworthy value."""


class UnfittableError(EvaluationError):
    """An error-order fit was requested on degenerate samples."""
