"""Exception types shared by every module."""


class ExactStirlingError(Exception):
    """Base class for all library errors."""


class NonConvergence(ExactStirlingError):
    """An iterative procedure (quadrature, continued fraction, series) failed to settle."""


class DivergentTail(ExactStirlingError):
    """An integrand on an infinite contour does not decay."""


class DomainError(ExactStirlingError, ValueError):
    """Arguments outside the region where a representation is valid."""


class PoleAtOne(DomainError):
    pass


class PoleAtNonPositiveInteger(DomainError):
    pass


class LogSingularity(DomainError):
    """A logarithm in a discontinuity term has a vanishing argument."""


class SingularityOnBreakpoint(ExactStirlingError):
    """Raised only when a pole cannot be separated from the panel breakpoints."""
