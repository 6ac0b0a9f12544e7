"""Exception and warning types."""


class FracOpsError(Exception):
    """Base class for library errors."""


class DomainError(FracOpsError, ValueError):
    """An argument lies outside the domain where an operator is defined."""


class DegeneracyError(FracOpsError, ArithmeticError):
    """A normalization denominator vanished where it should not."""


class TailBoundError(FracOpsError, ValueError):
    """The integrand's behaviour at infinity cannot be bounded."""


class QuadratureWarning(RuntimeWarning):
    """An integral did not reach the requested tolerance."""
