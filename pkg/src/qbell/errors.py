"""Exception types raised by qbell validators."""


class QbellError(ValueError):
    """Base class for all qbell validation and domain errors."""


class HermiticityError(QbellError):
    """Matrix is not Hermitian within tolerance."""


class TraceError(QbellError):
    """Matrix trace deviates from 1 beyond tolerance."""


class PositivityError(QbellError):
    """Matrix has an eigenvalue below the allowed negative tolerance."""


class DomainError(QbellError):
    """Scalar parameter lies outside the admissible domain."""
