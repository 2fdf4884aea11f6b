"""Exception hierarchy.

Every error raised by the package derives from :class:`TwoModeError` so callers
can catch the whole family at once.
"""


class TwoModeError(Exception):
    pass


class DimensionError(TwoModeError, ValueError):
    """Matrix has the wrong shape for the requested operation."""


class UnsupportedSizeError(DimensionError):
    pass


class ContractError(TwoModeError, ValueError):
    """An input violates a documented precondition (non-Hermitian, NaN, ...)."""


class ShapeError(ContractError):
    """Covariance matrix is not 4x4 (or 2x2) real symmetric."""


class UnphysicalStateError(TwoModeError, ValueError):
    """Covariance matrix violates the uncertainty relation sigma + i/2 Omega >= 0."""

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NumericalInconsistencyError(TwoModeError, ArithmeticError):
    pass


class InvariantInconsistencyError(NumericalInconsistencyError):
    pass


class FactorizationError(NumericalInconsistencyError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DomainError(TwoModeError, ValueError):
    pass


class UnsupportedStateError(TwoModeError, ValueError):
    pass


class CutoffTooSmallError(TwoModeError, ValueError):
    def __init__(self, message, deficit=None):
        super().__init__(message)
        self.deficit = deficit


class ConventionError(TwoModeError, RuntimeError):
    """Fock-space generators disagree with the phase-space symplectic matrices."""
