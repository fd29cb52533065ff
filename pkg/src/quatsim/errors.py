"""Exception hierarchy shared across the package."""


class QuatsimError(Exception):
    """Base class for all errors raised by quatsim."""


class DimensionError(QuatsimError):
    """Operand shapes are not conformable for the requested operation."""


class DomainError(QuatsimError):
    """Input lies outside the mathematical domain of the operation
    (zero-quaternion inverse, non-unit Sp(1) element, non-Hermitian
    eigensolver input, complex matrix outside the embedding image, ...)."""


class ConvergenceError(QuatsimError):
    """An iterative routine exhausted its iteration budget."""


class ConditioningError(QuatsimError):
    """A spectrum-dependent operation met an eigenvalue below its floor."""


class ValidationError(QuatsimError):
    """A quantum object violates one of its defining invariants.

    ``invariant`` is a short machine-readable tag ("psd", "unit_trace",
    "completeness", "kraus_normalization", "effect_bound", ...) so that
    callers can report exactly which invariant failed.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


class FrameInconsistencyError(QuatsimError):
    """Frame-function responses are not consistent with any single state."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
