"""Exception and warning types shared across the package."""


class SpinAxesError(Exception):
    """Base class for errors raised by this package."""


class DomainError(SpinAxesError, ValueError):
    """Quantum numbers or arguments outside the supported domain."""


class ValidationError(SpinAxesError, ValueError):
    """Input data fails a structural invariant (shape, symmetry, norm)."""


class ConsistencyError(SpinAxesError, RuntimeError):
    """An internal cross-check failed on data that passed validation."""


class NonPhysicalWarning(UserWarning):
    """A constructed density matrix has a negative eigenvalue."""


class NonClassicalWarning(UserWarning):
    """A pseudo-probability input took negative values."""
