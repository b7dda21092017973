"""Exception types shared across the package."""

__all__ = [
    "NRangeError",
    "DimensionMismatch",
    "NormDefinitionError",
    "UnitVectorError",
    "PreconditionError",
    "RepairError",
    "SpecError",
]


class NRangeError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatch(NRangeError, ValueError):
    """A vector, functional or matrix has the wrong length for its space."""


class NormDefinitionError(NRangeError, ValueError):
    """An expression tree does not define a valid norm (or gauge)."""


class UnitVectorError(NRangeError, ValueError):
    """An argument that must lie on the unit sphere does not."""


class PreconditionError(NRangeError, ValueError):
    """A numerical precondition (e.g. a deficiency threshold) is violated.

    Carries the violated threshold in ``threshold`` when known.
    """

    def __init__(self, message, threshold=None):
        super().__init__(message)
        self.threshold = threshold


class RepairError(NRangeError, RuntimeError):
    """A repair search finished without meeting its distance target.

    ``best`` holds the best candidate found (or None); ``best_distance``
    its distance, so callers can report near-misses honestly.
    """

    def __init__(self, message, best=None, best_distance=None):
        super().__init__(message)
        self.best = best
        self.best_distance = best_distance


class SpecError(NRangeError, ValueError):
    """A problem in a spec file. ``line`` is the 1-based offending line."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
