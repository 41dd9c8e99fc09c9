"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """Input has the wrong shape, dimension, or contains non-finite values."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap."""


class SequencingError(ValueError):
    """A recurrence step was requested before its prerequisites exist."""


class AdmissibilityError(ValueError):
    """An epsilon lies outside the window where a formula is defined."""


class AmbiguityError(ValueError):
    """A fitting problem has no unique solution (degenerate data)."""


class GenerationError(RuntimeError):
    """Synthetic data could not be produced under the requested constraints."""
