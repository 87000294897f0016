"""Exception taxonomy shared across the package."""


class AdjTorsionError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(AdjTorsionError):
    """Mismatched shapes: variable lists, generator indices, chain ranks."""


class DomainError(AdjTorsionError):
    """Input outside the mathematical domain of an operation."""


class PoleError(AdjTorsionError):
    """Evaluation of a rational function at a pole."""


class SolverError(AdjTorsionError):
    """A numeric solve failed to converge; carries the worst residual seen."""

    def __init__(self, message, worst_residual=None):
        super().__init__(message)
        self.worst_residual = worst_residual


class NonGenericError(AdjTorsionError):
    """Degenerate input that generic-position assumptions exclude."""


class UnsupportedDimensionError(AdjTorsionError):
    """Operation requested in an ambient dimension it does not support."""
