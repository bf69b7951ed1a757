"""Exception hierarchy shared by every module."""


class BlendedInferenceError(ValueError):
    """Base class for all errors raised by this package."""


class ValidationError(BlendedInferenceError):
    """A distribution or constraint set violates its invariants."""


class StructuralError(BlendedInferenceError):
    """Operands are defined over different atom lists."""


class DomainError(BlendedInferenceError):
    """An argument lies outside the domain of the operation."""


class InfeasibleError(BlendedInferenceError):
    """A constraint set has no member with finite divergence to the benchmark."""

    def __init__(self, message, atoms=()):
        super().__init__(message)
        self.atoms = tuple(atoms)
