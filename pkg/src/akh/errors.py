"""Exception types shared across the package."""


class AkhError(Exception):
    """Base class for all package-specific errors."""


class FrameError(AkhError, ValueError):
    """Frame data rejected (non-Hermitian or non-positive metric, bad shape)."""


class DimensionMismatchError(AkhError, ValueError):
    """Operands built over different frames or label sets."""


class ArgumentError(AkhError, ValueError):
    """An argument violates a documented precondition."""


class ConsistencyError(AkhError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class ModelValidationError(AkhError, ValueError):
    """A model definition violates a structural invariant.

    `invariant` names the violated condition so callers and tests can
    distinguish failure modes without parsing prose.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class SolvabilityError(AkhError, ArithmeticError):
    """Right-hand side not in the range of the operator; carries the defect."""

    def __init__(self, message: str, defect: float):
        super().__init__(f"{message} (defect {defect:.3e})")
        self.defect = defect
