"""
Exceptions raised by wiresafe.
"""

__all__ = [
    "BudgetExceededError",
    "CyclicNetworkError",
    "DimensionMismatchError",
    "FieldMismatchError",
    "InfeasibleSinkError",
    "SingularMatrixError",
    "WiresafeError",
]


class WiresafeError(Exception):
    """Base class for all wiresafe errors."""


class FieldMismatchError(WiresafeError, ValueError):
    """Operands belong to different fields."""


class DimensionMismatchError(WiresafeError, ValueError):
    """Operands have incompatible shapes."""


class SingularMatrixError(WiresafeError, ValueError):
    """A matrix that must be invertible (or a system that must be consistent) is not."""


class CyclicNetworkError(WiresafeError, ValueError):
    """The network graph contains a directed cycle."""


class InfeasibleSinkError(WiresafeError):
    """A sink's transfer matrix does not have full rank, so it cannot recover the source packets."""


class BudgetExceededError(WiresafeError, RuntimeError):
    """An exhaustive enumeration would exceed the configured budget.

    Args:
        what: Description of the enumeration that was refused.
        required: Number of objects the enumeration needs.
        limit: The budget in force.
    """

    def __init__(self, what: str, required: int, limit: int) -> None:
        self.what = what
        self.required = required
        self.limit = limit
        super().__init__(f"{what} needs a budget of {required}, but the limit is {limit}")
