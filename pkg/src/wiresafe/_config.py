"""
Exhaustion budget configuration.
"""

import logging
import os
from dataclasses import dataclass, replace
from typing import Optional

from ._constants import (
    BUDGET_ENV_VAR_NAME,
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_JOINT_BUDGET,
    DEFAULT_WIRETAP_SET_BUDGET,
)
from .exceptions import BudgetExceededError

logger = logging.getLogger(__name__)

__all__ = ["Budget", "configure_budget", "get_budget", "require_budget", "reset_budget"]


@dataclass(frozen=True)
class Budget:
    """Caps on exhaustive enumerations.

    Args:
        enumeration: Objects enumerated by a single verification call (codewords, full-rank matrices, ...).
        joint: (message, randomness) pairs tabulated per wiretap set.
        wiretap_sets: Wiretap sets visited by a single network audit.
    """

    enumeration: int = DEFAULT_ENUMERATION_BUDGET
    joint: int = DEFAULT_JOINT_BUDGET
    wiretap_sets: int = DEFAULT_WIRETAP_SET_BUDGET

    def __post_init__(self) -> None:
        for name in ("enumeration", "joint", "wiretap_sets"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget field '{name}' must be positive")


_budget: Optional[Budget] = None
"""Global variable for the process-wide default budget."""


def _read_env_budget(var_name: Optional[str] = None) -> Optional[int]:
    """Read the enumeration budget override from the environment.

    Args:
        var_name: Name of the environment variable. Defaults to None to use `WIRESAFE_BUDGET`.

    Returns:
        The parsed budget, or None when the variable is unset, empty or invalid.
    """
    name = var_name or BUDGET_ENV_VAR_NAME
    value = os.environ.get(name, "").strip()
    if not value:
        return None

    try:
        parsed = int(value, 0)
    except ValueError:
        parsed = 0
    if parsed > 0:
        return parsed

    logger.warning(
        f"Invalid value '{value}' for environment variable {name}. "
        f"Expected a positive integer. Defaulting to {DEFAULT_ENUMERATION_BUDGET}."
    )
    return None


def _get_default_budget() -> Budget:
    """Get or create the default budget.

    Returns:
        The process-wide default budget.
    """
    global _budget
    if _budget is None:
        enumeration = _read_env_budget()
        _budget = Budget() if enumeration is None else Budget(enumeration=enumeration)
    return _budget


def get_budget() -> Budget:
    """Get the budget currently in force.

    Returns:
        The process-wide default budget.
    """
    return _get_default_budget()


def _set_budget(budget: Optional[Budget]) -> None:
    global _budget
    _budget = budget


def configure_budget(
    enumeration: Optional[int] = None,
    joint: Optional[int] = None,
    wiretap_sets: Optional[int] = None,
) -> Budget:
    """Replace fields of the default budget.

    Fields left as None keep their current value.

    Returns:
        The new default budget.
    """
    current = _get_default_budget()
    updated = replace(
        current,
        enumeration=current.enumeration if enumeration is None else enumeration,
        joint=current.joint if joint is None else joint,
        wiretap_sets=current.wiretap_sets if wiretap_sets is None else wiretap_sets,
    )
    _set_budget(updated)
    return updated


def reset_budget() -> None:
    """Drop the configured budget so the next lookup re-reads the environment."""
    _set_budget(None)


def require_budget(what: str, required: int, limit: int) -> None:
    """Refuse an enumeration that would exceed its budget.

    Raises:
        BudgetExceededError: If `required` is larger than `limit`.
    """
    if required > limit:
        raise BudgetExceededError(what, required, limit)
