"""
Context managers for temporary budget overrides.
"""

from contextlib import ContextDecorator
from typing import Any, Literal, Optional

from ._config import Budget, _set_budget, configure_budget, get_budget

__all__ = ["override_budget"]


class override_budget(ContextDecorator):
    """
    Context manager (and decorator) to temporarily change the default budget.

    Args:
        enumeration: Temporary enumeration cap, or None to keep the current one.
        joint: Temporary joint-distribution cap, or None to keep the current one.
        wiretap_sets: Temporary wiretap-set cap, or None to keep the current one.
    """

    def __init__(
        self,
        enumeration: Optional[int] = None,
        joint: Optional[int] = None,
        wiretap_sets: Optional[int] = None,
    ) -> None:
        self.enumeration = enumeration
        self.joint = joint
        self.wiretap_sets = wiretap_sets
        self._previous: Optional[Budget] = None

    def __enter__(self) -> "override_budget":
        self._previous = get_budget()
        configure_budget(self.enumeration, self.joint, self.wiretap_sets)
        return self

    def __exit__(self, *exc: Any) -> Literal[False]:
        """Restore the previous budget.

        Returns False so exceptions propagate normally.
        """
        if self._previous is not None:
            _set_budget(self._previous)
        return False
