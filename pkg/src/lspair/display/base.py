"""Runner output processor base"""

from __future__ import annotations

import sys
import typing as t

if t.TYPE_CHECKING:  # pragma: no cover
    from ..metrics import LossEstimate
    from ..policy import PolicyKind
    from ..results import ReductionRow, ResultRow

__all__ = [
    "BaseDisplay",
]


class BaseDisplay:
    """Base class for possible customizations"""

    def __init__(self, title: str, use_stderr: bool = False) -> None:
        self._title: str = title
        self._use_stderr: bool = use_stderr

    def display(self, message: str) -> None:
        """Send text to the end user"""
        print(message.rstrip("\n"), file=sys.stderr if self._use_stderr else sys.stdout)

    def on_runner_start(self) -> None:
        """Experiment start callback"""

    def on_runner_finish(self) -> None:
        """Experiment finish callback"""

    def on_point_start(self, sweep_param: str, sweep_value: t.Any, policy: t.Optional[PolicyKind]) -> None:
        """Sweep point start callback"""

    def on_point_finish(self, row: t.Union[ResultRow, ReductionRow]) -> None:
        """Sweep point finish callback"""

    def on_reduction_step(self, alpha: float, estimate: LossEstimate) -> None:
        """Equal-loss search step callback"""
