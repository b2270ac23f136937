"""Runner output processor default"""

from __future__ import annotations

import typing as t

from .base import BaseDisplay
from .color import Color
from ..metrics import LossEstimate
from ..policy import PolicyKind
from ..results import ReductionRow, ReductionTable, ResultRow

__all__ = [
    "DefaultDisplay",
]


class DefaultDisplay(BaseDisplay):
    """Prefix-based default display with colors"""

    def __init__(self, title: str, use_stderr: bool = False) -> None:
        super().__init__(title, use_stderr)
        self._rows: t.List[t.Union[ResultRow, ReductionRow]] = []

    def _prefix(self, mark: str = " ") -> str:
        return Color.gray(f"[{self._title}] {mark}| ")

    def on_runner_start(self) -> None:
        self.display(f"{self._prefix()}{Color.bold('started')}")

    def on_point_start(self, sweep_param: str, sweep_value: t.Any, policy: t.Optional[PolicyKind]) -> None:
        point: str = f"{sweep_param}={sweep_value}" if sweep_value != "" else "single point"
        self.display(f"{self._prefix()}{point}" + (f" {policy}" if policy is not None else ""))

    def on_reduction_step(self, alpha: float, estimate: LossEstimate) -> None:
        self.display(f"{self._prefix('~')}{Color.gray(f'alpha={alpha:.4f} loss={estimate.mean_loss:.3e}')}")

    def on_point_finish(self, row: t.Union[ResultRow, ReductionRow]) -> None:
        self._rows.append(row)
        if isinstance(row, ResultRow):
            ci: str = "n/a" if row.ci_halfwidth is None else f"{row.ci_halfwidth:.1e}"
            text: str = (
                f"{row.policy} loss={row.mean_loss:.3e} ±{ci} deadlocks={row.deadlock_fraction:.1%}"
            )
        else:
            text = f"{row.test_policy} vs {row.reference_policy}: Z={row.z_percent:.2f}%"
        self.display(f"{self._prefix('+')}{Color.green(text)}")

    def _display_summary_banner(self) -> None:
        """Show the best reduction, or the worst loss"""
        reductions = ReductionTable(row for row in self._rows if isinstance(row, ReductionRow))
        losses: t.List[ResultRow] = [row for row in self._rows if isinstance(row, ResultRow)]
        self.display(Color.gray("=" * 40))
        if (best := reductions.maximum()) is not None:
            self.display(f"max Z: {Color.bold(f'{best.z_percent:.2f}%')} at {best.sweep_param}={best.sweep_value}")
        for policy in dict.fromkeys(row.policy for row in losses):
            worst: ResultRow = max((row for row in losses if row.policy is policy), key=lambda row: row.mean_loss)
            self.display(f"{policy}: max loss {worst.mean_loss:.3e} at {worst.sweep_param}={worst.sweep_value}")
        if not self._rows:
            self.display(Color.yellow("no results"))

    def on_runner_finish(self) -> None:
        self._display_summary_banner()
