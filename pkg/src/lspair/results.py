"""
Delimiter-separated result tables.
Column order is fixed by the row dataclass; floats are written with repr() and read back exactly.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import itertools
import typing as t
from dataclasses import dataclass
from pathlib import Path

from .config.constants import C
from .exceptions import InvalidInputError
from .metrics import LossEstimate, ReductionEstimate
from .policy import PolicyKind

__all__ = [
    "SweepValue",
    "normalize_sweep_value",
    "ResultRow",
    "ReductionRow",
    "ResultTable",
    "ReductionTable",
    "AnyTable",
    "load_table",
]

SweepValue = t.Union[float, str]


def normalize_sweep_value(value: t.Any) -> SweepValue:
    """Numbers become floats, anything else its string form"""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    return "" if value is None else str(value)


def _parse_sweep_value(text: str) -> SweepValue:
    try:
        return float(text)
    except ValueError:
        return text


def _parse_optional_float(text: str) -> t.Optional[float]:
    return None if text == "" else float(text)


def _format(value: t.Any) -> str:
    if value is None:
        return ""
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class ResultRow:
    """Loss of one policy at one sweep point"""

    sweep_param: str
    sweep_value: SweepValue
    policy: PolicyKind
    mean_loss: float
    ci_halfwidth: t.Optional[float]
    deadlock_fraction: float
    offered: int
    replications: int

    PARSERS: t.ClassVar[t.Dict[str, t.Callable[[str], t.Any]]] = {
        "sweep_param": str,
        "sweep_value": _parse_sweep_value,
        "policy": PolicyKind,
        "mean_loss": float,
        "ci_halfwidth": _parse_optional_float,
        "deadlock_fraction": float,
        "offered": int,
        "replications": int,
    }

    @classmethod
    def from_estimate(
        cls,
        sweep_param: str,
        sweep_value: t.Any,
        policy: PolicyKind,
        estimate: LossEstimate,
    ) -> ResultRow:
        """Row of a loss estimate"""
        return cls(
            sweep_param=sweep_param,
            sweep_value=normalize_sweep_value(sweep_value),
            policy=policy,
            mean_loss=estimate.mean_loss,
            ci_halfwidth=estimate.ci_halfwidth,
            deadlock_fraction=estimate.deadlock_fraction,
            offered=estimate.offered,
            replications=estimate.replications,
        )


@dataclass(frozen=True)
class ReductionRow:
    """Equal-loss capacity reduction at one sweep point"""

    sweep_param: str
    sweep_value: SweepValue
    reference_policy: PolicyKind
    test_policy: PolicyKind
    target_loss: float
    alpha_star: float
    z_percent: float
    iterations: int
    replications: int

    PARSERS: t.ClassVar[t.Dict[str, t.Callable[[str], t.Any]]] = {
        "sweep_param": str,
        "sweep_value": _parse_sweep_value,
        "reference_policy": PolicyKind,
        "test_policy": PolicyKind,
        "target_loss": float,
        "alpha_star": float,
        "z_percent": float,
        "iterations": int,
        "replications": int,
    }

    @classmethod
    def from_estimate(cls, sweep_param: str, sweep_value: t.Any, estimate: ReductionEstimate) -> ReductionRow:
        """Row of a reduction estimate"""
        return cls(
            sweep_param=sweep_param,
            sweep_value=normalize_sweep_value(sweep_value),
            reference_policy=estimate.reference_policy,
            test_policy=estimate.test_policy,
            target_loss=estimate.target_loss,
            alpha_star=estimate.alpha_star,
            z_percent=estimate.z_percent,
            iterations=estimate.iterations,
            replications=estimate.replications,
        )


RowT = t.TypeVar("RowT", ResultRow, ReductionRow)


class _BaseTable(t.Generic[RowT]):
    """Ordered rows with a text representation"""

    ROW_CLASS: t.ClassVar[t.Type[t.Any]]

    def __init__(self, rows: t.Iterable[RowT] = ()) -> None:
        self.rows: t.List[RowT] = list(rows)

    @classmethod
    def columns(cls) -> t.Tuple[str, ...]:
        """Header, in order"""
        return tuple(field.name for field in dataclasses.fields(cls.ROW_CLASS))

    def append(self, row: RowT) -> None:
        """Add a row"""
        self.rows.append(row)

    def __iter__(self) -> t.Iterator[RowT]:
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.rows == t.cast(_BaseTable, other).rows

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({len(self.rows)} rows)"

    def dumps(self, delimiter: t.Optional[str] = None) -> str:
        """Render as delimiter-separated text with a header row"""
        buffer = io.StringIO()
        writer = csv.DictWriter(
            buffer,
            fieldnames=self.columns(),
            delimiter=C.OUTPUT_DELIMITER if delimiter is None else delimiter,
            lineterminator="\n",
        )
        writer.writeheader()
        for row in self.rows:
            writer.writerow({name: _format(getattr(row, name)) for name in self.columns()})
        return buffer.getvalue()

    def dump(self, path: Path, delimiter: t.Optional[str] = None) -> None:
        """Write to a file"""
        path.write_text(self.dumps(delimiter), encoding="utf-8")

    @classmethod
    def loads(cls, text: str, delimiter: t.Optional[str] = None, source: str = "<string>") -> _BaseTable:
        """Parse the text form back"""
        reader = csv.DictReader(io.StringIO(text), delimiter=C.OUTPUT_DELIMITER if delimiter is None else delimiter)
        if tuple(reader.fieldnames or ()) != cls.columns():
            raise InvalidInputError(f"{source}: unexpected header {reader.fieldnames!r}, expected {cls.columns()!r}")
        rows: t.List[RowT] = []
        for record in reader:
            try:
                values: t.Dict[str, t.Any] = {name: cls.ROW_CLASS.PARSERS[name](record[name]) for name in cls.columns()}
                rows.append(cls.ROW_CLASS(**values))
            except (TypeError, ValueError) as e:
                raise InvalidInputError(f"{source}:{reader.line_num}: {e}") from e
        return cls(rows)

    @classmethod
    def load(cls, path: Path, delimiter: t.Optional[str] = None) -> _BaseTable:
        """Read from a file"""
        return cls.loads(path.read_text(encoding="utf-8"), delimiter=delimiter, source=str(path))

    def to_gnuplot(self) -> str:
        """Whitespace-separated data blocks, one per series, for the gnuplot 'index' keyword"""
        raise NotImplementedError

    @staticmethod
    def _gnuplot_blocks(
        series: t.Iterable[t.Tuple[str, t.Sequence[str], t.Iterable[t.Sequence[t.Any]]]],
    ) -> str:
        blocks: t.List[str] = []
        for title, header, points in series:
            lines: t.List[str] = [f"# {title}", f"# {' '.join(header)}"]
            lines.extend(" ".join("NaN" if value is None else _format(value) for value in point) for point in points)
            blocks.append("\n".join(lines))
        # Two blank lines separate gnuplot data sets
        return "\n\n\n".join(blocks) + "\n"


class ResultTable(_BaseTable[ResultRow]):
    """One row per (sweep point, policy)"""

    ROW_CLASS = ResultRow

    def policies(self) -> t.List[PolicyKind]:
        """Policies in order of appearance"""
        return list(dict.fromkeys(row.policy for row in self.rows))

    def to_gnuplot(self) -> str:
        return self._gnuplot_blocks(
            (
                str(policy),
                ("sweep_value", "mean_loss", "ci_halfwidth"),
                ((row.sweep_value, row.mean_loss, row.ci_halfwidth) for row in self.rows if row.policy is policy),
            )
            for policy in self.policies()
        )


class ReductionTable(_BaseTable[ReductionRow]):
    """One row per sweep point of an equal-loss search"""

    ROW_CLASS = ReductionRow

    def maximum(self) -> t.Optional[ReductionRow]:
        """Row with the largest reduction"""
        return max(self.rows, key=lambda row: row.z_percent, default=None)

    def to_gnuplot(self) -> str:
        return self._gnuplot_blocks(
            (
                f"{reference} vs {test}",
                ("sweep_value", "z_percent", "alpha_star"),
                ((row.sweep_value, row.z_percent, row.alpha_star) for row in rows),
            )
            for (reference, test), rows in itertools.groupby(
                self.rows, key=lambda row: (row.reference_policy, row.test_policy)
            )
        )


AnyTable = t.Union[ResultTable, ReductionTable]


def load_table(path: Path, delimiter: t.Optional[str] = None) -> AnyTable:
    """Read either table kind, judging by the header"""
    text: str = path.read_text(encoding="utf-8")
    header: str = text.partition("\n")[0]
    table_class: t.Type[AnyTable] = ReductionTable if "alpha_star" in header else ResultTable
    return t.cast(AnyTable, table_class.loads(text, delimiter=delimiter, source=str(path)))
