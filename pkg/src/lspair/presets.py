"""
Built-in experiment presets reproducing the published evaluation setups.
Each preset is a plain scenario document plus a sweep: a list of values and
the document assignments that one value implies.
"""

from __future__ import annotations

import copy
import typing as t
from dataclasses import dataclass

from .engine import DEFAULT_TOTAL_REQUESTS
from .loader.paths import NodePath
from .loader.schema import DEFAULT_REPLICATIONS
from .policy import PolicyKind
from .traffic import DEFAULT_SIGMA_RATIO

__all__ = [
    "FIGURE_IDS",
    "PAIR_CAPACITY",
    "TOTAL_CAPACITY",
    "HOLDING_TIME",
    "FigurePreset",
    "get_preset",
    "iter_presets",
]

PAIR_CAPACITY: float = 20.0
TOTAL_CAPACITY: float = 40.0
HOLDING_TIME: float = 6.0
PAIR_DELAYS: t.Tuple[float, float] = (0.1, 0.3)
SHORT_PERMITTED: float = 0.1
LONG_PERMITTED: float = 0.3
ANTI_PHASE: t.Tuple[t.Tuple[float, float], ...] = ((4.0, 1.0), (1.0, 4.0))
DELAY_PATTERN: t.Tuple[t.Tuple[float, float], ...] = ((4.0, 2.0), (2.0, 4.0))
PRESET_MASTER_SEED: int = 1

Assignments = t.List[t.Tuple[NodePath, t.Any]]


def _pair(max_up: float = PAIR_CAPACITY, max_down: float = PAIR_CAPACITY, delay: float = 0.0) -> t.Dict[str, float]:
    return {"max_up": max_up, "max_down": max_down, "delay": delay}


def _pattern(*means: t.Tuple[float, float]) -> t.List[t.Dict[str, float]]:
    return [{"mean_up": up, "mean_down": down} for up, down in means]


def _document(
    kind: PolicyKind,
    pattern: t.List[t.Dict[str, float]],
    mean_interarrival: float,
    topology: t.Optional[t.List[t.Dict[str, float]]] = None,
    delay_mix: t.Optional[t.Dict[str, float]] = None,
) -> t.Dict[str, t.Any]:
    traffic: t.Dict[str, t.Any] = {
        "pattern": pattern,
        "sigma_ratio": DEFAULT_SIGMA_RATIO,
        "mean_interarrival": mean_interarrival,
        "holding_time": HOLDING_TIME,
    }
    if delay_mix is not None:
        traffic["delay_mix"] = delay_mix
    return {
        "topology": [_pair(), _pair()] if topology is None else topology,
        "policy": {"kind": kind.value},
        "traffic": traffic,
        "run": {
            "total_requests": DEFAULT_TOTAL_REQUESTS,
            "replications": DEFAULT_REPLICATIONS,
            "master_seed": PRESET_MASTER_SEED,
        },
    }


@dataclass(frozen=True)
class FigurePreset:
    """One evaluation setup"""

    figure_id: str
    description: str
    sweep_param: str
    values: t.Tuple[t.Any, ...]
    assign: t.Callable[[t.Any], Assignments]
    document: t.Dict[str, t.Any]
    policies: t.Tuple[PolicyKind, ...] = ()
    # (reference, test) of an equal-loss search; loss comparison otherwise
    reduction: t.Optional[t.Tuple[PolicyKind, PolicyKind]] = None
    alpha_bounds: t.Tuple[float, float] = (0.5, 1.0)

    @property
    def is_reduction(self) -> bool:
        """Emits capacity reductions rather than losses"""
        return self.reduction is not None

    def base_document(self) -> t.Dict[str, t.Any]:
        """Independent copy of the scenario document"""
        return copy.deepcopy(self.document)


def _symmetric_sizes(x: float) -> Assignments:
    return [(("traffic", "pattern"), _pattern((x, x)))]


def _anti_phase_sizes(y: float) -> Assignments:
    return [(("traffic", "pattern"), _pattern((y, 1.0), (1.0, y)))]


def _load(mean_interarrival: float) -> Assignments:
    return [(("traffic", "mean_interarrival"), mean_interarrival)]


def _capacity_split(first: float) -> Assignments:
    second: float = TOTAL_CAPACITY - first
    return [(("topology",), [_pair(first, first), _pair(second, second)])]


def _pairs_count(count: int) -> Assignments:
    return [(("topology",), [_pair() for _ in range(int(count))])]


def _short_fraction(share: float) -> Assignments:
    return [(("traffic", "delay_mix", "short_fraction"), share)]


_DELAY_TOPOLOGY: t.List[t.Dict[str, float]] = [_pair(delay=PAIR_DELAYS[0]), _pair(delay=PAIR_DELAYS[1])]
_DELAY_MIX: t.Dict[str, float] = {
    "short_fraction": 0.5,
    "short_permitted": SHORT_PERMITTED,
    "long_permitted": LONG_PERMITTED,
}
_SHORT_FRACTIONS: t.Tuple[float, ...] = tuple(round(0.1 * num, 1) for num in range(11))

_PRESETS: t.Tuple[FigurePreset, ...] = (
    FigurePreset(
        figure_id="fig3-1",
        description="Loss of A and B, symmetric sizes {x, x}",
        sweep_param="x",
        values=(1.0, 2.0, 3.0, 4.0, 5.0, 6.0),
        assign=_symmetric_sizes,
        document=_document(PolicyKind.METHOD_A, _pattern((4.0, 4.0)), mean_interarrival=1.0),
        policies=(PolicyKind.METHOD_A, PolicyKind.METHOD_B),
    ),
    FigurePreset(
        figure_id="fig3-2",
        description="Loss of A and B, anti-phase sizes {y, 1; 1, y}",
        sweep_param="y",
        values=(2.0, 4.0, 6.0, 8.0, 10.0, 12.0),
        assign=_anti_phase_sizes,
        document=_document(PolicyKind.METHOD_A, _pattern((4.0, 1.0), (1.0, 4.0)), mean_interarrival=1.0),
        policies=(PolicyKind.METHOD_A, PolicyKind.METHOD_B),
    ),
    FigurePreset(
        figure_id="fig4",
        description="Capacity reduction of B against A over the offered load",
        sweep_param="mean_interarrival",
        values=(0.8, 1.0, 1.2, 1.4),
        assign=_load,
        document=_document(PolicyKind.METHOD_A, _pattern(*ANTI_PHASE), mean_interarrival=1.0),
        reduction=(PolicyKind.METHOD_A, PolicyKind.METHOD_B),
    ),
    FigurePreset(
        figure_id="fig5",
        description="Loss of A and B over the capacity split U_1 + U_2 = D_1 + D_2 = 40",
        sweep_param="u1",
        values=tuple(float(value) for value in range(0, 45, 5)),
        assign=_capacity_split,
        document=_document(PolicyKind.METHOD_A, _pattern(*ANTI_PHASE), mean_interarrival=1.0),
        policies=(PolicyKind.METHOD_A, PolicyKind.METHOD_B),
    ),
    FigurePreset(
        figure_id="fig6",
        description="Loss of A and B over the number of 20/20 pairs",
        sweep_param="n",
        values=(2, 3, 4, 5),
        assign=_pairs_count,
        document=_document(PolicyKind.METHOD_A, _pattern(*ANTI_PHASE), mean_interarrival=0.6),
        policies=(PolicyKind.METHOD_A, PolicyKind.METHOD_B),
    ),
    FigurePreset(
        figure_id="fig7-1",
        description="Loss of B and C over the short-delay share S",
        sweep_param="S",
        values=_SHORT_FRACTIONS,
        assign=_short_fraction,
        document=_document(
            PolicyKind.METHOD_C,
            _pattern(*DELAY_PATTERN),
            mean_interarrival=2.0,
            topology=_DELAY_TOPOLOGY,
            delay_mix=_DELAY_MIX,
        ),
        policies=(PolicyKind.METHOD_B, PolicyKind.METHOD_C),
    ),
    FigurePreset(
        figure_id="fig7-2",
        description="Capacity reduction of C against B over the short-delay share S",
        sweep_param="S",
        values=_SHORT_FRACTIONS,
        assign=_short_fraction,
        document=_document(
            PolicyKind.METHOD_C,
            _pattern(*DELAY_PATTERN),
            mean_interarrival=2.0,
            topology=_DELAY_TOPOLOGY,
            delay_mix=_DELAY_MIX,
        ),
        reduction=(PolicyKind.METHOD_B, PolicyKind.METHOD_C),
    ),
)

FIGURE_IDS: t.Tuple[str, ...] = tuple(preset.figure_id for preset in _PRESETS)
_PRESETS_MAP: t.Dict[str, FigurePreset] = {preset.figure_id: preset for preset in _PRESETS}


def get_preset(figure_id: str) -> FigurePreset:
    """Preset by id"""
    try:
        return _PRESETS_MAP[figure_id]
    except KeyError:
        raise KeyError(f"Unknown figure: {figure_id!r} (expected one of: {', '.join(FIGURE_IDS)})") from None


def iter_presets() -> t.Iterator[FigurePreset]:
    """All presets in figure order"""
    return iter(_PRESETS)
