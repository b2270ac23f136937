"""Request stream: cyclic mean pattern, Gaussian sizes, exponential inter-arrivals and delay classes"""

from __future__ import annotations

import enum
import math
import typing as t
from dataclasses import dataclass

import numpy as np

from .core import Request, UNCONSTRAINED
from .exceptions import ScenarioError

__all__ = [
    "DEFAULT_SIGMA_RATIO",
    "MAX_REDRAWS",
    "StreamTag",
    "make_stream",
    "DemandEntry",
    "DemandPattern",
    "ArrivalProcess",
    "DelayClassMix",
    "draw_size",
    "generate_request",
    "next_arrival",
    "TrafficSource",
]

DEFAULT_SIGMA_RATIO: float = 0.1
MAX_REDRAWS: int = 100


class StreamTag(enum.IntEnum):
    """Independent random streams of one run"""

    SIZES = 0
    ARRIVALS = 1
    DELAY_CLASSES = 2
    POLICY = 3


def make_stream(seed: int, tag: StreamTag) -> np.random.Generator:
    """Derive a dedicated generator from a run seed"""
    return np.random.default_rng(np.random.SeedSequence([seed, int(tag)]))


@dataclass(frozen=True)
class DemandEntry:
    """Mean upward and downward demand of one pattern position"""

    mean_up: float
    mean_down: float


@dataclass(frozen=True)
class DemandPattern:
    """Cyclic sequence of demand means. Standard deviation is sigma_ratio times the mean."""

    entries: t.Tuple[DemandEntry, ...]
    sigma_ratio: float = DEFAULT_SIGMA_RATIO

    def __post_init__(self) -> None:
        if not self.entries:
            raise ScenarioError("Demand pattern must contain at least one entry")
        for num, entry in enumerate(self.entries):
            if not (entry.mean_up >= 0 and entry.mean_down >= 0) or math.isinf(entry.mean_up + entry.mean_down):
                raise ScenarioError(f"Demand pattern entry #{num + 1}: means must be finite and non-negative")
        if not self.sigma_ratio >= 0 or math.isinf(self.sigma_ratio):
            raise ScenarioError(f"Invalid sigma ratio: {self.sigma_ratio!r}")

    @classmethod
    def cyclic(cls, *means: t.Tuple[float, float], sigma_ratio: float = DEFAULT_SIGMA_RATIO) -> DemandPattern:
        """Shortcut: DemandPattern.cyclic((4, 1), (1, 4))"""
        return cls(
            entries=tuple(DemandEntry(float(up), float(down)) for up, down in means),
            sigma_ratio=sigma_ratio,
        )

    def __len__(self) -> int:
        return len(self.entries)

    def entry_for(self, index: int) -> DemandEntry:
        """Pattern phase follows request generation order"""
        return self.entries[index % len(self.entries)]

    @property
    def mean_up(self) -> float:
        """Mean of the upward means over one period"""
        return math.fsum(entry.mean_up for entry in self.entries) / len(self.entries)

    @property
    def mean_down(self) -> float:
        """Mean of the downward means over one period"""
        return math.fsum(entry.mean_down for entry in self.entries) / len(self.entries)

    def swapped(self) -> DemandPattern:
        """Up/down mirror image"""
        return DemandPattern(
            entries=tuple(DemandEntry(entry.mean_down, entry.mean_up) for entry in self.entries),
            sigma_ratio=self.sigma_ratio,
        )


@dataclass(frozen=True)
class ArrivalProcess:
    """Poisson arrivals with a constant holding time"""

    mean_interarrival: float
    holding_time: float

    def __post_init__(self) -> None:
        if not self.mean_interarrival > 0 or math.isinf(self.mean_interarrival):
            raise ScenarioError(f"Mean inter-arrival time must be positive (got {self.mean_interarrival!r})")
        if not self.holding_time > 0 or math.isinf(self.holding_time):
            raise ScenarioError(f"Holding time must be positive (got {self.holding_time!r})")

    @property
    def offered_load(self) -> float:
        """Mean number of simultaneously held requests without blocking"""
        return self.holding_time / self.mean_interarrival


@dataclass(frozen=True)
class DelayClassMix:
    """Share S of requests gets the short permitted delay, the rest the long one.
    With bind_all_policies unset, only the delay-aware method honours the bounds.
    """

    short_fraction: float
    short_permitted: float
    long_permitted: float
    bind_all_policies: bool = True

    def __post_init__(self) -> None:
        if not 0 <= self.short_fraction <= 1:
            raise ScenarioError(f"Short delay fraction must be within [0, 1] (got {self.short_fraction!r})")
        if not 0 < self.short_permitted <= self.long_permitted:
            raise ScenarioError(
                f"Permitted delays must satisfy 0 < short <= long "
                f"(got {self.short_permitted!r} and {self.long_permitted!r})"
            )
        if math.isinf(self.long_permitted):
            raise ScenarioError("Permitted delays must be finite")


def draw_size(mean: float, sigma_ratio: float, rng: np.random.Generator) -> float:
    """Gaussian bandwidth around the mean, redrawn while negative and clamped to zero at last"""
    if mean == 0 or sigma_ratio == 0:
        return mean
    sigma: float = sigma_ratio * mean
    for _ in range(MAX_REDRAWS):
        if (value := float(rng.normal(mean, sigma))) >= 0:
            return value
    return 0.0


def generate_request(
    pattern: DemandPattern,
    mix: t.Optional[DelayClassMix],
    index: int,
    clock: float,
    rng: np.random.Generator,
    delay_rng: t.Optional[np.random.Generator] = None,
) -> Request:
    """Build the index-th request of the stream arriving at the given clock"""
    if index < 0:
        raise ValueError(f"Request index must be non-negative (got {index})")
    entry: DemandEntry = pattern.entry_for(index)
    need_up: float = draw_size(entry.mean_up, pattern.sigma_ratio, rng)
    need_down: float = draw_size(entry.mean_down, pattern.sigma_ratio, rng)
    permitted_delay: float = UNCONSTRAINED
    if mix is not None:
        class_rng: np.random.Generator = rng if delay_rng is None else delay_rng
        permitted_delay = mix.short_permitted if class_rng.random() < mix.short_fraction else mix.long_permitted
    return Request(
        req_id=index,
        need_up=need_up,
        need_down=need_down,
        permitted_delay=permitted_delay,
        arrival_time=clock,
    )


def next_arrival(clock: float, process: ArrivalProcess, rng: np.random.Generator) -> float:
    """Clock of the following arrival"""
    if clock < 0:
        raise ValueError(f"Clock must be non-negative (got {clock!r})")
    return clock + float(rng.exponential(process.mean_interarrival))


class TrafficSource:
    """Lazy request stream of one run. Draws are independent of any admission decision."""

    def __init__(
        self,
        pattern: DemandPattern,
        process: ArrivalProcess,
        mix: t.Optional[DelayClassMix],
        seed: int,
    ) -> None:
        self._pattern: DemandPattern = pattern
        self._process: ArrivalProcess = process
        self._mix: t.Optional[DelayClassMix] = mix
        self._sizes: np.random.Generator = make_stream(seed, StreamTag.SIZES)
        self._arrivals: np.random.Generator = make_stream(seed, StreamTag.ARRIVALS)
        self._delay_classes: np.random.Generator = make_stream(seed, StreamTag.DELAY_CLASSES)
        self._index: int = 0
        self._clock: float = 0.0

    def __iter__(self) -> TrafficSource:
        return self

    def __next__(self) -> Request:
        self._clock = next_arrival(self._clock, self._process, self._arrivals)
        request: Request = generate_request(
            pattern=self._pattern,
            mix=self._mix,
            index=self._index,
            clock=self._clock,
            rng=self._sizes,
            delay_rng=self._delay_classes,
        )
        self._index += 1
        return request
