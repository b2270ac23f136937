"""
A policy picks one LSP pair for a request, or rejects it.
Selection rules are pure functions; policy classes bind them to a topology,
a cursor or a tie-breaking random stream for the duration of one run.
"""

from __future__ import annotations

import enum
import typing as t
from dataclasses import dataclass

import classlogging
import numpy as np

from .core import EPSILON, LspPairSpec, LspPairState, Request, Topology, fits
from .exceptions import ScenarioError
from .traffic import StreamTag, make_stream

__all__ = [
    "PolicyKind",
    "RejectReason",
    "Decision",
    "RoundRobinCursor",
    "Direction",
    "KeyDirection",
    "key_direction_minima",
    "key_direction",
    "delay_feasible_pairs",
    "select_method_a",
    "select_method_b",
    "select_method_c",
    "BasePolicy",
    "RoundRobinPolicy",
    "KeyDirectionPolicy",
    "DelayAwarePolicy",
    "KNOWN_POLICIES",
    "make_policy",
]


class PolicyKind(enum.Enum):
    """Selection methods"""

    METHOD_A = "method-a"  # Round-robin
    METHOD_B = "method-b"  # Least spare on the key direction
    METHOD_C = "method-c"  # Delay-aware

    def __repr__(self) -> str:
        return self.value

    __str__ = __repr__


class RejectReason(enum.Enum):
    """Why a request was turned away"""

    NO_FEASIBLE_PAIR = "no-feasible-pair"
    NO_DELAY_FEASIBLE_PAIR = "no-delay-feasible-pair"


@dataclass(frozen=True)
class Decision:
    """Either a selected pair or a rejection reason"""

    pair_id: t.Optional[int] = None
    reason: t.Optional[RejectReason] = None

    def __post_init__(self) -> None:
        if (self.pair_id is None) == (self.reason is None):
            raise ValueError("Decision must carry exactly one of pair_id and reason")

    @classmethod
    def selected(cls, pair_id: int) -> Decision:
        """Accepting decision"""
        return cls(pair_id=pair_id)

    @classmethod
    def rejected(cls, reason: RejectReason) -> Decision:
        """Rejecting decision"""
        return cls(reason=reason)

    @property
    def accepted(self) -> bool:
        """Some pair was selected"""
        return self.pair_id is not None


@dataclass(frozen=True)
class RoundRobinCursor:
    """Position of the first pair tried by the next request"""

    next_index: int = 0

    def advanced(self, pairs_count: int) -> RoundRobinCursor:
        """Move by exactly one position"""
        return RoundRobinCursor(next_index=(self.next_index + 1) % pairs_count)


class Direction(enum.Enum):
    """Transmission direction"""

    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class KeyDirection:
    """Direction with the proportionately largest demand, with the scalars it was derived from"""

    direction: Direction
    x_u: float
    x_d: float
    x_u0: float
    x_d0: float


def key_direction_minima(topology: Topology) -> t.Tuple[float, float]:
    """Smallest per-pair maxima in each direction. Idle pairs can never carry traffic and are skipped."""
    active_pairs: t.List[LspPairSpec] = [pair for pair in topology if not pair.idle] or list(topology)
    x_u0: float = min(pair.max_up for pair in active_pairs)
    x_d0: float = min(pair.max_down for pair in active_pairs)
    if x_u0 <= 0 or x_d0 <= 0:
        raise ScenarioError(
            f"Key direction is undefined: minimal pair capacities are {x_u0!r} up and {x_d0!r} down "
            f"(both must be positive)"
        )
    return x_u0, x_d0


def key_direction(
    topology: Topology,
    request: Request,
    minima: t.Optional[t.Tuple[float, float]] = None,
) -> KeyDirection:
    """Upward iff need_up / X_u0 >= need_down / X_d0"""
    x_u0, x_d0 = key_direction_minima(topology) if minima is None else minima
    x_u: float = request.need_up / x_u0
    x_d: float = request.need_down / x_d0
    return KeyDirection(
        direction=Direction.UP if x_u >= x_d else Direction.DOWN,
        x_u=x_u,
        x_d=x_d,
        x_u0=x_u0,
        x_d0=x_d0,
    )


def delay_feasible_pairs(topology: Topology, request: Request) -> t.List[LspPairSpec]:
    """Pairs whose delay does not exceed the permitted delay"""
    return [pair for pair in topology if pair.delay <= request.permitted_delay]


def _pick_uniformly(candidates: t.Sequence[LspPairSpec], rng: np.random.Generator) -> LspPairSpec:
    if len(candidates) == 1:
        return candidates[0]
    return candidates[int(rng.integers(len(candidates)))]


def _extreme_candidates(
    candidates: t.Sequence[LspPairSpec],
    score: t.Callable[[LspPairSpec], float],
    prefer_max: bool,
) -> t.List[LspPairSpec]:
    scores: t.List[float] = [score(pair) for pair in candidates]
    best: float = max(scores) if prefer_max else min(scores)
    return [pair for pair, value in zip(candidates, scores) if abs(value - best) <= EPSILON]


def select_method_a(
    topology: Topology,
    states: t.Sequence[LspPairState],
    request: Request,
    cursor: RoundRobinCursor,
    respect_delay: bool = False,
) -> t.Tuple[Decision, RoundRobinCursor]:
    """Try pairs cyclically from the cursor; the cursor moves once per request whatever the outcome"""
    pairs_count: int = len(topology)
    if not 0 <= cursor.next_index < pairs_count:
        raise ValueError(f"Cursor {cursor.next_index} out of range for {pairs_count} pairs")
    if respect_delay and not delay_feasible_pairs(topology, request):
        return Decision.rejected(RejectReason.NO_DELAY_FEASIBLE_PAIR), cursor.advanced(pairs_count)
    decision: Decision = Decision.rejected(RejectReason.NO_FEASIBLE_PAIR)
    for offset in range(pairs_count):
        pair_id: int = (cursor.next_index + offset) % pairs_count
        if respect_delay and topology[pair_id].delay > request.permitted_delay:
            continue
        if fits(states[pair_id], topology[pair_id], request):
            decision = Decision.selected(pair_id)
            break
    return decision, cursor.advanced(pairs_count)


def select_method_b(
    topology: Topology,
    states: t.Sequence[LspPairState],
    request: Request,
    rng: np.random.Generator,
    minima: t.Optional[t.Tuple[float, float]] = None,
    respect_delay: bool = False,
) -> Decision:
    """Among fitting pairs, take the one with the least spare bandwidth in the key direction"""
    eligible: t.List[LspPairSpec] = delay_feasible_pairs(topology, request) if respect_delay else list(topology)
    if not eligible:
        return Decision.rejected(RejectReason.NO_DELAY_FEASIBLE_PAIR)
    feasible: t.List[LspPairSpec] = [pair for pair in eligible if fits(states[pair.pair_id], pair, request)]
    if not feasible:
        return Decision.rejected(RejectReason.NO_FEASIBLE_PAIR)
    key: KeyDirection = key_direction(topology, request, minima=minima)
    if key.direction is Direction.UP:
        candidates = _extreme_candidates(
            feasible, lambda pair: pair.max_up - states[pair.pair_id].used_up, prefer_max=False
        )
    else:
        candidates = _extreme_candidates(
            feasible, lambda pair: pair.max_down - states[pair.pair_id].used_down, prefer_max=False
        )
    return Decision.selected(_pick_uniformly(candidates, rng).pair_id)


def select_method_c(
    topology: Topology,
    states: t.Sequence[LspPairState],
    request: Request,
    rng: np.random.Generator,
) -> Decision:
    """Among fitting pairs within the permitted delay, take the one with the largest delay"""
    if not request.constrained:
        raise ScenarioError(f"Request {request.req_id} has no permitted delay, which the delay-aware method requires")
    eligible: t.List[LspPairSpec] = delay_feasible_pairs(topology, request)
    if not eligible:
        return Decision.rejected(RejectReason.NO_DELAY_FEASIBLE_PAIR)
    feasible: t.List[LspPairSpec] = [pair for pair in eligible if fits(states[pair.pair_id], pair, request)]
    if not feasible:
        return Decision.rejected(RejectReason.NO_FEASIBLE_PAIR)
    candidates = _extreme_candidates(feasible, lambda pair: pair.delay, prefer_max=True)
    return Decision.selected(_pick_uniformly(candidates, rng).pair_id)


KNOWN_POLICIES: t.Dict[PolicyKind, t.Type[BasePolicy]] = {}


class BasePolicy(classlogging.LoggerMixin):
    """Policy abstract base"""

    KIND: t.ClassVar[t.Optional[PolicyKind]] = None
    REQUIRES_DELAY_MIX: t.ClassVar[bool] = False

    def __init__(self, topology: Topology, seed: int = 0, respect_delay: bool = False) -> None:
        self._topology: Topology = topology
        self.respect_delay: bool = respect_delay or self.REQUIRES_DELAY_MIX
        self._rng: np.random.Generator = make_stream(seed, StreamTag.POLICY)

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls.KIND is None:
            return
        if KNOWN_POLICIES.setdefault(cls.KIND, cls) is not cls:
            raise NameError(
                f"Policy {cls.KIND!r} already exists. "
                f"Please specify another kind for the {cls.__module__}.{cls.__name__}."
            )

    @classmethod
    def validate(cls, topology: Topology, has_delay_mix: bool) -> None:
        """Raise ScenarioError if the policy can't operate on the given setup"""
        if cls.REQUIRES_DELAY_MIX and not has_delay_mix:
            raise ScenarioError(f"Policy {cls.KIND!r} requires the traffic 'delay_mix' section")

    def decide(self, states: t.Sequence[LspPairState], request: Request) -> Decision:
        """Choose a pair for the request"""
        raise NotImplementedError


class RoundRobinPolicy(BasePolicy):
    """Conventional round-robin selection"""

    KIND = PolicyKind.METHOD_A

    def __init__(self, topology: Topology, seed: int = 0, respect_delay: bool = False) -> None:
        super().__init__(topology, seed, respect_delay)
        self.cursor: RoundRobinCursor = RoundRobinCursor()

    def decide(self, states: t.Sequence[LspPairState], request: Request) -> Decision:
        decision, self.cursor = select_method_a(
            self._topology, states, request, self.cursor, respect_delay=self.respect_delay
        )
        return decision


class KeyDirectionPolicy(BasePolicy):
    """Tightest fit on the key direction"""

    KIND = PolicyKind.METHOD_B

    def __init__(self, topology: Topology, seed: int = 0, respect_delay: bool = False) -> None:
        super().__init__(topology, seed, respect_delay)
        self._minima: t.Tuple[float, float] = key_direction_minima(topology)

    @classmethod
    def validate(cls, topology: Topology, has_delay_mix: bool) -> None:
        super().validate(topology, has_delay_mix)
        key_direction_minima(topology)

    def decide(self, states: t.Sequence[LspPairState], request: Request) -> Decision:
        return select_method_b(
            self._topology, states, request, self._rng, minima=self._minima, respect_delay=self.respect_delay
        )


class DelayAwarePolicy(BasePolicy):
    """Largest admissible delay first"""

    KIND = PolicyKind.METHOD_C
    REQUIRES_DELAY_MIX = True

    def decide(self, states: t.Sequence[LspPairState], request: Request) -> Decision:
        return select_method_c(self._topology, states, request, self._rng)


def make_policy(kind: PolicyKind, topology: Topology, seed: int = 0, respect_delay: bool = False) -> BasePolicy:
    """Instantiate a registered policy"""
    try:
        policy_class: t.Type[BasePolicy] = KNOWN_POLICIES[kind]
    except KeyError:
        allowed: t.List[str] = sorted(k.value for k in KNOWN_POLICIES)
        raise ScenarioError(f"Unknown policy: {kind!r} (allowed: {allowed})") from None
    return policy_class(topology, seed, respect_delay)
