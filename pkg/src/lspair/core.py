"""
Bidirectional LSP-pair capacity model.
Every policy and the engine operate on the immutable objects declared here.
"""

from __future__ import annotations

import collections
import math
import typing as t
from dataclasses import dataclass

from .exceptions import ContractViolation, ScenarioError

__all__ = [
    "EPSILON",
    "UNCONSTRAINED",
    "LspPairSpec",
    "Topology",
    "LspPairState",
    "Request",
    "Allocation",
    "available",
    "fits",
    "allocate",
    "release",
    "check_state",
    "audit",
]

# Absolute tolerance for bandwidth comparisons
EPSILON: float = 1e-9
UNCONSTRAINED: float = math.inf


@dataclass(frozen=True)
class LspPairSpec:
    """Static capacity and delay of one bidirectional pair"""

    pair_id: int
    max_up: float
    max_down: float
    delay: float = 0.0

    def __post_init__(self) -> None:
        for field_name in ("max_up", "max_down", "delay"):
            value: float = getattr(self, field_name)
            if not value >= 0 or math.isinf(value):
                raise ScenarioError(f"Pair {self.pair_id}: {field_name} must be a finite non-negative number")

    @property
    def idle(self) -> bool:
        """Pair has no capacity at all"""
        return self.max_up == 0 and self.max_down == 0

    def scaled(self, alpha: float) -> LspPairSpec:
        """Same pair with both maxima multiplied by alpha"""
        return LspPairSpec(
            pair_id=self.pair_id,
            max_up=self.max_up * alpha,
            max_down=self.max_down * alpha,
            delay=self.delay,
        )

    def swapped(self) -> LspPairSpec:
        """Mirror upward and downward directions"""
        return LspPairSpec(pair_id=self.pair_id, max_up=self.max_down, max_down=self.max_up, delay=self.delay)


@dataclass(frozen=True)
class Topology:
    """Ordered pairs between two edge nodes. The order is the round-robin scan order."""

    pairs: t.Tuple[LspPairSpec, ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise ScenarioError("Topology must contain at least one LSP pair")
        pair_ids: t.List[int] = [pair.pair_id for pair in self.pairs]
        if duplicates := sorted(k for k, v in collections.Counter(pair_ids).items() if v > 1):
            raise ScenarioError(f"Duplicate pair ids: {duplicates}")
        if pair_ids != list(range(len(self.pairs))):
            raise ScenarioError(f"Pair ids must be 0-based positions in the topology (got {pair_ids})")

    @classmethod
    def build(cls, capacities: t.Iterable[t.Tuple[float, ...]]) -> Topology:
        """Make a topology from (max_up, max_down[, delay]) tuples"""
        return cls(
            pairs=tuple(
                LspPairSpec(num, *(float(value) for value in capacity)) for num, capacity in enumerate(capacities)
            )
        )

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> t.Iterator[LspPairSpec]:
        return iter(self.pairs)

    def __getitem__(self, pair_id: int) -> LspPairSpec:
        return self.pairs[pair_id]

    @property
    def total_up(self) -> float:
        """Aggregate upward capacity"""
        return math.fsum(pair.max_up for pair in self.pairs)

    @property
    def total_down(self) -> float:
        """Aggregate downward capacity"""
        return math.fsum(pair.max_down for pair in self.pairs)

    def scaled(self, alpha: float) -> Topology:
        """Uniformly scaled capacities"""
        return Topology(pairs=tuple(pair.scaled(alpha) for pair in self.pairs))

    def swapped(self) -> Topology:
        """Up/down mirror image"""
        return Topology(pairs=tuple(pair.swapped() for pair in self.pairs))

    def empty_states(self) -> t.List[LspPairState]:
        """Fresh runtime states, one per pair"""
        return [LspPairState(pair_id=pair.pair_id) for pair in self.pairs]


@dataclass(frozen=True)
class LspPairState:
    """Bandwidth currently held on a pair"""

    pair_id: int
    used_up: float = 0.0
    used_down: float = 0.0


@dataclass(frozen=True)
class Request:
    """One service demand"""

    req_id: int
    need_up: float
    need_down: float
    permitted_delay: float = UNCONSTRAINED
    arrival_time: float = 0.0

    def __post_init__(self) -> None:
        if not (self.need_up >= 0 and self.need_down >= 0):
            raise ContractViolation(f"Request {self.req_id}: negative bandwidth demand")
        if not self.permitted_delay > 0:
            raise ContractViolation(f"Request {self.req_id}: permitted delay must be positive")

    @property
    def constrained(self) -> bool:
        """Request declares a finite delay bound"""
        return not math.isinf(self.permitted_delay)

    def swapped(self) -> Request:
        """Up/down mirror image"""
        return Request(
            req_id=self.req_id,
            need_up=self.need_down,
            need_down=self.need_up,
            permitted_delay=self.permitted_delay,
            arrival_time=self.arrival_time,
        )


@dataclass(frozen=True)
class Allocation:
    """Bandwidth granted to one accepted request"""

    alloc_id: int
    req_id: int
    pair_id: int
    amount_up: float
    amount_down: float
    release_time: float


def _ensure_same_pair(state: LspPairState, spec: LspPairSpec) -> None:
    if state.pair_id != spec.pair_id:
        raise ContractViolation(f"State of pair {state.pair_id} checked against spec of pair {spec.pair_id}")


def available(state: LspPairState, spec: LspPairSpec) -> t.Tuple[float, float]:
    """Spare (upward, downward) bandwidth"""
    _ensure_same_pair(state, spec)
    return spec.max_up - state.used_up, spec.max_down - state.used_down


def fits(state: LspPairState, spec: LspPairSpec, request: Request) -> bool:
    """Check both directions at once"""
    avail_up, avail_down = available(state, spec)
    return avail_up + EPSILON >= request.need_up and avail_down + EPSILON >= request.need_down


def check_state(state: LspPairState, spec: LspPairSpec) -> None:
    """Raise if the state leaves [0, max] in any direction"""
    _ensure_same_pair(state, spec)
    if not -EPSILON <= state.used_up <= spec.max_up + EPSILON:
        raise ContractViolation(f"Pair {spec.pair_id}: upward usage {state.used_up!r} outside [0, {spec.max_up!r}]")
    if not -EPSILON <= state.used_down <= spec.max_down + EPSILON:
        raise ContractViolation(
            f"Pair {spec.pair_id}: downward usage {state.used_down!r} outside [0, {spec.max_down!r}]"
        )


def allocate(
    state: LspPairState,
    spec: LspPairSpec,
    request: Request,
    now: float,
    holding_time: float,
    alloc_id: t.Optional[int] = None,
) -> t.Tuple[LspPairState, Allocation]:
    """Take both bandwidths of the request from the pair"""
    if not fits(state, spec, request):
        raise ContractViolation(f"Request {request.req_id} does not fit pair {spec.pair_id}")
    new_state = LspPairState(
        pair_id=state.pair_id,
        used_up=min(state.used_up + request.need_up, spec.max_up),
        used_down=min(state.used_down + request.need_down, spec.max_down),
    )
    allocation = Allocation(
        alloc_id=request.req_id if alloc_id is None else alloc_id,
        req_id=request.req_id,
        pair_id=spec.pair_id,
        amount_up=request.need_up,
        amount_down=request.need_down,
        release_time=now + holding_time,
    )
    return new_state, allocation


def release(state: LspPairState, allocation: Allocation) -> LspPairState:
    """Give the allocated bandwidth back to the pair"""
    if state.pair_id != allocation.pair_id:
        raise ContractViolation(f"Allocation {allocation.alloc_id} belongs to pair {allocation.pair_id}")
    used_up: float = state.used_up - allocation.amount_up
    used_down: float = state.used_down - allocation.amount_down
    if used_up < -EPSILON or used_down < -EPSILON:
        raise ContractViolation(f"Releasing allocation {allocation.alloc_id} drives pair {state.pair_id} negative")
    return LspPairState(pair_id=state.pair_id, used_up=max(used_up, 0.0), used_down=max(used_down, 0.0))


def audit(
    topology: Topology,
    states: t.Sequence[LspPairState],
    live_allocations: t.Iterable[Allocation],
    tolerance: float = 1e-6,
) -> None:
    """Full-state check: bounds hold and usage equals the sum of live allocations"""
    sums_up: t.Dict[int, t.List[float]] = collections.defaultdict(list)
    sums_down: t.Dict[int, t.List[float]] = collections.defaultdict(list)
    for allocation in live_allocations:
        sums_up[allocation.pair_id].append(allocation.amount_up)
        sums_down[allocation.pair_id].append(allocation.amount_down)
    for spec, state in zip(topology, states):
        check_state(state, spec)
        expected_up: float = math.fsum(sums_up[spec.pair_id])
        expected_down: float = math.fsum(sums_down[spec.pair_id])
        if not math.isclose(state.used_up, expected_up, abs_tol=tolerance) or not math.isclose(
            state.used_down, expected_down, abs_tol=tolerance
        ):
            raise ContractViolation(
                f"Pair {spec.pair_id}: usage ({state.used_up!r}, {state.used_down!r}) "
                f"differs from live allocations ({expected_up!r}, {expected_down!r})"
            )
