"""
Deterministic discrete-event loop.
Arrivals and departures are processed in time order; departures go first at equal time.
"""

from __future__ import annotations

import collections
import dataclasses
import enum
import heapq
import math
import typing as t
from dataclasses import dataclass

import classlogging

from .core import (
    Allocation,
    LspPairState,
    Request,
    Topology,
    allocate,
    audit,
    available,
    check_state,
    fits,
    release,
)
from .exceptions import ContractViolation, ScenarioError
from .policy import (
    KNOWN_POLICIES,
    BasePolicy,
    Decision,
    PolicyKind,
    RejectReason,
    delay_feasible_pairs,
    make_policy,
)
from .traffic import ArrivalProcess, DelayClassMix, DemandPattern, TrafficSource

__all__ = [
    "DEFAULT_TOTAL_REQUESTS",
    "default_warmup",
    "EventKind",
    "Event",
    "EventQueue",
    "SeedPair",
    "Scenario",
    "PairOccupancy",
    "DecisionRecord",
    "RunResult",
    "classify_deadlock",
    "Simulation",
    "run",
]

DEFAULT_TOTAL_REQUESTS: int = 200_000
DEFAULT_AUDIT_INTERVAL: int = 10_000


def default_warmup(total_requests: int) -> int:
    """max(1000, 10% of the run), falling back to 10% for runs too short to hold 1000 warm-up requests"""
    tenth: int = total_requests // 10
    preferred: int = max(1000, tenth)
    return preferred if preferred < total_requests else tenth


class EventKind(enum.IntEnum):
    """Lower value wins at equal time"""

    DEPARTURE = 0
    ARRIVAL = 1


@dataclass(frozen=True, order=True)
class Event:
    """Scheduled state change"""

    time: float
    kind: EventKind
    seq: int
    # Request for arrivals, allocation id for departures
    payload: t.Union[Request, int] = dataclasses.field(compare=False)


class EventQueue:
    """Heap of events ordered by (time, kind, seq)"""

    def __init__(self) -> None:
        self._heap: t.List[Event] = []
        self._seq: int = 0

    def schedule(self, time: float, kind: EventKind, payload: t.Union[Request, int]) -> Event:
        """Add an event; seq keeps insertion order among equal keys"""
        event = Event(time=time, kind=kind, seq=self._seq, payload=payload)
        self._seq += 1
        heapq.heappush(self._heap, event)
        return event

    def pop(self) -> Event:
        """Remove and return the earliest event"""
        return heapq.heappop(self._heap)

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)


@dataclass(frozen=True)
class SeedPair:
    """Traffic and policy seeds of one run"""

    traffic_seed: int = 0
    policy_seed: int = 0

    @classmethod
    def for_replication(cls, master_seed: int, replication: int) -> SeedPair:
        """Replication i of a master seed uses master_seed + i for both streams"""
        return cls(traffic_seed=master_seed + replication, policy_seed=master_seed + replication)


@dataclass(frozen=True)
class Scenario:
    """Complete description of one simulation run"""

    topology: Topology
    policy_kind: PolicyKind
    pattern: DemandPattern
    arrival: ArrivalProcess
    delay_mix: t.Optional[DelayClassMix] = None
    total_requests: int = DEFAULT_TOTAL_REQUESTS
    warmup_requests: t.Optional[int] = None
    seeds: SeedPair = SeedPair()
    decision_log_limit: int = 0

    @property
    def effective_warmup(self) -> int:
        """Warm-up request count, defaulted if not given"""
        return default_warmup(self.total_requests) if self.warmup_requests is None else self.warmup_requests

    def validate(self) -> None:
        """Raise ScenarioError if the run can't start"""
        if self.total_requests < 1:
            raise ScenarioError(f"total_requests must be positive (got {self.total_requests})")
        if not 0 <= self.effective_warmup < self.total_requests:
            raise ScenarioError(
                f"warmup_requests must be within [0, total_requests) "
                f"(got {self.effective_warmup} for {self.total_requests})"
            )
        if self.seeds.traffic_seed < 0 or self.seeds.policy_seed < 0:
            raise ScenarioError(f"Seeds must be non-negative (got {self.seeds})")
        if self.decision_log_limit < 0:
            raise ScenarioError("decision_log_limit must be non-negative")
        if self.policy_kind not in KNOWN_POLICIES:
            raise ScenarioError(f"Unknown policy: {self.policy_kind!r}")
        KNOWN_POLICIES[self.policy_kind].validate(self.topology, has_delay_mix=self.delay_mix is not None)

    def replace(self, **changes: t.Any) -> Scenario:
        """Copy with some fields changed"""
        return dataclasses.replace(self, **changes)

    def swapped(self) -> Scenario:
        """Mirror every upward quantity with its downward counterpart"""
        return self.replace(topology=self.topology.swapped(), pattern=self.pattern.swapped())


@dataclass(frozen=True)
class PairOccupancy:
    """Usage statistics of one pair over the measured window"""

    pair_id: int
    peak_up: float
    peak_down: float
    mean_up: float
    mean_down: float


@dataclass(frozen=True)
class DecisionRecord:
    """One logged admission decision"""

    req_id: int
    arrival_time: float
    pair_id: t.Optional[int]
    reason: t.Optional[RejectReason]
    deadlock: bool = False


@dataclass(frozen=True)
class RunResult:
    """Counters of one run; warm-up arrivals are excluded"""

    offered: int
    accepted: int
    rejected: int
    deadlock_rejected: int
    delay_rejected: int
    occupancy: t.Tuple[PairOccupancy, ...]
    decisions: t.Tuple[DecisionRecord, ...] = ()
    events_processed: int = 0
    end_time: float = 0.0
    seeds: SeedPair = SeedPair()

    @property
    def loss(self) -> float:
        """Rejected share of offered requests"""
        return self.rejected / self.offered if self.offered else math.nan


def classify_deadlock(
    topology: Topology,
    states: t.Sequence[LspPairState],
    request: Request,
    delay_aware: bool = False,
) -> bool:
    """Aggregate spare bandwidth of the eligible pairs suffices in both directions, yet no single pair fits"""
    eligible = delay_feasible_pairs(topology, request) if delay_aware else list(topology)
    if any(fits(states[pair.pair_id], pair, request) for pair in eligible):
        return False
    spare: t.List[t.Tuple[float, float]] = [available(states[pair.pair_id], pair) for pair in eligible]
    spare_up: float = math.fsum(up for up, _ in spare)
    spare_down: float = math.fsum(down for _, down in spare)
    return spare_up >= request.need_up and spare_down >= request.need_down


class _OccupancyMeter:
    """Time integrals and peaks of per-pair usage"""

    def __init__(self, pairs_count: int) -> None:
        self.start: t.Optional[float] = None
        self.end: t.Optional[float] = None
        self._integral_up: t.List[float] = [0.0] * pairs_count
        self._integral_down: t.List[float] = [0.0] * pairs_count
        self._peak_up: t.List[float] = [0.0] * pairs_count
        self._peak_down: t.List[float] = [0.0] * pairs_count

    def advance(self, states: t.Sequence[LspPairState], elapsed: float) -> None:
        """Accumulate usage over the elapsed interval"""
        if self.start is None or self.end is not None or elapsed <= 0:
            return
        for state in states:
            self._integral_up[state.pair_id] += state.used_up * elapsed
            self._integral_down[state.pair_id] += state.used_down * elapsed

    def observe(self, states: t.Sequence[LspPairState]) -> None:
        """Update peaks"""
        if self.start is None:
            return
        for state in states:
            self._peak_up[state.pair_id] = max(self._peak_up[state.pair_id], state.used_up)
            self._peak_down[state.pair_id] = max(self._peak_down[state.pair_id], state.used_down)

    def report(self, states: t.Sequence[LspPairState], end_time: float) -> t.Tuple[PairOccupancy, ...]:
        """Peaks and time averages per pair"""
        if self.end is not None:
            end_time = self.end
        duration: float = 0.0 if self.start is None else end_time - self.start
        return tuple(
            PairOccupancy(
                pair_id=state.pair_id,
                peak_up=self._peak_up[state.pair_id],
                peak_down=self._peak_down[state.pair_id],
                mean_up=self._integral_up[state.pair_id] / duration if duration > 0 else 0.0,
                mean_down=self._integral_down[state.pair_id] / duration if duration > 0 else 0.0,
            )
            for state in states
        )


class Simulation(classlogging.LoggerMixin):
    """One run of one scenario. Owns its state exclusively."""

    def __init__(self, scenario: Scenario, audit_interval: int = DEFAULT_AUDIT_INTERVAL) -> None:
        scenario.validate()
        if audit_interval < 1:
            raise ScenarioError(f"Audit interval must be positive (got {audit_interval})")
        self.scenario: Scenario = scenario
        self._audit_interval: int = audit_interval
        self._topology: Topology = scenario.topology
        self._delay_aware: bool = scenario.policy_kind is PolicyKind.METHOD_C or (
            scenario.delay_mix is not None and scenario.delay_mix.bind_all_policies
        )
        self._policy: BasePolicy = make_policy(
            scenario.policy_kind,
            scenario.topology,
            scenario.seeds.policy_seed,
            respect_delay=self._delay_aware,
        )
        self.states: t.List[LspPairState] = scenario.topology.empty_states()
        self._live: t.Dict[int, Allocation] = {}
        self._queue: EventQueue = EventQueue()
        self._started: bool = False

    def _check_rejection(self, request: Request, decision: Decision) -> bool:
        """Make sure a bandwidth rejection is genuine and tell whether it is a deadlock"""
        eligible = delay_feasible_pairs(self._topology, request) if self._delay_aware else list(self._topology)
        if any(fits(self.states[pair.pair_id], pair, request) for pair in eligible):
            raise ContractViolation(f"Request {request.req_id} rejected ({decision.reason}) while a pair fits")
        return classify_deadlock(self._topology, self.states, request, delay_aware=self._delay_aware)

    def _admit(self, request: Request, now: float) -> t.Tuple[Decision, bool]:
        decision: Decision = self._policy.decide(self.states, request)
        if decision.pair_id is None:
            deadlock: bool = (
                decision.reason is RejectReason.NO_FEASIBLE_PAIR and self._check_rejection(request, decision)
            )
            self.logger.trace(f"Request {request.req_id} rejected: {decision.reason} (deadlock: {deadlock})")
            return decision, deadlock
        spec = self._topology[decision.pair_id]
        if self._delay_aware and spec.delay > request.permitted_delay:
            raise ContractViolation(f"Request {request.req_id} placed on pair {spec.pair_id} beyond its delay bound")
        new_state, allocation = allocate(
            self.states[spec.pair_id],
            spec,
            request,
            now=now,
            holding_time=self.scenario.arrival.holding_time,
        )
        check_state(new_state, spec)
        self.states[spec.pair_id] = new_state
        self._live[allocation.alloc_id] = allocation
        self._queue.schedule(allocation.release_time, EventKind.DEPARTURE, allocation.alloc_id)
        self.logger.trace(f"Request {request.req_id} placed on pair {spec.pair_id}")
        return decision, False

    def _depart(self, alloc_id: int) -> None:
        if (allocation := self._live.pop(alloc_id, None)) is None:
            raise ContractViolation(f"Allocation {alloc_id} released twice")
        new_state: LspPairState = release(self.states[allocation.pair_id], allocation)
        check_state(new_state, self._topology[allocation.pair_id])
        self.states[allocation.pair_id] = new_state

    # pylint: disable=too-many-locals
    def run(self) -> RunResult:
        """Process every arrival, drain every departure and report"""
        if self._started:
            raise RuntimeError("Simulation has been started more than one time")
        self._started = True
        scenario: Scenario = self.scenario
        warmup: int = scenario.effective_warmup
        self.logger.info(
            f"Running {scenario.policy_kind!r} on {len(self._topology)} pairs: "
            f"{scenario.total_requests} requests, {warmup} warm-up, "
            f"offered load {scenario.arrival.offered_load:g}, seeds {scenario.seeds}"
        )
        source = TrafficSource(scenario.pattern, scenario.arrival, scenario.delay_mix, scenario.seeds.traffic_seed)
        meter = _OccupancyMeter(len(self._topology))
        decisions: t.Deque[DecisionRecord] = collections.deque(maxlen=scenario.decision_log_limit)
        counters: t.Dict[str, int] = collections.Counter()
        arrivals: int = 0
        accepted_total: int = 0
        departures: int = 0
        events_processed: int = 0
        clock: float = 0.0
        first_request: Request = next(source)
        self._queue.schedule(first_request.arrival_time, EventKind.ARRIVAL, first_request)
        while self._queue:
            event: Event = self._queue.pop()
            if event.time < clock:
                raise ContractViolation(f"Event time went backwards: {event.time!r} < {clock!r}")
            meter.advance(self.states, event.time - clock)
            clock = event.time
            if event.kind is EventKind.DEPARTURE:
                self._depart(t.cast(int, event.payload))
                departures += 1
            else:
                request: Request = t.cast(Request, event.payload)
                arrivals += 1
                measured: bool = arrivals > warmup
                if measured and meter.start is None:
                    meter.start = clock
                    meter.observe(self.states)
                decision, deadlock = self._admit(request, clock)
                if decision.accepted:
                    accepted_total += 1
                    meter.observe(self.states)
                if measured:
                    counters["offered"] += 1
                    if decision.accepted:
                        counters["accepted"] += 1
                    else:
                        counters["rejected"] += 1
                        counters["deadlock"] += deadlock
                        counters["delay"] += decision.reason is RejectReason.NO_DELAY_FEASIBLE_PAIR
                    if scenario.decision_log_limit:
                        decisions.append(
                            DecisionRecord(
                                req_id=request.req_id,
                                arrival_time=request.arrival_time,
                                pair_id=decision.pair_id,
                                reason=decision.reason,
                                deadlock=deadlock,
                            )
                        )
                if arrivals < scenario.total_requests:
                    next_request: Request = next(source)
                    self._queue.schedule(next_request.arrival_time, EventKind.ARRIVAL, next_request)
                else:
                    # Time averages cover the arrival period only, not the final drain
                    meter.end = clock
            events_processed += 1
            if events_processed % self._audit_interval == 0:
                self.logger.trace(f"Auditing capacity after {events_processed} events")
                audit(self._topology, self.states, self._live.values())
        audit(self._topology, self.states, self._live.values())
        if self._live or departures != accepted_total:
            raise ContractViolation(f"{accepted_total} requests accepted but {departures} departed")
        result = RunResult(
            offered=counters["offered"],
            accepted=counters["accepted"],
            rejected=counters["rejected"],
            deadlock_rejected=counters["deadlock"],
            delay_rejected=counters["delay"],
            occupancy=meter.report(self.states, clock),
            decisions=tuple(decisions),
            events_processed=events_processed,
            end_time=clock,
            seeds=scenario.seeds,
        )
        self.logger.info(
            f"Finished {scenario.policy_kind!r} run: {result.rejected}/{result.offered} rejected "
            f"({result.deadlock_rejected} deadlocks)"
        )
        return result


def run(scenario: Scenario, audit_interval: int = DEFAULT_AUDIT_INTERVAL) -> RunResult:
    """Simulate one scenario from scratch"""
    return Simulation(scenario, audit_interval=audit_interval).run()
