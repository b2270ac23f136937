"""Discrete-event engine tests"""

import typing as t

import pytest

from lspair.core import LspPairState, Request, Topology
from lspair.engine import (
    EventKind,
    EventQueue,
    RunResult,
    Scenario,
    SeedPair,
    Simulation,
    classify_deadlock,
    default_warmup,
    run,
)
from lspair.exceptions import ScenarioError
from lspair.policy import PolicyKind, RejectReason
from lspair.traffic import ArrivalProcess, DelayClassMix, DemandPattern

TWO_PAIRS: Topology = Topology.build([(20, 20), (20, 20)])
DELAY_PAIRS: Topology = Topology.build([(20, 20, 0.1), (20, 20, 0.3)])
HALF_SHORT: DelayClassMix = DelayClassMix(short_fraction=0.5, short_permitted=0.1, long_permitted=0.3)


def _scenario(
    topology: Topology = TWO_PAIRS,
    policy_kind: PolicyKind = PolicyKind.METHOD_A,
    means: t.Sequence[t.Tuple[float, float]] = ((4, 1), (1, 4)),
    sigma_ratio: float = 0.1,
    mean_interarrival: float = 0.5,
    holding_time: float = 6.0,
    total_requests: int = 3000,
    **kwargs: t.Any,
) -> Scenario:
    return Scenario(
        topology=topology,
        policy_kind=policy_kind,
        pattern=DemandPattern.cyclic(*means, sigma_ratio=sigma_ratio),
        arrival=ArrivalProcess(mean_interarrival=mean_interarrival, holding_time=holding_time),
        total_requests=total_requests,
        **kwargs,
    )


def test_no_contention() -> None:
    """Requests that never overlap are never rejected"""
    result: RunResult = run(
        _scenario(
            topology=Topology.build([(10, 10)]),
            means=[(4, 4)],
            sigma_ratio=0.0,
            mean_interarrival=1e6,
            total_requests=200,
            warmup_requests=0,
        )
    )
    assert (result.offered, result.accepted, result.rejected) == (200, 200, 0)
    assert result.occupancy[0].peak_up == 4.0
    assert result.loss == 0.0


def test_overlapping_requests_on_a_full_pair() -> None:
    """The second of two overlapping requests does not fit"""
    result: RunResult = run(
        _scenario(
            topology=Topology.build([(4, 4)]),
            means=[(4, 4)],
            sigma_ratio=0.0,
            mean_interarrival=1e-6,
            total_requests=2,
            warmup_requests=0,
            decision_log_limit=10,
        )
    )
    assert (result.offered, result.accepted, result.rejected, result.deadlock_rejected) == (2, 1, 1, 0)
    assert [record.pair_id for record in result.decisions] == [0, None]
    assert result.decisions[1].reason is RejectReason.NO_FEASIBLE_PAIR
    # Everything accepted has departed by the end
    assert result.end_time >= 6.0


@pytest.mark.parametrize("policy_kind", list(PolicyKind))
def test_determinism(policy_kind: PolicyKind) -> None:
    """Same seeds, bit-identical results"""
    scenario = _scenario(
        topology=DELAY_PAIRS,
        policy_kind=policy_kind,
        delay_mix=HALF_SHORT,
        seeds=SeedPair(3, 4),
        decision_log_limit=50,
    )
    first, second = run(scenario), run(scenario)
    assert first == second
    assert len(first.decisions) == 50
    assert run(scenario.replace(seeds=SeedPair(5, 4))) != first


@pytest.mark.parametrize("policy_kind", [PolicyKind.METHOD_A, PolicyKind.METHOD_B])
def test_mirror_symmetry(policy_kind: PolicyKind) -> None:
    """Swapping every up and down quantity keeps each decision and mirrors the occupancy"""
    scenario = _scenario(policy_kind=policy_kind, sigma_ratio=0.0, mean_interarrival=0.3, decision_log_limit=500)
    original, mirrored = run(scenario), run(scenario.swapped())
    assert len(original.decisions) == 500
    assert original.decisions == mirrored.decisions
    assert (original.accepted, original.rejected, original.deadlock_rejected) == (
        mirrored.accepted,
        mirrored.rejected,
        mirrored.deadlock_rejected,
    )
    assert [(item.peak_up, item.peak_down, item.mean_up, item.mean_down) for item in original.occupancy] == [
        (item.peak_down, item.peak_up, item.mean_down, item.mean_up) for item in mirrored.occupancy
    ]
    assert original.rejected > 0


def test_counters_exclude_warmup() -> None:
    """Only arrivals after the warm-up are measured"""
    result = run(_scenario(total_requests=1000, warmup_requests=100))
    assert result.offered == 900
    assert result.accepted + result.rejected == result.offered
    assert result.deadlock_rejected <= result.rejected


def test_offered_plus_warmup_equals_total() -> None:
    """Every arrival is processed exactly once"""
    scenario = _scenario(total_requests=1500)
    result = run(scenario)
    assert result.offered == scenario.total_requests - scenario.effective_warmup
    departures: int = result.events_processed - scenario.total_requests
    assert result.accepted <= departures <= result.accepted + scenario.effective_warmup


@pytest.mark.parametrize(
    "total, warmup",
    [(200_000, 20_000), (5000, 1000), (1000, 100), (10, 1)],
)
def test_default_warmup(total: int, warmup: int) -> None:
    """max(1000, 10%), shorter runs fall back to 10%"""
    assert default_warmup(total) == warmup


def test_delay_bound_rejections() -> None:
    """Requests that no pair can serve in time are rejected for delay"""
    scenario = _scenario(
        topology=Topology.build([(20, 20, 0.2), (20, 20, 0.3)]),
        policy_kind=PolicyKind.METHOD_C,
        delay_mix=DelayClassMix(short_fraction=1.0, short_permitted=0.1, long_permitted=0.3),
        total_requests=500,
    )
    result = run(scenario)
    assert result.rejected == result.delay_rejected == result.offered


def test_delay_bounds_bind_every_policy() -> None:
    """Delay classes bind round robin too, unless told otherwise"""
    mix = DelayClassMix(short_fraction=1.0, short_permitted=0.1, long_permitted=0.3)
    scenario = _scenario(
        topology=Topology.build([(20, 20, 0.2), (20, 20, 0.3)]),
        delay_mix=mix,
        total_requests=500,
    )
    assert run(scenario).delay_rejected == run(scenario).offered
    unbound = run(scenario.replace(delay_mix=DelayClassMix(1.0, 0.1, 0.3, bind_all_policies=False)))
    assert unbound.delay_rejected == 0


def test_short_delay_requests_stay_on_fast_pair() -> None:
    """Under the delay-aware method short-delay requests only use the 0.1 s pair"""
    scenario = _scenario(
        topology=DELAY_PAIRS,
        policy_kind=PolicyKind.METHOD_C,
        means=[(4, 2), (2, 4)],
        delay_mix=DelayClassMix(short_fraction=1.0, short_permitted=0.1, long_permitted=0.3),
        total_requests=500,
        warmup_requests=0,
    )
    result = run(scenario)
    assert result.occupancy[1].peak_up == 0.0
    assert result.occupancy[0].peak_up > 0.0


def test_simulation_runs_once() -> None:
    """A simulation owns its state"""
    simulation = Simulation(_scenario(total_requests=100))
    simulation.run()
    with pytest.raises(RuntimeError):
        simulation.run()


@pytest.mark.parametrize(
    "changes, match",
    [
        ({"total_requests": 0}, "total_requests"),
        ({"total_requests": 100, "warmup_requests": 100}, "warmup_requests"),
        ({"seeds": SeedPair(-1, 0)}, "Seeds"),
        ({"decision_log_limit": -1}, "decision_log_limit"),
        ({"policy_kind": PolicyKind.METHOD_C}, "delay_mix"),
    ],
)
def test_invalid_scenario(changes: t.Dict[str, t.Any], match: str) -> None:
    """Validation happens before any event runs"""
    with pytest.raises(ScenarioError, match=match):
        Simulation(_scenario().replace(**changes))


def test_invalid_audit_interval() -> None:
    """Audits need a positive period"""
    with pytest.raises(ScenarioError, match="Audit interval"):
        Simulation(_scenario(), audit_interval=0)


def test_frequent_audits() -> None:
    """Auditing every event changes nothing"""
    scenario = _scenario(total_requests=500)
    assert run(scenario, audit_interval=1) == run(scenario)


def _states(*avail: t.Tuple[float, float]) -> t.List[LspPairState]:
    return [LspPairState(pair_id=num, used_up=20 - up, used_down=20 - down) for num, (up, down) in enumerate(avail)]


@pytest.mark.parametrize(
    "avail, result",
    [
        (((5, 0), (0, 5)), True),
        (((1, 1), (1, 1)), False),
        (((5, 5), (0, 0)), False),
    ],
)
def test_classify_deadlock(avail: t.Tuple[t.Tuple[float, float], ...], result: bool) -> None:
    """Aggregate spare suffices while no single pair fits"""
    request = Request(req_id=0, need_up=3.0, need_down=3.0)
    assert classify_deadlock(TWO_PAIRS, _states(*avail), request) is result


def test_classify_deadlock_delay_aware() -> None:
    """Only pairs within the permitted delay add up"""
    topology = DELAY_PAIRS
    request = Request(req_id=0, need_up=3.0, need_down=3.0, permitted_delay=0.1)
    states = _states((5, 0), (0, 5))
    assert classify_deadlock(topology, states, request)
    assert not classify_deadlock(topology, states, request, delay_aware=True)


def test_event_queue_order() -> None:
    """Departures go first at equal time, insertion order breaks remaining ties"""
    queue = EventQueue()
    request = Request(req_id=0, need_up=1.0, need_down=1.0)
    queue.schedule(1.0, EventKind.ARRIVAL, request)
    queue.schedule(1.0, EventKind.DEPARTURE, 7)
    queue.schedule(0.5, EventKind.ARRIVAL, request)
    queue.schedule(1.0, EventKind.DEPARTURE, 8)
    order = [queue.pop() for _ in range(len(queue))]
    assert [(event.time, event.kind, event.payload) for event in order] == [
        (0.5, EventKind.ARRIVAL, request),
        (1.0, EventKind.DEPARTURE, 7),
        (1.0, EventKind.DEPARTURE, 8),
        (1.0, EventKind.ARRIVAL, request),
    ]
    assert not queue


def test_replication_seeds() -> None:
    """Replication i uses master + i"""
    assert SeedPair.for_replication(100, 3) == SeedPair(traffic_seed=103, policy_seed=103)
