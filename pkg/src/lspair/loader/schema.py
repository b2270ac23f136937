"""Scenario file structure"""

from __future__ import annotations

import dataclasses
import typing as t
from dataclasses import dataclass

from ..core import LspPairSpec, Topology
from ..engine import DEFAULT_TOTAL_REQUESTS, Scenario, SeedPair
from ..policy import PolicyKind
from ..traffic import DEFAULT_SIGMA_RATIO, ArrivalProcess, DelayClassMix, DemandEntry, DemandPattern

__all__ = [
    "DEFAULT_REPLICATIONS",
    "PairSection",
    "PolicySection",
    "DemandSection",
    "DelayMixSection",
    "TrafficSection",
    "RunSection",
    "ScenarioFile",
]

DEFAULT_REPLICATIONS: int = 10


@dataclass
class PairSection:
    """One topology entry"""

    max_up: float
    max_down: float
    delay: float = 0.0


@dataclass
class PolicySection:
    """Selection method"""

    kind: PolicyKind


@dataclass
class DemandSection:
    """One demand pattern position"""

    mean_up: float
    mean_down: float


@dataclass
class DelayMixSection:
    """Delay class shares"""

    short_fraction: float
    short_permitted: float
    long_permitted: float
    bind_all_policies: bool = True


@dataclass
class TrafficSection:
    """Request stream"""

    pattern: t.List[DemandSection]
    mean_interarrival: float
    holding_time: float
    sigma_ratio: float = DEFAULT_SIGMA_RATIO
    delay_mix: t.Optional[DelayMixSection] = None


@dataclass
class RunSection:
    """Run length, replications and seeding"""

    total_requests: int = DEFAULT_TOTAL_REQUESTS
    warmup_requests: t.Optional[int] = None
    replications: int = DEFAULT_REPLICATIONS
    master_seed: int = 0
    decision_log: int = 0


@dataclass
class ScenarioFile:
    """Whole scenario document"""

    topology: t.List[PairSection]
    policy: PolicySection
    traffic: TrafficSection
    run: RunSection = dataclasses.field(default_factory=RunSection)

    def build_pair(self, pair_id: int) -> LspPairSpec:
        """Capacity model of one entry"""
        section: PairSection = self.topology[pair_id]
        return LspPairSpec(pair_id=pair_id, max_up=section.max_up, max_down=section.max_down, delay=section.delay)

    def build_topology(self) -> Topology:
        """Capacity model of all entries"""
        return Topology(pairs=tuple(self.build_pair(num) for num in range(len(self.topology))))

    def build_pattern(self) -> DemandPattern:
        """Cyclic demand means"""
        return DemandPattern(
            entries=tuple(DemandEntry(entry.mean_up, entry.mean_down) for entry in self.traffic.pattern),
            sigma_ratio=self.traffic.sigma_ratio,
        )

    def build_arrival(self) -> ArrivalProcess:
        """Arrival and holding times"""
        return ArrivalProcess(
            mean_interarrival=self.traffic.mean_interarrival,
            holding_time=self.traffic.holding_time,
        )

    def build_delay_mix(self) -> t.Optional[DelayClassMix]:
        """Delay classes, if configured"""
        if (mix := self.traffic.delay_mix) is None:
            return None
        return DelayClassMix(
            short_fraction=mix.short_fraction,
            short_permitted=mix.short_permitted,
            long_permitted=mix.long_permitted,
            bind_all_policies=mix.bind_all_policies,
        )

    def to_scenario(self, policy_kind: t.Optional[PolicyKind] = None) -> Scenario:
        """Engine input for the first replication; the runner reseeds the others"""
        return Scenario(
            topology=self.build_topology(),
            policy_kind=self.policy.kind if policy_kind is None else policy_kind,
            pattern=self.build_pattern(),
            arrival=self.build_arrival(),
            delay_mix=self.build_delay_mix(),
            total_requests=self.run.total_requests,
            warmup_requests=self.run.warmup_requests,
            seeds=SeedPair.for_replication(self.run.master_seed, 0),
            decision_log_limit=self.run.decision_log,
        )
