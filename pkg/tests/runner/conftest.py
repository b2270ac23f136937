"""Runner call fixtures"""

import pytest

from lspair.core import Topology
from lspair.engine import Scenario
from lspair.policy import PolicyKind
from lspair.traffic import ArrivalProcess, DemandPattern


@pytest.fixture
def small_scenario() -> Scenario:
    """Loaded two-pair scenario, short enough for many replications"""
    return Scenario(
        topology=Topology.build([(20, 20), (20, 20)]),
        policy_kind=PolicyKind.METHOD_B,
        pattern=DemandPattern.cyclic((4, 1), (1, 4)),
        arrival=ArrivalProcess(mean_interarrival=0.4, holding_time=6.0),
        total_requests=2000,
        warmup_requests=200,
    )
