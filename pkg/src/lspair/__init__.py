"""Bidirectional LSP pair selection simulator"""

from .config.constants import C
from .core import LspPairSpec, LspPairState, Request, Topology
from .display.default import DefaultDisplay
from .engine import RunResult, Scenario, SeedPair, Simulation, run
from .exceptions import BaseError
from .loader.default import DefaultYAMLScenarioLoader
from .metrics import LossEstimate, ReductionEstimate, equal_loss_reduction, loss_probability, max_reduction
from .policy import (
    DelayAwarePolicy,
    KeyDirectionPolicy,
    PolicyKind,
    RoundRobinPolicy,
    make_policy,
)
from .results import ReductionTable, ResultTable
from .runner import Runner
from .traffic import ArrivalProcess, DelayClassMix, DemandPattern
from .version import __version__
