"""Preset measurement fixtures"""

import typing as t

import pytest

from lspair.experiments import load_figure_points
from lspair.metrics import LossEstimate, loss_probability
from lspair.policy import PolicyKind
from lspair.presets import get_preset
from lspair.runner import Runner

Estimates = t.Dict[t.Tuple[t.Any, PolicyKind], LossEstimate]
MeasureType = t.Callable[..., Estimates]


@pytest.fixture
def measure() -> t.Generator[MeasureType, None, None]:
    """Shortened preset runs: loss per (sweep value, policy), on the preset master seed"""
    with Runner(jobs=1) as runner:

        def _measure(
            figure_id: str,
            values: t.Sequence[t.Any],
            policies: t.Sequence[PolicyKind],
            total_requests: int = 20_000,
            replications: int = 5,
        ) -> Estimates:
            points = load_figure_points(
                get_preset(figure_id),
                overrides=[f"run.total_requests={total_requests}"],
                values=values,
            )
            return {
                (value, policy): loss_probability(
                    runner.run_sync(
                        scenario_file.to_scenario(policy_kind=policy),
                        replications=replications,
                        master_seed=scenario_file.run.master_seed,
                    )
                )
                for value, scenario_file in points
                for policy in policies
            }

        yield _measure
