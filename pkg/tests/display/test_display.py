# pylint: disable=unused-argument,redefined-outer-name,missing-function-docstring
"""Display tests"""

import typing as t
from pathlib import Path

import pytest

from lspair.config.environment import Env
from lspair.display.base import BaseDisplay
from lspair.display.default import DefaultDisplay
from lspair.experiments import run_scenario
from lspair.metrics import LossEstimate
from lspair.policy import PolicyKind
from lspair.results import ReductionRow, ResultRow, ResultTable
from lspair.runner import Runner

SCENARIO_TEXT: str = """---
topology:
  - {max_up: 20, max_down: 20}
  - {max_up: 20, max_down: 20}
policy:
  kind: method-a
traffic:
  pattern: [{mean_up: 4, mean_down: 1}, {mean_up: 1, mean_down: 4}]
  mean_interarrival: 0.5
  holding_time: 6
run:
  total_requests: 1500
  replications: 2
"""


class BaseBadDisplay(BaseDisplay):
    """Bad displays base"""

    FAILURES: t.Set[str]
    METHOD_FAILURES_TO_CHECK: t.Set[str] = {
        "on_runner_start",
        "on_runner_finish",
        "on_point_start",
        "on_point_finish",
    }

    @classmethod
    def make_failure(cls, name: str) -> t.Callable:
        def failure(self, *args, **kwargs) -> t.Any:
            cls.FAILURES.add(name)
            raise RuntimeError

        return failure


@pytest.fixture
def bad_display() -> BaseBadDisplay:
    class BadDisplay(BaseBadDisplay):
        """A display incapable of doing anything"""

        FAILURES: t.Set[str] = set()

    for method_name in BaseBadDisplay.METHOD_FAILURES_TO_CHECK:
        setattr(BadDisplay, method_name, BadDisplay.make_failure(method_name))

    return BadDisplay(title="bad")


@pytest.fixture
def scenario_path(tmp_path: Path) -> Path:
    path: Path = tmp_path / "scenario.yaml"
    path.write_text(SCENARIO_TEXT, encoding="utf-8")
    return path


@pytest.fixture
def display_collector(monkeypatch: pytest.MonkeyPatch) -> t.List[str]:
    """Creates display events list instead of putting them to stdout"""
    results: t.List[str] = []

    # pylint: disable=unused-argument
    def display(self, message: str) -> None:
        results.append(message)

    monkeypatch.setattr(Env, "LSPAIR_FORCE_COLOR", False)
    monkeypatch.setattr(DefaultDisplay, "display", display)
    return results


def test_bad_display(bad_display: BaseBadDisplay, scenario_path: Path):
    """Check that a bad display does not interrupt execution"""
    table: ResultTable = run_scenario(scenario_path, runner=Runner(jobs=1), display=bad_display)
    assert len(table) == 1
    assert bad_display.FAILURES == BaseBadDisplay.METHOD_FAILURES_TO_CHECK


def test_default_display_loss(display_collector: t.List[str], scenario_path: Path):
    """Point lines and a summary"""
    run_scenario(scenario_path, runner=Runner(jobs=1), display=DefaultDisplay("scenario.yaml"))
    assert display_collector[0] == "[scenario.yaml]  | started"
    assert display_collector[1] == "[scenario.yaml]  | single point method-a"
    assert display_collector[2].startswith("[scenario.yaml] +| method-a loss=")
    assert display_collector[3] == "=" * 40
    assert display_collector[4].startswith("method-a: max loss ")
    assert len(display_collector) == 5


def test_default_display_reduction(display_collector: t.List[str]):
    """Reduction search steps and the best reduction"""
    display = DefaultDisplay("fig4")
    display.on_reduction_step(0.75, LossEstimate(0.0123, None, 1, 1000, 12, 3))
    display.on_point_finish(
        ReductionRow(
            sweep_param="mean_interarrival",
            sweep_value=0.5,
            reference_policy=PolicyKind.METHOD_A,
            test_policy=PolicyKind.METHOD_B,
            target_loss=0.01,
            alpha_star=0.875,
            z_percent=12.5,
            iterations=3,
            replications=10,
        )
    )
    display.on_runner_finish()
    assert display_collector == [
        "[fig4] ~| alpha=0.7500 loss=1.230e-02",
        "[fig4] +| method-b vs method-a: Z=12.50%",
        "=" * 40,
        "max Z: 12.50% at mean_interarrival=0.5",
    ]


def test_default_display_empty(display_collector: t.List[str]):
    """No rows, no summary lines"""
    display = DefaultDisplay("empty")
    display.on_runner_finish()
    assert display_collector == ["=" * 40, "no results"]


def test_base_display_output(capsys: pytest.CaptureFixture):
    """Stream choice"""
    BaseDisplay("x").display("to stdout\n")
    BaseDisplay("x", use_stderr=True).display("to stderr")
    captured = capsys.readouterr()
    assert captured.out == "to stdout\n"
    assert captured.err == "to stderr\n"


def test_default_display_row(display_collector: t.List[str]):
    """Missing confidence interval is shown as n/a"""
    DefaultDisplay("t").on_point_finish(
        ResultRow(
            sweep_param="x",
            sweep_value=1.0,
            policy=PolicyKind.METHOD_B,
            mean_loss=0.0125,
            ci_halfwidth=None,
            deadlock_fraction=0.5,
            offered=100,
            replications=1,
        )
    )
    assert display_collector == ["[t] +| method-b loss=1.250e-02 ±n/a deadlocks=50.0%"]
