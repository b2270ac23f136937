"""
Experiment orchestration: single scenarios, parameter sweeps and figure presets.
Everything here runs replications through a Runner and reports through a display.
"""

from __future__ import annotations

import contextlib
import typing as t
from pathlib import Path

import classlogging

from .config.constants import C
from .engine import Scenario
from .loader.default import DefaultYAMLScenarioLoader
from .loader.helpers import get_default_loader_class_for_source
from .loader.schema import ScenarioFile
from .metrics import LossEstimate, LossEvaluator, equal_loss_reduction, loss_probability
from .policy import PolicyKind
from .presets import FigurePreset, get_preset
from .results import ReductionRow, ReductionTable, ResultRow, ResultTable
from .runner import Runner
from .types import DisplayType

__all__ = [
    "NO_SWEEP",
    "Experiment",
    "run_scenario",
    "run_sweep",
    "load_figure_points",
    "run_figure",
]

# sweep_param of a single-point table
NO_SWEEP: str = "none"


class Experiment(classlogging.LoggerMixin):
    """Binds a runner to a display"""

    def __init__(self, runner: Runner, display: DisplayType) -> None:
        self._runner: Runner = runner
        self._display: DisplayType = display

    def _notify(self, callback_name: str, *args: t.Any) -> None:
        """Display failures never interrupt an experiment"""
        try:
            getattr(self._display, callback_name)(*args)
        except Exception as e:
            self.logger.warning(f"Display callback {callback_name!r} failed: {e!r}")

    def __enter__(self) -> Experiment:
        self._notify("on_runner_start")
        return self

    def __exit__(self, *args: t.Any) -> None:
        self._notify("on_runner_finish")

    @staticmethod
    def replications_for(scenario_file: ScenarioFile) -> int:
        """Command line wins over the file"""
        return C.REPLICATIONS or scenario_file.run.replications

    @staticmethod
    def master_seed_for(scenario_file: ScenarioFile) -> int:
        """Command line wins over the file"""
        return scenario_file.run.master_seed if C.MASTER_SEED is None else C.MASTER_SEED

    def measure(
        self,
        scenario_file: ScenarioFile,
        policy: PolicyKind,
        sweep_param: str,
        sweep_value: t.Any,
    ) -> ResultRow:
        """Loss of one policy at one sweep point"""
        self._notify("on_point_start", sweep_param, sweep_value, policy)
        scenario: Scenario = scenario_file.to_scenario(policy_kind=policy)
        estimate: LossEstimate = loss_probability(
            self._runner.run_sync(
                scenario,
                replications=self.replications_for(scenario_file),
                master_seed=self.master_seed_for(scenario_file),
            )
        )
        row: ResultRow = ResultRow.from_estimate(sweep_param, sweep_value, policy, estimate)
        self._notify("on_point_finish", row)
        return row

    def reduce(
        self,
        scenario_file: ScenarioFile,
        reference_policy: PolicyKind,
        test_policy: PolicyKind,
        sweep_param: str,
        sweep_value: t.Any,
        alpha_bounds: t.Tuple[float, float] = (0.5, 1.0),
    ) -> ReductionRow:
        """Equal-loss capacity reduction at one sweep point"""
        self._notify("on_point_start", sweep_param, sweep_value, test_policy)
        scenario: Scenario = scenario_file.to_scenario(policy_kind=reference_policy)
        master_seed: int = self.master_seed_for(scenario_file)
        estimate = equal_loss_reduction(
            scenario,
            reference_policy=reference_policy,
            test_policy=test_policy,
            alpha_bounds=alpha_bounds,
            replications=self.replications_for(scenario_file),
            master_seed=master_seed,
            evaluator=LossEvaluator(scenario, master_seed, runner=self._runner),
            on_step=lambda alpha, step: self._notify("on_reduction_step", alpha, step),
        )
        row: ReductionRow = ReductionRow.from_estimate(sweep_param, sweep_value, estimate)
        self._notify("on_point_finish", row)
        return row


def _runner_context(runner: t.Optional[Runner]) -> t.ContextManager[Runner]:
    """Own a fresh runner, or borrow the given one without closing it"""
    return Runner() if runner is None else contextlib.nullcontext(runner)


def _make_display(title: str, display: t.Optional[DisplayType]) -> DisplayType:
    if display is not None:
        return display
    # Keep stdout clean for the table itself
    return C.DISPLAY_CLASS(title, use_stderr=C.OUTPUT_PATH is None)


def run_scenario(
    path: Path,
    overrides: t.Sequence[str] = (),
    runner: t.Optional[Runner] = None,
    display: t.Optional[DisplayType] = None,
) -> ResultTable:
    """Replications of one scenario file: a one-row table"""
    scenario_file: ScenarioFile = get_default_loader_class_for_source(path)().load(path, overrides)
    with _runner_context(runner) as active_runner:
        with Experiment(active_runner, _make_display(path.name, display)) as experiment:
            return ResultTable([experiment.measure(scenario_file, scenario_file.policy.kind, NO_SWEEP, "")])


def run_sweep(
    path: Path,
    param: str,
    values: t.Sequence[t.Any],
    overrides: t.Sequence[str] = (),
    runner: t.Optional[Runner] = None,
    display: t.Optional[DisplayType] = None,
) -> ResultTable:
    """One row per value of the dotted document path"""
    scenario_files: t.List[ScenarioFile] = get_default_loader_class_for_source(path)().load_sweep(
        path, param, values, overrides
    )
    table = ResultTable()
    with _runner_context(runner) as active_runner:
        with Experiment(active_runner, _make_display(f"{path.name}: {param}", display)) as experiment:
            for value, scenario_file in zip(values, scenario_files):
                table.append(experiment.measure(scenario_file, scenario_file.policy.kind, param, value))
    return table


def load_figure_points(
    preset: FigurePreset,
    overrides: t.Sequence[str] = (),
    values: t.Optional[t.Sequence[t.Any]] = None,
) -> t.List[t.Tuple[t.Any, ScenarioFile]]:
    """Validated scenario of every sweep point"""
    loader = DefaultYAMLScenarioLoader()
    return [
        (
            value,
            loader.load_document(
                preset.base_document(),
                overrides,
                source=preset.figure_id,
                assignments=preset.assign(value),
            ),
        )
        for value in (preset.values if values is None else values)
    ]


def run_figure(
    figure_id: str,
    overrides: t.Sequence[str] = (),
    values: t.Optional[t.Sequence[t.Any]] = None,
    runner: t.Optional[Runner] = None,
    display: t.Optional[DisplayType] = None,
) -> t.Union[ResultTable, ReductionTable]:
    """Run a preset sweep: losses per policy, or equal-loss reductions"""
    preset: FigurePreset = get_preset(figure_id)
    points = load_figure_points(preset, overrides, values)
    table: t.Union[ResultTable, ReductionTable] = ReductionTable() if preset.is_reduction else ResultTable()
    with _runner_context(runner) as active_runner:
        with Experiment(active_runner, _make_display(figure_id, display)) as experiment:
            for value, scenario_file in points:
                if preset.reduction is not None:
                    reference, test = preset.reduction
                    t.cast(ReductionTable, table).append(
                        experiment.reduce(
                            scenario_file,
                            reference,
                            test,
                            preset.sweep_param,
                            value,
                            alpha_bounds=preset.alpha_bounds,
                        )
                    )
                    continue
                for policy in preset.policies:
                    t.cast(ResultTable, table).append(
                        experiment.measure(scenario_file, policy, preset.sweep_param, value)
                    )
    return table
