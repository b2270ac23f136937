"""
Loss estimation over replications and the equal-loss capacity reduction search.
"""

from __future__ import annotations

import math
import typing as t
from dataclasses import dataclass
from statistics import NormalDist

import classlogging
import numpy as np

from .config.constants import C
from .core import Topology
from .engine import RunResult, Scenario
from .exceptions import BracketingError, InvalidInputError, NoiseError, ScenarioError
from .policy import PolicyKind
from .runner import Runner

__all__ = [
    "CONFIDENCE_LEVEL",
    "LossEstimate",
    "loss_probability",
    "scale_topology",
    "ReductionEstimate",
    "LossEvaluator",
    "equal_loss_reduction",
    "max_reduction",
]

CONFIDENCE_LEVEL: float = 0.95
# Two-sided normal quantile, ~1.96
Z_QUANTILE: float = NormalDist().inv_cdf(0.5 + CONFIDENCE_LEVEL / 2)
# Below this, the normal approximation is rough
MIN_REPLICATIONS_FOR_CI: int = 10
ALPHA_RESOLUTION: float = 1e-3

StepCallback = t.Callable[[float, "LossEstimate"], None]

logger = classlogging.get_module_logger()


@dataclass(frozen=True)
class LossEstimate:
    """Mean call-loss probability of a set of replications"""

    mean_loss: float
    ci_halfwidth: t.Optional[float]
    replications: int
    offered: int
    rejected: int
    deadlock_rejected: int

    @property
    def deadlock_fraction(self) -> float:
        """Share of rejections classified as deadlocks"""
        return self.deadlock_rejected / self.rejected if self.rejected else 0.0

    @property
    def interval(self) -> t.Optional[t.Tuple[float, float]]:
        """Confidence interval bounds"""
        if self.ci_halfwidth is None:
            return None
        return self.mean_loss - self.ci_halfwidth, self.mean_loss + self.ci_halfwidth


def loss_probability(results: t.Sequence[RunResult]) -> LossEstimate:
    """Average the per-replication loss ratios; CI uses the normal approximation"""
    if not results:
        raise InvalidInputError("No run results to estimate the loss from")
    if empty := [num for num, result in enumerate(results) if result.offered == 0]:
        raise InvalidInputError(f"Replications {empty} offered no measured requests")
    losses = np.array([result.rejected / result.offered for result in results], dtype=float)
    ci_halfwidth: t.Optional[float] = None
    if len(losses) > 1:
        if len(losses) < MIN_REPLICATIONS_FOR_CI:
            logger.debug(f"Confidence interval over {len(losses)} replications only")
        ci_halfwidth = Z_QUANTILE * float(losses.std(ddof=1)) / math.sqrt(len(losses))
    return LossEstimate(
        mean_loss=float(losses.mean()),
        ci_halfwidth=ci_halfwidth,
        replications=len(results),
        offered=sum(result.offered for result in results),
        rejected=sum(result.rejected for result in results),
        deadlock_rejected=sum(result.deadlock_rejected for result in results),
    )


def scale_topology(topology: Topology, alpha: float) -> Topology:
    """Multiply every pair capacity by alpha"""
    if not 0 < alpha <= 1:
        raise ValueError(f"Scale factor must be within (0, 1] (got {alpha!r})")
    return topology.scaled(alpha)


@dataclass(frozen=True)
class ReductionEstimate:
    """Scale at which the test policy loses as much as the reference does at full capacity"""

    alpha_star: float
    target_loss: float
    iterations: int
    replications: int
    reference_policy: PolicyKind
    test_policy: PolicyKind

    @property
    def z_value(self) -> float:
        """Capacity reduction ratio"""
        return 1.0 - self.alpha_star

    @property
    def z_percent(self) -> float:
        """Capacity reduction ratio, in percent"""
        return 100.0 * self.z_value


class LossEvaluator(classlogging.LoggerMixin):
    """
    Loss of some policy on the scenario scaled by alpha.
    Every evaluation reuses the same master seed, so the compared runs share their traffic.
    """

    def __init__(self, scenario: Scenario, master_seed: int, runner: t.Optional[Runner] = None) -> None:
        self._scenario: Scenario = scenario
        self._master_seed: int = master_seed
        self._runner: Runner = Runner() if runner is None else runner
        self._cache: t.Dict[t.Tuple[PolicyKind, float, int], LossEstimate] = {}

    def evaluate(self, policy: PolicyKind, alpha: float, replications: int) -> LossEstimate:
        """Estimate the loss, memoized"""
        key = (policy, alpha, replications)
        if key not in self._cache:
            scenario: Scenario = self._scenario.replace(
                policy_kind=policy,
                topology=scale_topology(self._scenario.topology, alpha),
            )
            self.logger.debug(f"Evaluating {policy!r} at alpha={alpha!r} over {replications} replications")
            self._cache[key] = loss_probability(self._runner.run_sync(scenario, replications, self._master_seed))
        return self._cache[key]


def _check_monotone(grid: t.Dict[float, LossEstimate]) -> None:
    """More capacity must not mean more loss, beyond the sampling noise"""
    points: t.List[t.Tuple[float, LossEstimate]] = sorted(grid.items())
    for (alpha_low, low), (alpha_high, high) in zip(points, points[1:]):
        slack: float = (low.ci_halfwidth or 0.0) + (high.ci_halfwidth or 0.0)
        if high.mean_loss > low.mean_loss + slack:
            raise NoiseError(
                f"Loss grows with capacity: {low.mean_loss!r} at alpha={alpha_low!r}, "
                f"{high.mean_loss!r} at alpha={alpha_high!r}; increase replications"
            )


def _ambiguous(estimate: LossEstimate, target: LossEstimate, tolerance: float) -> bool:
    """Confidence intervals overlap, yet the means differ beyond the tolerance"""
    if estimate.ci_halfwidth is None or target.ci_halfwidth is None:
        return False
    distance: float = abs(estimate.mean_loss - target.mean_loss)
    return tolerance < distance <= estimate.ci_halfwidth + target.ci_halfwidth


# pylint: disable=too-many-arguments,too-many-locals
def equal_loss_reduction(
    scenario: Scenario,
    reference_policy: PolicyKind,
    test_policy: PolicyKind,
    alpha_bounds: t.Tuple[float, float] = (0.5, 1.0),
    tolerance: float = 0.1,
    replications: int = 10,
    master_seed: int = 0,
    max_replications: t.Optional[int] = None,
    evaluator: t.Optional[LossEvaluator] = None,
    on_step: t.Optional[StepCallback] = None,
) -> ReductionEstimate:
    """
    Bisect on the capacity scale of the test policy until its loss matches
    the loss of the reference policy at full capacity, within a relative tolerance.
    """
    lower, upper = alpha_bounds
    if not 0 < lower < upper <= 1:
        raise ScenarioError(f"Scale bounds must satisfy 0 < lower < upper <= 1 (got {alpha_bounds!r})")
    if not tolerance > 0:
        raise ScenarioError(f"Relative tolerance must be positive (got {tolerance!r})")
    if replications < 1:
        raise ScenarioError(f"Replications number must be positive (got {replications})")
    replications_cap: int = C.MAX_REPLICATIONS if max_replications is None else max_replications
    evaluator = LossEvaluator(scenario, master_seed) if evaluator is None else evaluator

    def _step(alpha: float, estimate: LossEstimate) -> None:
        if on_step is not None:
            on_step(alpha, estimate)

    def _result(alpha_star: float, target: LossEstimate, iterations: int) -> ReductionEstimate:
        return ReductionEstimate(
            alpha_star=alpha_star,
            target_loss=target.mean_loss,
            iterations=iterations,
            replications=current_replications,
            reference_policy=reference_policy,
            test_policy=test_policy,
        )

    current_replications: int = replications
    iterations: int = 0
    while True:
        target: LossEstimate = evaluator.evaluate(reference_policy, 1.0, current_replications)
        at_full: LossEstimate = evaluator.evaluate(test_policy, 1.0, current_replications)
        _step(1.0, at_full)
        if at_full.mean_loss >= target.mean_loss:
            logger.info(f"{test_policy!r} is not better than {reference_policy!r} at full capacity")
            return _result(1.0, target, iterations)
        absolute_tolerance: float = tolerance * target.mean_loss
        low_end: LossEstimate = evaluator.evaluate(test_policy, lower, current_replications)
        _step(lower, low_end)
        if low_end.mean_loss < target.mean_loss - absolute_tolerance:
            raise BracketingError(
                f"Loss of {test_policy!r} at alpha={lower!r} ({low_end.mean_loss!r}) is still below "
                f"the target {target.mean_loss!r}; widen the scale bounds"
            )
        grid: t.Dict[float, LossEstimate] = {1.0: at_full, lower: low_end}
        if abs(low_end.mean_loss - target.mean_loss) <= absolute_tolerance:
            return _result(lower, target, iterations)
        alpha_low, alpha_high = lower, min(upper, 1.0)
        restart: bool = False
        while alpha_high - alpha_low >= ALPHA_RESOLUTION:
            alpha: float = (alpha_low + alpha_high) / 2
            estimate: LossEstimate = evaluator.evaluate(test_policy, alpha, current_replications)
            iterations += 1
            _step(alpha, estimate)
            grid[alpha] = estimate
            _check_monotone(grid)
            difference: float = estimate.mean_loss - target.mean_loss
            if abs(difference) <= absolute_tolerance:
                return _result(alpha, target, iterations)
            if _ambiguous(estimate, target, absolute_tolerance) and current_replications * 2 <= replications_cap:
                current_replications *= 2
                logger.info(f"Ambiguous estimate at alpha={alpha!r}, doubling replications to {current_replications}")
                restart = True
                break
            if difference > 0:
                alpha_low = alpha
            else:
                alpha_high = alpha
        if not restart:
            return _result((alpha_low + alpha_high) / 2, target, iterations)


def max_reduction(estimates: t.Iterable[ReductionEstimate]) -> ReductionEstimate:
    """Largest reduction over some sweep"""
    candidates: t.List[ReductionEstimate] = list(estimates)
    if not candidates:
        raise InvalidInputError("No reduction estimates given")
    return max(candidates, key=lambda estimate: estimate.z_value)
