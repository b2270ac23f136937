"""
Runner executes independent replications of a scenario,
either inline or in a pool of worker processes.
"""

from __future__ import annotations

import asyncio
import functools
import typing as t
from concurrent.futures import ProcessPoolExecutor

import classlogging

from .config.constants import C
from .engine import RunResult, Scenario, SeedPair, run

__all__ = [
    "Runner",
    "simulate",
]


def simulate(scenario: Scenario, audit_interval: int) -> RunResult:
    """Process pool entry point"""
    return run(scenario, audit_interval=audit_interval)


class Runner(classlogging.LoggerMixin):
    """Replications executor. Workers share nothing but the immutable scenario."""

    def __init__(self, jobs: t.Optional[int] = None, audit_interval: t.Optional[int] = None) -> None:
        self._jobs: int = C.JOBS if jobs is None else jobs
        if self._jobs < 1:
            raise ValueError(f"Jobs number must be positive (got {self._jobs})")
        self._audit_interval: int = C.AUDIT_INTERVAL if audit_interval is None else audit_interval
        self._executor: t.Optional[ProcessPoolExecutor] = None

    @property
    def jobs(self) -> int:
        """Worker processes number"""
        return self._jobs

    def __enter__(self) -> Runner:
        return self

    def __exit__(self, *args: t.Any) -> None:
        self.close()

    def close(self) -> None:
        """Shut the worker pool down, if any"""
        if self._executor is not None:
            self.logger.debug("Shutting the worker pool down")
            self._executor.shutdown()
            self._executor = None

    @staticmethod
    def replicate(scenario: Scenario, replications: int, master_seed: int) -> t.List[Scenario]:
        """Copies of the scenario with per-replication seeds"""
        if replications < 1:
            raise ValueError(f"Replications number must be positive (got {replications})")
        return [
            scenario.replace(seeds=SeedPair.for_replication(master_seed, replication))
            for replication in range(replications)
        ]

    async def run_async(self, scenario: Scenario, replications: int, master_seed: int) -> t.List[RunResult]:
        """Run all replications; results come back in replication order"""
        scenario.validate()
        scenarios: t.List[Scenario] = self.replicate(scenario, replications, master_seed)
        self.logger.debug(f"Running {replications} replications of {scenario.policy_kind!r} with {self._jobs} jobs")
        if self._jobs == 1:
            return [simulate(item, self._audit_interval) for item in scenarios]
        if self._executor is None:
            self._executor = ProcessPoolExecutor(max_workers=self._jobs)
        loop = asyncio.get_running_loop()
        return list(
            await asyncio.gather(
                *(
                    loop.run_in_executor(self._executor, functools.partial(simulate, item, self._audit_interval))
                    for item in scenarios
                )
            )
        )

    def run_sync(self, scenario: Scenario, replications: int, master_seed: int) -> t.List[RunResult]:
        """Wrap async run into an event loop"""
        return asyncio.run(self.run_async(scenario, replications, master_seed))
