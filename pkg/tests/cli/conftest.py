"""CLI components tests fixtures"""

import typing as t
from contextlib import contextmanager
from pathlib import Path

import classlogging
import pytest

from lspair.config.constants.cli import _CLI_PARAMS
from lspair.config.environment import Env

SCENARIO_TEXT: str = """---
topology:
  - max_up: 20
    max_down: 20
  - max_up: 20
    max_down: 20
policy:
  kind: method-b
traffic:
  pattern:
    - mean_up: 4
      mean_down: 1
    - mean_up: 1
      mean_down: 4
  mean_interarrival: 0.5
  holding_time: 6
run:
  total_requests: 2000
  replications: 3
  master_seed: 5
"""


@contextmanager
def _cli_arg(name: str, value: t.Any) -> t.Generator[None, None, None]:
    """Temporarily set CLI argument"""
    sentinel = object()
    old_val = _CLI_PARAMS.get(name, sentinel)
    _CLI_PARAMS[name] = value
    yield
    del _CLI_PARAMS[name]
    if old_val is not sentinel:
        _CLI_PARAMS[name] = old_val


@pytest.fixture
def invalid_jobs_cli_arg() -> t.Generator[None, None, None]:
    """Set invalid jobs CLI arg"""
    with _cli_arg(name="jobs", value="some"):
        yield


@pytest.fixture
def cli_environment(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> t.Generator[Path, None, None]:
    """Isolated working directory, no colors, no dotenv"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(Env, "LSPAIR_FORCE_COLOR", False)
    monkeypatch.setattr(Env, "LSPAIR_ENV_FILE", "")
    monkeypatch.setattr(Env, "LSPAIR_LOG_FILE", "")
    monkeypatch.setattr(Env, "LSPAIR_LOG_LEVEL", "")
    monkeypatch.setattr(Env, "LSPAIR_JOBS", "")
    monkeypatch.setattr(Env, "LSPAIR_OUTPUT_DELIMITER", "")
    yield tmp_path
    # Commands reconfigure logging against the captured streams
    classlogging.configure_logging(level=classlogging.LogLevel.DEBUG)


@pytest.fixture
def scenario_path(cli_environment: Path) -> Path:
    """Small valid scenario file"""
    path: Path = cli_environment / "scenario.yaml"
    path.write_text(SCENARIO_TEXT, encoding="utf-8")
    return path
