"""Test miscellaneous CLI components"""

# pylint: disable=unused-argument

from pathlib import Path

import pytest

from lspair.config.constants import C
from lspair.config.environment import Env
from lspair.display.default import DefaultDisplay
from lspair.exceptions import ScenarioError

from .conftest import _cli_arg


def test_invalid_jobs_cli_arg(invalid_jobs_cli_arg: None) -> None:
    """Check error throw for bad CLI jobs arg value"""
    with pytest.raises(ScenarioError, match="Invalid --jobs: 'some'"):
        assert C.JOBS


def test_default_display(monkeypatch: pytest.MonkeyPatch) -> None:
    """Check that default display is the DefaultDisplay"""
    monkeypatch.setattr(Env, "LSPAIR_DISPLAY_SOURCE_FILE", "")
    assert C.DISPLAY_CLASS is DefaultDisplay


def test_external_display(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Display class may come from a source file"""
    source: Path = tmp_path / "custom_display.py"
    source.write_text(
        "from lspair.display.base import BaseDisplay\n\n\nclass Display(BaseDisplay):\n    pass\n",
        encoding="utf-8",
    )
    monkeypatch.setattr(Env, "LSPAIR_DISPLAY_SOURCE_FILE", str(source))
    display_class = C.DISPLAY_CLASS
    assert display_class.__name__ == "Display"
    assert display_class.__module__ == "lspair.external.display"


def test_missing_external_display(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Missing display source is reported"""
    monkeypatch.setattr(Env, "LSPAIR_DISPLAY_SOURCE_FILE", str(tmp_path / "missing.py"))
    with pytest.raises(Exception, match="Missing source module"):
        assert C.DISPLAY_CLASS


def test_run_overrides_cli_args() -> None:
    """Seed, replications and output path come from the command line only"""
    with _cli_arg("seed", 0), _cli_arg("replications", 7), _cli_arg("out", "table.csv"):
        assert C.MASTER_SEED == 0
        assert C.REPLICATIONS == 7
        assert C.OUTPUT_PATH == Path("table.csv")
    assert C.MASTER_SEED is None
    assert C.REPLICATIONS is None
    assert C.OUTPUT_PATH is None
