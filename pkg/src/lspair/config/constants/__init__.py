# pylint: disable=import-outside-toplevel,cyclic-import
"""Lazy-loaded constants"""

import os
import sys
import typing as t
from pathlib import Path

from classlogging import LogLevel

from .cli import get_cli_arg
from .helpers import (
    Optional,
    Mandatory,
    maybe_delimiter,
    maybe_path,
    maybe_positive_int,
    maybe_class_from_module,
)
from ..environment import Env
from ...types import DisplayClassType

__all__ = [
    "C",
    "LOG_LEVELS",
]

LOG_LEVELS: t.Dict[str, str] = {
    "0": LogLevel.ERROR,
    "1": LogLevel.WARNING,
    "2": LogLevel.INFO,
    "3": LogLevel.DEBUG,
    "4": LogLevel.TRACE,
    LogLevel.ERROR: LogLevel.ERROR,
    LogLevel.WARNING: LogLevel.WARNING,
    LogLevel.INFO: LogLevel.INFO,
    LogLevel.DEBUG: LogLevel.DEBUG,
    LogLevel.TRACE: LogLevel.TRACE,
}

DEFAULT_AUDIT_INTERVAL: int = 10_000
DEFAULT_MAX_REPLICATIONS: int = 80


def _get_default_display_class() -> DisplayClassType:
    from ...display.default import DefaultDisplay

    return DefaultDisplay


class C:
    """Runtime constants"""

    LOG_LEVEL: Mandatory[str] = Mandatory(
        lambda: LOG_LEVELS[get_cli_arg("log_level")] if get_cli_arg("log_level") is not None else None,
        lambda: Env.LSPAIR_LOG_LEVEL or None,
        lambda: LogLevel.ERROR,
    )
    LOG_FILE: Optional[Path] = Optional(
        lambda: maybe_path(Env.LSPAIR_LOG_FILE),
    )
    ENV_FILE: Mandatory[Path] = Mandatory(
        lambda: maybe_path(Env.LSPAIR_ENV_FILE),
        lambda: Path().resolve() / ".env",
    )
    DISPLAY_CLASS: Mandatory[DisplayClassType] = Mandatory(
        lambda: maybe_class_from_module(
            path_str=Env.LSPAIR_DISPLAY_SOURCE_FILE,
            class_name="Display",
            submodule_name="display",
        ),
        _get_default_display_class,
    )
    USE_COLOR: Mandatory[bool] = Mandatory(
        lambda: Env.LSPAIR_FORCE_COLOR,
        lambda: os.isatty(sys.stdout.fileno()),
    )
    JOBS: Mandatory[int] = Mandatory(
        lambda: maybe_positive_int(get_cli_arg("jobs"), source="--jobs"),
        lambda: maybe_positive_int(Env.LSPAIR_JOBS, source="LSPAIR_JOBS"),
        lambda: 1,
    )
    AUDIT_INTERVAL: Mandatory[int] = Mandatory(
        lambda: maybe_positive_int(Env.LSPAIR_AUDIT_INTERVAL, source="LSPAIR_AUDIT_INTERVAL"),
        lambda: DEFAULT_AUDIT_INTERVAL,
    )
    MAX_REPLICATIONS: Mandatory[int] = Mandatory(
        lambda: maybe_positive_int(Env.LSPAIR_MAX_REPLICATIONS, source="LSPAIR_MAX_REPLICATIONS"),
        lambda: DEFAULT_MAX_REPLICATIONS,
    )
    OUTPUT_DELIMITER: Mandatory[str] = Mandatory(
        lambda: maybe_delimiter(Env.LSPAIR_OUTPUT_DELIMITER, source="LSPAIR_OUTPUT_DELIMITER"),
        lambda: ",",
    )
    MASTER_SEED: Optional[int] = Optional(
        lambda: get_cli_arg("seed"),
    )
    REPLICATIONS: Optional[int] = Optional(
        lambda: maybe_positive_int(get_cli_arg("replications"), source="--replications"),
    )
    OUTPUT_PATH: Optional[Path] = Optional(
        lambda: maybe_path(get_cli_arg("out")),
    )
