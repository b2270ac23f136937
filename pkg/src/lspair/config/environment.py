"""Separate environment-centric module"""

import typing as t

from named_env import (
    EnvironmentNamespace,
    OptionalString,
    OptionalTernary,
)

__all__ = [
    "Env",
]


class Env(EnvironmentNamespace):
    """
    LSPAIR_LOG_LEVEL:
        Specifies the log level.
        Default is ERROR.
    LSPAIR_LOG_FILE:
        Specifies the log file.
        Defaults to the standard error stream.
    LSPAIR_ENV_FILE:
        Which file to load environment variables from. Expected format is k=v.
        Default is .env in the current directory.
    LSPAIR_DISPLAY_SOURCE_FILE:
        May point a file containing a Display class definition, which will replace the default implementation.
    LSPAIR_FORCE_COLOR:
        When specified, this will force the colored or non-coloured output, according to the setting.
    LSPAIR_JOBS:
        Number of worker processes used for replications.
        Default is 1 (everything runs in the calling process).
    LSPAIR_AUDIT_INTERVAL:
        Number of processed events between two full capacity audits of a run.
        Default is 10000.
    LSPAIR_MAX_REPLICATIONS:
        Upper bound for the replication count when the equal-loss search doubles it to resolve ambiguity.
        Default is 80.
    LSPAIR_OUTPUT_DELIMITER:
        Field delimiter of the result tables.
        Default is a comma.
    """

    LSPAIR_LOG_LEVEL: str = OptionalString("")
    LSPAIR_LOG_FILE: str = OptionalString("")
    LSPAIR_ENV_FILE: str = OptionalString("")
    LSPAIR_DISPLAY_SOURCE_FILE: str = OptionalString("")
    LSPAIR_FORCE_COLOR: t.Optional[bool] = OptionalTernary(None)  # type: ignore
    LSPAIR_JOBS: str = OptionalString("")
    LSPAIR_AUDIT_INTERVAL: str = OptionalString("")
    LSPAIR_MAX_REPLICATIONS: str = OptionalString("")
    LSPAIR_OUTPUT_DELIMITER: str = OptionalString("")
