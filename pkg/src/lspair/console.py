"""Command-line interface entry"""

import functools
import os
import sys
import typing as t
from pathlib import Path

import classlogging
import click
import yaml
from dotenv.main import DotEnv

import lspair
from lspair.config.constants import C, LOG_LEVELS
from lspair.config.constants.cli import cliargs_receiver, reset_cli_args
from lspair.config.environment import Env
from lspair.exceptions import BaseError
from lspair.experiments import run_figure, run_scenario, run_sweep
from lspair.loader.helpers import load_scenario_file
from lspair.presets import FIGURE_IDS, iter_presets
from lspair.results import AnyTable, load_table

logger = classlogging.get_module_logger()


@click.group
@click.option(
    "-l",
    "--log-level",
    help="Logging level. Defaults to ERROR. Also configurable via the LSPAIR_LOG_LEVEL environment variable.",
    type=click.Choice(list(LOG_LEVELS)),
)
@click.option("--seed", help="Master seed. Overrides run.master_seed of the scenario.", type=click.IntRange(min=0))
@click.option(
    "--replications",
    help="Replications per point. Overrides run.replications of the scenario.",
    type=click.IntRange(min=1),
)
@click.option("--out", help="Result table path. Defaults to the standard output.", type=click.Path(dir_okay=False))
@click.option(
    "--jobs",
    help="Worker processes for replications. Defaults to 1. "
    "Also configurable via the LSPAIR_JOBS environment variable.",
    type=click.IntRange(min=1),
)
def main(**_: t.Any) -> None:
    """Bidirectional LSP pair selection simulator"""
    reset_cli_args()


def load_dotenv() -> t.List[str]:
    """Try loading environment from the dotenv file.
    Special variable called "HERE" is injected into the environment during dotenv loading,
    which points to the directory of the dotenv file (if not specified in advance).
    Logging is not configured yet, so the outcome is returned as messages."""
    messages: t.List[str] = []
    here_var_name: str = "HERE"
    here_value_was_defined: bool = here_var_name in os.environ
    dotenv_path: Path = C.ENV_FILE
    if not here_value_was_defined:
        os.environ[here_var_name] = str(dotenv_path.parent)
    try:
        dotenv = DotEnv(dotenv_path=dotenv_path)
        if here_var_name in dotenv.dict():
            here_value_was_defined = True
        if dotenv.set_as_environment_variables():
            messages.append(f"Loaded environment variables from {str(dotenv_path)!r}")
        else:
            messages.append(f"Dotenv not found: {str(dotenv_path)!r}")
    finally:
        if not here_value_was_defined:
            os.environ.pop(here_var_name)
    return messages


def emit_table(table: AnyTable) -> None:
    """Write the table to --out, or to the standard output"""
    if (out_path := C.OUTPUT_PATH) is None:
        sys.stdout.write(table.dumps())
        return
    table.dump(out_path)
    logger.info(f"Results written to {str(out_path)!r}")


def parse_values(text: str) -> t.List[t.Any]:
    """Comma-separated list of YAML scalars"""
    try:
        return [yaml.safe_load(item) for item in text.split(",") if item.strip()]
    except yaml.YAMLError as e:
        raise click.BadParameter(f"Invalid value list {text!r}: {e}") from None


def wrap_cli_command(func):
    """Standard loading and error handling"""

    @main.command
    @cliargs_receiver
    @functools.wraps(func)
    def wrapped(*args, **kwargs):
        dotenv_messages: t.List[str] = load_dotenv()
        classlogging.configure_logging(
            level=C.LOG_LEVEL,
            colorize=C.USE_COLOR and not C.LOG_FILE,
            main_file=C.LOG_FILE,
            stream=None if C.LOG_FILE else classlogging.LogStream.STDERR,
        )
        for message in dotenv_messages:
            logger.debug(message)
        try:
            return func(*args, **kwargs)
        except click.ClickException:
            raise
        except BaseError as e:
            logger.debug("", exc_info=True)
            sys.stderr.write(f"! {e}\n")
            sys.exit(e.CODE)
        except Exception as e:
            logger.debug("", exc_info=True)
            sys.stderr.write(f"! UNHANDLED EXCEPTION: {e!r}\n")
            sys.exit(3)

    return wrapped


def override_option(func):
    """Repeatable -o path=value"""
    return click.option(
        "-o",
        "--override",
        "overrides",
        multiple=True,
        metavar="PATH=VALUE",
        help="Set a scenario document value, e.g. traffic.mean_interarrival=0.8. Repeatable.",
    )(func)


@wrap_cli_command
@override_option
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def run(scenario: Path, overrides: t.Tuple[str, ...]) -> None:
    """Run replications of a scenario file."""
    emit_table(run_scenario(scenario, overrides))


@wrap_cli_command
@override_option
@click.option("--values", "values_text", help="Comma-separated values to sweep over.", metavar="LIST")
@click.argument("figure_id", type=click.Choice(FIGURE_IDS))
def figure(figure_id: str, overrides: t.Tuple[str, ...], values_text: t.Optional[str]) -> None:
    """Reproduce an evaluation figure."""
    values: t.Optional[t.List[t.Any]] = None if values_text is None else parse_values(values_text)
    emit_table(run_figure(figure_id, overrides, values))


@wrap_cli_command
@override_option
@click.option("--param", required=True, help="Dotted scenario path, e.g. topology.0.max_up.", metavar="PATH")
@click.option("--values", "values_text", required=True, help="Comma-separated values.", metavar="LIST")
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def sweep(scenario: Path, overrides: t.Tuple[str, ...], param: str, values_text: str) -> None:
    """Run a scenario file once per value of one parameter."""
    if not (values := parse_values(values_text)):
        raise click.BadParameter("Empty value list", param_hint="--values")
    emit_table(run_sweep(scenario, param, values, overrides))


@wrap_cli_command
@click.argument("table", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def plot_data(table: Path) -> None:
    """Convert a result table into gnuplot data blocks."""
    sys.stdout.write(load_table(table).to_gnuplot())


@wrap_cli_command
@override_option
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def validate(scenario: Path, overrides: t.Tuple[str, ...]) -> None:
    """Check scenario file validity."""
    scenario_file = load_scenario_file(scenario, overrides)
    logger.info(f"Scenario is valid: {len(scenario_file.topology)} pairs, policy {scenario_file.policy.kind}")


@main.group
def info() -> None:
    """Package information."""


@info.command
def version() -> None:
    """Show package version."""
    print(lspair.__version__)


@info.command
def env_vars() -> None:
    """Show environment variables that are taken into account."""
    print(Env.__doc__)


@info.command
def figures() -> None:
    """Show figure presets."""
    for preset in iter_presets():
        print(f"{preset.figure_id}: {preset.description}")
