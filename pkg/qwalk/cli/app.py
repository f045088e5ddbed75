from pathlib import Path
from typing import Annotated, Any, Optional

import click
import pydantic
import typer

from qwalk import __version__
from qwalk.cli import certify, graphs, logging, simulate
from qwalk.cli.common import ExitCode
from qwalk.cli.console import get_console
from qwalk.config import Config
from qwalk.engine.errors import QwalkError

app = typer.Typer(name="qwalk", no_args_is_help=True)
app.command(name="validate")(graphs.validate)
app.command(name="spectrum")(graphs.spectrum)
app.command(name="find-involution")(graphs.find_involution)
app.command(name="transfer")(simulate.transfer)
app.command(name="sweep")(simulate.sweep)
app.command(name="bounds")(certify.certify_bounds)
app.command(name="min-q")(certify.min_q)
app.command(name="gap-check")(certify.gap_check)


def _show_version(value: bool) -> None:
    if value:
        typer.echo(__version__)
        raise typer.Exit


@app.callback()
def main(
    ctx: typer.Context,
    threads: Annotated[
        Optional[int],
        typer.Option("--threads", help="Worker threads for sweeps, 0 picks automatically."),
    ] = None,
    debug: Annotated[bool, typer.Option("--debug", help="Log debug output to stderr.")] = False,
    log_file: Annotated[
        Optional[Path], typer.Option("--log-file", help="Also write logs to this file.")
    ] = None,
    version: Annotated[
        bool,
        typer.Option(
            "--version", callback=_show_version, is_eager=True, help="Show version and exit."
        ),
    ] = False,
) -> None:
    """
    Continuous-time quantum walks on graphs with an involution: spectra, transfer
    probabilities and certified bounds for state transfer between two wells.
    """
    overrides: dict[str, Any] = {"threads": threads, "log_file": log_file}

    if debug:
        overrides["debug"] = True

    try:
        config = Config(**{key: value for key, value in overrides.items() if value is not None})
    except pydantic.ValidationError as exc:
        typer.echo(exc, err=True)
        raise typer.Exit(ExitCode.IO_ERROR)

    logging.configure_logger(config.debug, config.log_file)
    ctx.ensure_object(dict)
    ctx.obj["config"] = config


def run() -> None:
    try:
        code = app(standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        raise SystemExit(ExitCode.USAGE)
    except click.ClickException as exc:
        exc.show()
        raise SystemExit(exc.exit_code)
    except click.Abort:
        raise SystemExit(ExitCode.IO_ERROR)
    except QwalkError as exc:
        get_console().error(str(exc))
        raise SystemExit(ExitCode.VALIDATION_FAILURE)

    raise SystemExit(code or ExitCode.OK)
