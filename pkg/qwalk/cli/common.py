import contextlib
import enum
from pathlib import Path
from typing import Iterator

import click
import pydantic
import typer

from qwalk.cli.console import get_console
from qwalk.engine import errors
from qwalk.engine.graph import Graph, Involution, Vertex
from qwalk.shared.models import BaseModel, GraphFile


class ExitCode(enum.IntEnum):
    OK = 0
    IO_ERROR = 1
    VALIDATION_FAILURE = 2
    USAGE = 64


class UsageFailure(click.UsageError):
    exit_code = ExitCode.USAGE


def echo_model(model: BaseModel) -> None:
    typer.echo(model.to_json())


def read_graph_file(path: Path) -> GraphFile:
    console = get_console()

    try:
        raw = path.read_bytes()
    except OSError as exc:
        console.error(f"Cannot read {path}: {exc.strerror}.")
        raise typer.Exit(ExitCode.IO_ERROR)

    try:
        return GraphFile.from_raw(raw)
    except pydantic.ValidationError as exc:
        console.error(f"Cannot parse {path}: {exc.errors()[0]['msg']}.")
        raise typer.Exit(ExitCode.IO_ERROR)


@contextlib.contextmanager
def reporting_failures() -> Iterator[None]:
    try:
        yield
    except errors.QwalkError as exc:
        get_console().error(str(exc))
        raise typer.Exit(ExitCode.VALIDATION_FAILURE)


def load_graph(path: Path) -> tuple[Graph, Involution | None, Vertex | None]:
    graph_file = read_graph_file(path)

    with reporting_failures():
        return graph_file.to_domain()


def load_well_graph(path: Path) -> tuple[Graph, Involution, Vertex]:
    """Load a file that must name both an involution and a well."""
    graph, inv, well = load_graph(path)

    if inv is None or well is None:
        get_console().error(f"{path} needs both an involution and a well for this command.")
        raise typer.Exit(ExitCode.VALIDATION_FAILURE)

    return graph, inv, well
