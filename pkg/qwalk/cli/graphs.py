from pathlib import Path
from typing import Annotated, Optional

import typer
from typer import Argument, Option

from qwalk.cli.common import (
    ExitCode,
    UsageFailure,
    echo_model,
    load_graph,
    reporting_failures,
)
from qwalk.cli.console import get_console
from qwalk.engine import oracle
from qwalk.engine.api import create_system
from qwalk.engine.graph import validate_involution
from qwalk.engine.hamiltonian import assemble_hamiltonian
from qwalk.engine.spectral import hamiltonian_spectrum
from qwalk.shared import models

GraphPath = Annotated[Path, Argument(help="Graph file (JSON).", show_default=False)]


def validate(path: GraphPath) -> None:
    """Check a graph file and, when it has one, its involution."""
    graph, inv, _ = load_graph(path)

    if inv is None:
        echo_model(models.ValidationVerdict(ok=True))
        return

    with reporting_failures():
        verdict = validate_involution(graph, inv)

    echo_model(models.verdict_to_model(verdict))

    if not verdict.ok:
        console = get_console()
        console.error(f"{path}: the map is not an involution of the graph.")

        for item in verdict.violations:
            console.violation(item.kind, item.message)

        raise typer.Exit(ExitCode.VALIDATION_FAILURE)


def spectrum(
    path: GraphPath,
    q: Annotated[
        Optional[float], Option("--q", help="Double-well potential at the well pair.")
    ] = None,
    matrices: Annotated[bool, Option("--matrices", help="Include H and its blocks.")] = False,
) -> None:
    """Eigenvalues of H with their π⁺/π⁻ tags and Gershgorin discs."""
    graph, inv, well = load_graph(path)

    if q is not None and (inv is None or well is None):
        raise UsageFailure("--q needs a graph file with an involution and a well.")

    with reporting_failures():
        if inv is not None and well is not None:
            system = create_system(graph, inv, well, q)
            report = models.spectrum_to_model(
                system.hamiltonian, system.spectrum, system.reduction, with_matrices=matrices
            )
        else:
            h = assemble_hamiltonian(graph)
            report = models.spectrum_to_model(h, hamiltonian_spectrum(h), with_matrices=matrices)

    echo_model(report)


def find_involution(path: GraphPath) -> None:
    """List every involution of the graph, identity first."""
    graph, _, _ = load_graph(path)

    with reporting_failures():
        found = oracle.enumerate_involutions(graph)

    typer.echo("[" + ",".join(models.involution_to_model(inv).to_json() for inv in found) + "]")
