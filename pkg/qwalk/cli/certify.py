from pathlib import Path
from typing import Annotated, Optional

from typer import Argument, Option

from qwalk.cli.common import (
    UsageFailure,
    echo_model,
    load_graph,
    load_well_graph,
    reporting_failures,
)
from qwalk.cli.console import get_console
from qwalk.cli.graphs import GraphPath
from qwalk.engine import bounds, walks
from qwalk.engine.graph import max_degree
from qwalk.shared import models

WellPotential = Annotated[float, Option("--q", help="Double-well potential at the well pair.")]


def certify_bounds(path: GraphPath, q: WellPotential) -> None:
    """Evaluate every bound and compare it with the computed quantity."""
    if q <= 0:
        raise UsageFailure(f"--q must be positive, got {q}.")

    graph, inv, well = load_well_graph(path)

    with reporting_failures():
        report = bounds.certify(graph, inv, well, q)

    if not report.gap_resolved:
        get_console().warning(
            f"The spectral gap at q={q} is below double precision resolution, "
            "gap, time and fidelity comparisons are skipped."
        )

    if failing := report.limitations():
        get_console().warning(
            f"The wells are adjacent, {' and '.join(failing)} bounds do not apply at q={q}."
        )

    echo_model(models.report_to_model(report))


def min_q(
    epsilon: Annotated[float, Option(help="Allowed infidelity, strictly between 0 and 1.")],
    path: Annotated[
        Optional[Path], Argument(help="Graph file to read m from.", show_default=False)
    ] = None,
    m: Annotated[Optional[int], Option("--m", help="Maximum degree.")] = None,
) -> None:
    """Well potential that guarantees fidelity at least 1 − ε."""
    if not 0 < epsilon < 1:
        raise UsageFailure(f"--epsilon must lie in (0, 1), got {epsilon}.")

    if (path is None) == (m is None):
        raise UsageFailure("Pass either a graph file or --m.")

    if m is None:
        assert path is not None
        graph, _, _ = load_graph(path)
        m = max_degree(graph)

    if m < 0:
        raise UsageFailure(f"--m must be nonnegative, got {m}.")

    with reporting_failures():
        result = bounds.min_potential(epsilon, m)

    echo_model(
        models.MinPotential(
            m=m,
            epsilon=epsilon,
            c=result.c,
            q_formula=result.q_formula,
            q_sufficient_256=result.q_sufficient,
        )
    )


def gap_check(
    path: GraphPath,
    q: WellPotential,
    length: Annotated[
        Optional[int], Option(help="Walk length cut-off, chosen from the tail bound by default.")
    ] = None,
) -> None:
    """Walk-sum identities behind the spectral gap bound."""
    if q <= 0:
        raise UsageFailure(f"--q must be positive, got {q}.")

    if length is not None and length < 1:
        raise UsageFailure(f"--length must be at least 1, got {length}.")

    graph, inv, well = load_well_graph(path)

    with reporting_failures():
        certificate = walks.gap_certificate_check(graph, inv, well, q, length)
        sym = walks.well_system_residual(
            graph, inv, well, certificate.lambda1, q, certificate.length
        )
        antisym = walks.well_system_residual(
            graph, inv, well, certificate.lambda2, q, certificate.length
        )

    echo_model(models.gap_check_to_model(certificate, sym, antisym))
