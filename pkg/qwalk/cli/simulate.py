import csv
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Annotated, Optional, TextIO

import numpy as np
import typer
from loguru import logger
from typer import Option

from qwalk.cli.common import UsageFailure, echo_model, load_well_graph, reporting_failures
from qwalk.cli.graphs import GraphPath
from qwalk.config import Config
from qwalk.engine import bounds, oracle, spectral
from qwalk.engine.api import create_system
from qwalk.engine.graph import Graph, Involution, Vertex
from qwalk.shared import models

SWEEP_HEADER = [
    "q",
    "lambda1",
    "lambda2",
    "gap",
    "gap_lower",
    "p_at_tstar",
    "fidelity_lower",
    "tstar",
]


def transfer(
    path: GraphPath,
    q: Annotated[
        Optional[float], Option("--q", help="Double-well potential at the well pair.")
    ] = None,
    t: Annotated[Optional[float], Option("--t", help="Evaluate p at this time.")] = None,
    optimal: Annotated[bool, Option("--optimal", help="Evaluate p at t* = π/gap.")] = False,
    source: Annotated[Optional[int], Option(help="Start vertex, the well by default.")] = None,
    target: Annotated[
        Optional[int], Option(help="End vertex, the well's image by default.")
    ] = None,
    use_oracle: Annotated[bool, Option("--oracle", hidden=True)] = False,
) -> None:
    """Transfer probability p(t) between the wells."""
    if (t is None) == (not optimal):
        raise UsageFailure("Pass exactly one of --t and --optimal.")

    if t is not None and t < 0:
        raise UsageFailure(f"Time must be nonnegative, got {t}.")

    graph, inv, well = load_well_graph(path)

    with reporting_failures():
        system = create_system(graph, inv, well, q)
        u = well if source is None else source
        v = system.partner if target is None else target

        for vertex in (u, v):
            if not 0 <= vertex < graph.n:
                raise UsageFailure(f"Vertex {vertex} is out of range.")

        time = spectral.optimal_time(system.spectrum) if t is None else t
        result = spectral.transfer_probability(system.spectrum, u, v, time)
        oracle_p = None

        if use_oracle:
            oracle_p = oracle.matexp_probability(system.hamiltonian, u, v, time)

    echo_model(models.transfer_to_model(result, oracle_p))


def sweep_row(graph: Graph, inv: Involution, well: Vertex, q: float) -> models.SweepRow:
    system = create_system(graph, inv, well, q)
    spec = system.spectrum
    m, d = system.max_degree, system.distance
    gap: float | None = None
    tstar: float | None = None
    p_at_tstar: float | None = None
    fidelity: float | None = None

    if spec.gap_resolved:
        gap = spec.gap
        tstar = spectral.optimal_time(spec)
        p_at_tstar = spectral.transfer_probability(spec, well, system.partner, tstar).probability

    if q > 2 * m:
        fidelity = bounds.fidelity_lower(q, m)

    logger.debug("Swept q={q}.", q=q)
    return models.SweepRow(
        q=q,
        lambda1=float(spec.eigenvalues[0]),
        lambda2=float(spec.eigenvalues[1]),
        gap=gap,
        gap_lower=bounds.gap_lower(q, m, d),
        p_at_tstar=p_at_tstar,
        fidelity_lower=fidelity,
        tstar=tstar,
    )


def sweep(
    ctx: typer.Context,
    path: GraphPath,
    q_min: Annotated[float, Option("--q-min", help="Smallest well potential.")],
    q_max: Annotated[float, Option("--q-max", help="Largest well potential.")],
    steps: Annotated[int, Option(help="Number of evenly spaced q values.")] = 10,
    out: Annotated[Optional[Path], Option(help="CSV file, standard output by default.")] = None,
) -> None:
    """Spectral gap and transfer probability over a range of well potentials."""
    if q_min > q_max:
        raise UsageFailure(f"--q-min {q_min} exceeds --q-max {q_max}.")

    if q_min <= 0:
        raise UsageFailure(f"Well potentials must be positive, got --q-min {q_min}.")

    if steps < 1:
        raise UsageFailure(f"--steps must be at least 1, got {steps}.")

    graph, inv, well = load_well_graph(path)
    config: Config = ctx.obj["config"]
    grid = [float(q) for q in np.linspace(q_min, q_max, steps)] if steps > 1 else [q_min]

    with reporting_failures():
        with ThreadPoolExecutor(max_workers=config.max_workers) as executor:
            rows = list(executor.map(lambda q: sweep_row(graph, inv, well, q), grid))

    if out is None:
        write_rows(rows, sys.stdout)
        return

    with out.open("w", newline="") as stream:
        write_rows(rows, stream)


def write_rows(rows: list[models.SweepRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)

    for row in rows:
        writer.writerow(row.to_csv_row())
