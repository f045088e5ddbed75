"""
Walk generating functions Z_xy(λ) and the two-vertex well system they satisfy.

A walk counted here has length at least one and never passes through a
forbidden vertex except at its two ends. With the wells forbidden this is the
convention under which λ(Z_vv ± Z_vv′) = λ − Q holds at the eigenvalues of the
double-well Hamiltonian.
"""

import dataclasses
import math
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
from loguru import logger

from qwalk.engine import bounds, errors
from qwalk.engine.api import create_system
from qwalk.engine.graph import Graph, Involution, Vertex, max_degree
from qwalk.engine.hamiltonian import Block

TRUNCATION_TARGET = 1e-10
MAX_TRUNCATION = 200
EXACT_LIMIT = 2**53


@dataclasses.dataclass(frozen=True, eq=False)
class WalkSum:
    """
    ``counts[k]`` is the number of length-k walks from source to target.

    Counts are exact integers while they fit a double mantissa; ``exact`` turns
    false once they had to continue in floating point.
    """

    source: Vertex
    target: Vertex
    forbidden_interior: frozenset[Vertex]
    max_length: int
    max_degree: int
    counts: npt.NDArray[np.int64] | npt.NDArray[np.float64]
    exact: bool = True

    def first_nonzero(self) -> int | None:
        nonzero = np.flatnonzero(self.counts[1:])
        return int(nonzero[0]) + 1 if len(nonzero) else None


class TruncatedSum(NamedTuple):
    value: float
    error_bound: float
    length: int


class WellResidual(NamedTuple):
    sym: float
    antisym: float
    length: int
    error_bound: float


@dataclasses.dataclass(frozen=True)
class GapCertificate:
    q: float
    m: int
    d: int
    length: int
    lambda1: float
    lambda2: float
    gap: float
    # λ₁ − λ₂ ≥ λ₁^{1−d} + λ₂^{1−d}, reported only.
    intermediate_rhs: float
    intermediate_holds: bool
    # The same right-hand side after moving the closed-walk terms to the left.
    scaled_lhs: float
    scaled_holds: bool
    identity_residual: float
    truncation_error: float
    final_bound: float
    final_holds: bool


def count_walks_avoiding(
    g: Graph, source: Vertex, target: Vertex, forbidden_interior: frozenset[Vertex], length: int
) -> WalkSum:
    if length < 0:
        raise errors.DomainError(f"Walk length must be nonnegative, got {length}.")

    for vertex in (source, target, *forbidden_interior):
        if not 0 <= vertex < g.n:
            raise errors.StructuralError(f"Vertex {vertex} is out of range.")

    adjacency: npt.NDArray[np.int64] | npt.NDArray[np.float64] = g.adjacency
    mask = np.ones(g.n, dtype=np.int64)
    mask[list(forbidden_interior)] = 0
    m = max_degree(g)

    counts: npt.NDArray[np.int64] | npt.NDArray[np.float64] = np.zeros(length + 1, dtype=np.int64)
    counts[0] = int(source == target)
    exact = True

    if length >= 1:
        counts[1] = adjacency[source, target]

    # Walks that left the source and so far only touched allowed vertices.
    frontier = adjacency[source, :] * mask

    for k in range(2, length + 1):
        if exact and float(frontier.max(initial=0)) * max(m, 1) >= EXACT_LIMIT:
            logger.warning(
                "Walk counts from {source} to {target} exceed 2^53 at length {k}, "
                "continuing in floating point.",
                source=source,
                target=target,
                k=k,
            )
            exact = False
            counts = counts.astype(np.float64)
            frontier = frontier.astype(np.float64)
            adjacency = adjacency.astype(np.float64)

        counts[k] = frontier @ adjacency[:, target]
        frontier = (frontier @ adjacency) * mask

    return WalkSum(
        source=source,
        target=target,
        forbidden_interior=frozenset(forbidden_interior),
        max_length=length,
        max_degree=m,
        counts=counts,
        exact=exact,
    )


def truncation_error(m: int, lam: float, length: int) -> float:
    ratio = m / abs(lam)
    return float(ratio ** (length + 1) / (1 - ratio))


def default_truncation(m: int, lam: float) -> int:
    """Shortest length with tail bound below 1e-10, at most 200."""
    if abs(lam) <= m:
        raise errors.DivergenceError(f"Walk series diverges for |λ|={abs(lam)} <= m={m}.")

    if m == 0:
        return 1

    ratio = m / abs(lam)
    # ratio^{L+1} < target·(1 − ratio)
    needed = math.log(TRUNCATION_TARGET * (1 - ratio)) / math.log(ratio) - 1
    return max(1, min(MAX_TRUNCATION, math.ceil(needed)))


def z_truncated(walksum: WalkSum, lam: float) -> TruncatedSum:
    m = walksum.max_degree

    if abs(lam) <= m:
        raise errors.DivergenceError(f"Walk series diverges for |λ|={abs(lam)} <= m={m}.")

    length = walksum.max_length
    powers = (1.0 / lam) ** np.arange(1, length + 1)
    value = float(np.asarray(walksum.counts[1:], dtype=np.float64) @ powers)
    return TruncatedSum(value=value, error_bound=truncation_error(m, lam, length), length=length)


def _well_sums(
    g: Graph, well: Vertex, partner: Vertex, length: int
) -> tuple[WalkSum, WalkSum]:
    forbidden = frozenset({well, partner})
    return (
        count_walks_avoiding(g, well, well, forbidden, length),
        count_walks_avoiding(g, well, partner, forbidden, length),
    )


def well_system_residual(
    g: Graph, inv: Involution, well: Vertex, lam: float, q: float, length: int | None = None
) -> WellResidual:
    """
    Residuals of λ(Z_vv ± Z_vv′) = λ − Q.

    The symmetric one vanishes at π⁺ eigenvalues, the antisymmetric one at π⁻
    eigenvalues.
    """
    g = g.with_double_well(inv, well, q)
    m = max_degree(g)

    if length is None:
        length = default_truncation(m, lam)

    closed, crossing = _well_sums(g, well, inv(well), length)
    z_closed, z_crossing = z_truncated(closed, lam), z_truncated(crossing, lam)
    target = lam - q

    return WellResidual(
        sym=abs(lam * (z_closed.value + z_crossing.value) - target),
        antisym=abs(lam * (z_closed.value - z_crossing.value) - target),
        length=length,
        error_bound=2 * abs(lam) * z_closed.error_bound,
    )


def _scaled(counts: npt.NDArray[np.float64], lam: float) -> npt.NDArray[np.float64]:
    # c_k λ^{1−k} for k = 1..L
    exponents = np.arange(1, len(counts))
    terms: npt.NDArray[np.float64] = counts[1:] * (1.0 / lam) ** (exponents - 1)
    return terms


def gap_certificate_check(
    g: Graph, inv: Involution, well: Vertex, q: float, length: int | None = None
) -> GapCertificate:
    system = create_system(g, inv, well, q)
    spec = system.spectrum
    m, d = system.max_degree, system.distance
    lam1, lam2 = float(spec.eigenvalues[0]), float(spec.eigenvalues[1])

    if lam2 <= m:
        raise errors.PreconditionError(f"Gap certificate needs λ₂ > m, got λ₂={lam2}, m={m}.")

    assert spec.tags is not None

    if spec.tags[1] != Block.MINUS:
        raise errors.PreconditionError("Gap certificate needs λ₂ from the antisymmetric block.")

    if length is None:
        length = default_truncation(m, lam2)

    closed, crossing = _well_sums(system.graph, well, system.partner, length)
    n_k = np.asarray(closed.counts, dtype=np.float64)
    w_k = np.asarray(crossing.counts, dtype=np.float64)

    gap = lam1 - lam2
    closed_terms = float(np.sum(_scaled(n_k, lam1) - _scaled(n_k, lam2)))
    crossing_terms = float(np.sum(_scaled(w_k, lam1) + _scaled(w_k, lam2)))
    truncation = 2 * (
        lam1 * truncation_error(m, lam1, length) + lam2 * truncation_error(m, lam2, length)
    )
    tolerance = bounds.TOLERANCE + truncation

    rhs = lam1 ** (1 - d) + lam2 ** (1 - d)
    scaled_lhs = gap - closed_terms
    final_bound = bounds.gap_lower(q, m, d)
    final_holds = gap > final_bound if d >= 2 else gap >= final_bound - bounds.TOLERANCE

    return GapCertificate(
        q=q,
        m=m,
        d=d,
        length=length,
        lambda1=lam1,
        lambda2=lam2,
        gap=gap,
        intermediate_rhs=rhs,
        intermediate_holds=gap >= rhs - tolerance,
        scaled_lhs=scaled_lhs,
        scaled_holds=scaled_lhs >= rhs - tolerance,
        identity_residual=abs(gap - closed_terms - crossing_terms),
        truncation_error=truncation,
        final_bound=final_bound,
        final_holds=final_holds,
    )
