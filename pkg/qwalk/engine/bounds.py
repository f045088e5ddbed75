"""
Certified lower bounds for state transfer between a well and its mirror image.

Every bound here is evaluated from the graph structure and the well potential
alone; ``certify`` puts each one next to the value the spectral module
computes so the inequalities can be checked on concrete graphs.
"""

import dataclasses
import enum
import math
from typing import NamedTuple

import numpy as np
from loguru import logger

from qwalk.engine import errors, spectral
from qwalk.engine.api import WellSystem, create_system
from qwalk.engine.graph import (
    Graph,
    Involution,
    Vertex,
    VertexPartition,
    bfs_distances,
    partition_vertices,
)
from qwalk.engine.hamiltonian import Block, BlockReduction, FloatArray
from qwalk.shared.compat import StrEnum

TOLERANCE = 1e-9


@enum.unique
class Leading(StrEnum):
    FIRST = enum.auto()
    SECOND = enum.auto()


@enum.unique
class BoundKind(StrEnum):
    LOWER = enum.auto()
    UPPER = enum.auto()


@enum.unique
class Witness(StrEnum):
    T_STAR = enum.auto()
    SEARCH = enum.auto()
    NEITHER = enum.auto()


@dataclasses.dataclass(frozen=True, eq=False)
class TestVector:
    """
    Trial vector for the Rayleigh quotient of one reduced block.

    Plus vectors live on N ∪ S (``partition.reduced`` order), minus vectors on N.
    """

    kind: Block
    vertices: tuple[Vertex, ...]
    entries: FloatArray
    partition: VertexPartition

    def lift(self, n: int) -> FloatArray:
        """Duplicate onto all n vertices: [y, y, y_S] for plus, [y, -y, 0] for minus."""
        part = self.partition
        full = np.zeros(n)

        if self.kind == Block.PLUS:
            full[list(part.n)] = self.entries[: part.k]
            full[list(part.sigma_n)] = self.entries[: part.k]
            full[list(part.s)] = self.entries[part.k :]
        else:
            full[list(part.n)] = self.entries
            full[list(part.sigma_n)] = -self.entries

        return full


class MinPotential(NamedTuple):
    q_formula: float
    q_sufficient: float
    c: float


class ShellNorm(NamedTuple):
    shells: float
    exact: float


@dataclasses.dataclass(frozen=True)
class Bound:
    value: float | None
    computed: float | None
    kind: BoundKind = BoundKind.LOWER
    strict: bool = False
    # Failures are reported as known limitations instead of violations.
    limitation: bool = False

    @property
    def applicable(self) -> bool:
        return self.value is not None and self.computed is not None

    @property
    def holds(self) -> bool | None:
        if self.value is None or self.computed is None:
            return None

        if self.kind == BoundKind.LOWER:
            if self.strict:
                return self.computed > self.value
            return self.computed >= self.value - TOLERANCE

        if self.strict:
            return self.computed < self.value
        return self.computed <= self.value + TOLERANCE


@dataclasses.dataclass(frozen=True)
class BoundReport:
    q: float
    m: int
    d: int
    well: Vertex
    partner: Vertex
    gap_resolved: bool
    lambda2_in_minus: bool | None
    adjacent_wells: bool
    gap_equality: bool
    lambda1: Bound
    lambda1_rayleigh: Bound
    lambda2: Bound
    lambda2_plain: Bound
    gap: Bound
    time: Bound
    phi1: Bound
    phi2: Bound
    phi1_rayleigh: Bound
    phi2_rayleigh: Bound
    fidelity: Bound
    theorem: Bound
    norm: Bound

    def bounds(self) -> dict[str, Bound]:
        return {
            field.name: getattr(self, field.name)
            for field in dataclasses.fields(self)
            if isinstance(getattr(self, field.name), Bound)
        }

    @property
    def all_hold(self) -> bool:
        return not self.violations()

    def violations(self) -> list[str]:
        return [
            name
            for name, bound in self.bounds().items()
            if bound.applicable and not bound.holds and not bound.limitation
        ]

    def limitations(self) -> list[str]:
        """Limitation bounds that fail, which only happens for adjacent wells."""
        return [
            name
            for name, bound in self.bounds().items()
            if bound.applicable and not bound.holds and bound.limitation
        ]


class PathCrossCheck(NamedTuple):
    bound: float
    p_at_tstar: float
    search_time: float | None
    search_probability: float | None
    witness: Witness


def _distances(g: Graph, part: VertexPartition) -> tuple[list[int], list[int]]:
    return (
        [int(x) for x in bfs_distances(g, part.well)],
        [int(x) for x in bfs_distances(g, part.partner)],
    )


def build_test_vector(
    g: Graph, inv: Involution, well: Vertex, kind: Block, q: float
) -> TestVector:
    if q <= 0:
        raise errors.DomainError(f"Well potential must be positive, got {q}.")

    part = partition_vertices(g, inv, well)
    from_well, from_partner = _distances(g, part)

    if kind == Block.PLUS:
        vertices = part.reduced
        entries = [q ** -min(from_well[x], from_partner[x]) for x in vertices]
    else:
        vertices = part.n
        entries = [
            q ** -from_well[x] if from_well[x] < from_partner[x] else 0.0 for x in vertices
        ]

    return TestVector(
        kind=kind, vertices=vertices, entries=np.asarray(entries, dtype=np.float64), partition=part
    )


def _degree_correction(g: Graph, y: TestVector, subset: frozenset[Vertex]) -> float:
    squares = y.entries**2
    # The well's own term is the literal 1 in the numerator.
    return 1.0 + sum(
        (g.induced_degree(vertex, subset) - 1) * square
        for vertex, square in zip(y.vertices[1:], squares[1:])
    )


def lambda1_lower(g: Graph, inv: Involution, well: Vertex, q: float) -> float:
    y = build_test_vector(g, inv, well, Block.PLUS, q)
    subset = frozenset(y.vertices)
    return q + _degree_correction(g, y, subset) / (q * float(np.sum(y.entries**2)))


def lambda2_lower(g: Graph, inv: Involution, well: Vertex, q: float) -> float:
    y = build_test_vector(g, inv, well, Block.MINUS, q)
    subset = frozenset(y.partition.n + y.partition.sigma_n)
    return q - _degree_correction(g, y, subset) / float(np.sum(y.entries**2))


def lambda2_plain(q: float, m: int) -> float:
    """The cruder consequence λ₂ > Q − m."""
    return q - m


def rayleigh_quotient(matrix: FloatArray, vector: FloatArray) -> float:
    vector = np.asarray(vector, dtype=np.float64)
    norm = float(vector @ vector)

    if norm == 0.0:
        raise errors.DomainError("Rayleigh quotient of a zero vector is undefined.")

    return float(vector @ matrix @ vector) / norm


def mapped_test_vector(reduction: BlockReduction, y: TestVector) -> FloatArray:
    """
    Carry a plus test vector into the coordinates of the symmetrized H⁺.

    The Rayleigh quotient of the result on H⁺_sym equals that of the lifted
    vector on H.
    """
    if y.kind != Block.PLUS:
        raise errors.DomainError("Only plus test vectors are mapped through D⁻¹.")
    mapped: FloatArray = y.entries / reduction.scaling
    return mapped


def _centre(q: float, m: int) -> float:
    return math.sqrt(0.5 - m / (2 * q * q))


def phi_lower(q: float, m: int, which: Leading) -> float:
    if q <= 2 * m:
        raise errors.PreconditionError(f"Eigenvector bounds need q > 2m, got q={q}, m={m}.")

    if which == Leading.FIRST:
        return _centre(q, m) - math.sqrt(m / (q - m))
    return _centre(q, m) - math.sqrt((m + 1) / (q - m - 1))


def fidelity_lower(q: float, m: int) -> float | None:
    """
    Lower bound on p(t*) or ``None`` when it says nothing.

    The bound squares 4L² − 1, so it is only meaningful while L ≥ 1/2.
    """
    leading = phi_lower(q, m, Leading.SECOND)

    if leading < 0.5:
        return None

    return (4 * leading**2 - 1) ** 2


def min_potential(epsilon: float, m: int) -> MinPotential:
    if not 0 < epsilon < 1:
        raise errors.DomainError(f"Epsilon must lie in (0, 1), got {epsilon}.")

    if m < 0:
        raise errors.DomainError(f"Maximum degree must be nonnegative, got {m}.")

    c = 0.5 * (0.5 - (1 + math.sqrt(1 - epsilon)) / 4) ** 2
    return MinPotential(
        q_formula=(m + 1) * (c + 1) / c,
        q_sufficient=256 * (m + 1) / epsilon**2,
        c=c,
    )


def _distance_scale(q: float, m: int, d: int) -> float:
    """(q + m)^{d-1}, infinite once it leaves the float range."""
    if d < 1:
        raise errors.DomainError(f"Well distance must be at least 1, got {d}.")

    try:
        return float((q + m) ** (d - 1))
    except OverflowError:
        return math.inf


def gap_lower(q: float, m: int, d: int) -> float:
    return 2 / _distance_scale(q, m, d)


def time_upper_bound(q: float, m: int, d: int) -> float:
    return math.pi / 2 * _distance_scale(q, m, d)


def norm_bound_D(q: float, m: int) -> float:  # noqa: N802
    if q <= math.sqrt(m):
        raise errors.DivergenceError(f"Shell series diverges for q={q} <= sqrt({m}).")
    return 2 / (1 - m / q**2)


def shell_norm(g: Graph, inv: Involution, well: Vertex, q: float) -> ShellNorm:
    """
    Squared norm of the duplicated plus test vector.

    ``shells`` counts every shell of N ∪ S twice, ``exact`` is the true norm.
    """
    y = build_test_vector(g, inv, well, Block.PLUS, q)
    full = y.lift(g.n)
    return ShellNorm(shells=2 * float(np.sum(y.entries**2)), exact=float(full @ full))


def theorem_fidelity(q: float, m: int) -> float:
    if q < m:
        raise errors.PreconditionError(f"The closed fidelity form needs q >= m, got q={q}.")
    return 1 - 16 * math.sqrt(m + 1) / math.sqrt(q)


def path_fidelity_bound(q: float) -> float:
    if q < math.sqrt(2):
        raise errors.PreconditionError(f"The path bound needs q >= sqrt(2), got {q}.")
    return ((q * q - 2) / (q * q)) ** 2


def phi_rayleigh_estimate(system: WellSystem, kind: Block) -> tuple[float, int]:
    """
    Cauchy–Schwarz estimate of the top eigenvector of a block at the well.

    Returns the estimate together with the spectrum index of the eigenvector it
    bounds.
    """
    y = build_test_vector(system.graph, system.involution, system.well, kind, system.q)
    full = y.lift(system.graph.n)
    norm = float(full @ full)
    spec = system.spectrum
    indices = spec.block_indices(kind)
    top = float(spec.eigenvalues[indices[0]])
    residual = 0.0

    if len(indices) > 1:
        quotient = rayleigh_quotient(system.hamiltonian.matrix, full)
        separation = top - float(spec.eigenvalues[indices[1]])

        if separation > 0:
            residual = min(max(top - quotient, 0.0) * norm / separation, norm)
        else:
            residual = norm

    return (1 - math.sqrt(residual)) / math.sqrt(norm), indices[0]


def certify(g: Graph, inv: Involution, well: Vertex, q: float) -> BoundReport:
    system = create_system(g, inv, well, q)
    spec = system.spectrum
    m, d = system.max_degree, system.distance
    partner = system.partner
    lam1, lam2 = float(spec.eigenvalues[0]), float(spec.eigenvalues[1])
    resolved = spec.gap_resolved

    t_star: float | None = None
    p_star: float | None = None

    if resolved:
        t_star = spectral.optimal_time(spec)
        p_star = spectral.transfer_probability(spec, well, partner, t_star).probability
    else:
        logger.info(
            "Gap {gap:.3e} at q={q} is below double precision resolution.", gap=lam1 - lam2, q=q
        )

    y = build_test_vector(g, inv, well, Block.PLUS, q)
    mapped = mapped_test_vector(system.reduction, y)
    rayleigh = rayleigh_quotient(system.reduction.hplus_sym, mapped)
    phi1_entry = abs(float(spec.eigenvectors[well, 0]))
    phi2_entry = abs(float(spec.eigenvectors[well, 1]))

    phi1_value = phi2_value = fidelity_value = None

    if q > 2 * m:
        phi1_value = phi_lower(q, m, Leading.FIRST)
        phi2_value = phi_lower(q, m, Leading.SECOND)
        fidelity_value = fidelity_lower(q, m)

    plus_estimate, plus_index = phi_rayleigh_estimate(system, Block.PLUS)
    minus_estimate, minus_index = phi_rayleigh_estimate(system, Block.MINUS)
    gap_value = gap_lower(q, m, d)
    gap_computed = lam1 - lam2 if resolved else None
    assert spec.tags is not None
    # Neighbours of adjacent wells other than each other pull the gap below 2.
    adjacent = d == 1

    return BoundReport(
        q=q,
        m=m,
        d=d,
        well=well,
        partner=partner,
        gap_resolved=resolved,
        lambda2_in_minus=spec.tags[1] == Block.MINUS if resolved else None,
        adjacent_wells=adjacent,
        gap_equality=(
            adjacent and gap_computed is not None and abs(gap_computed - gap_value) <= TOLERANCE
        ),
        lambda1=Bound(lambda1_lower(g, inv, well, q), lam1),
        lambda1_rayleigh=Bound(rayleigh, lam1),
        lambda2=Bound(lambda2_lower(g, inv, well, q), lam2),
        lambda2_plain=Bound(lambda2_plain(q, m), lam2),
        gap=Bound(gap_value, gap_computed, strict=not adjacent, limitation=adjacent),
        time=Bound(
            time_upper_bound(q, m, d),
            t_star,
            kind=BoundKind.UPPER,
            strict=not adjacent,
            limitation=adjacent,
        ),
        phi1=Bound(phi1_value, phi1_entry),
        phi2=Bound(phi2_value, phi2_entry),
        phi1_rayleigh=Bound(plus_estimate, abs(float(spec.eigenvectors[well, plus_index]))),
        phi2_rayleigh=Bound(minus_estimate, abs(float(spec.eigenvectors[well, minus_index]))),
        fidelity=Bound(fidelity_value, p_star),
        theorem=Bound(theorem_fidelity(q, m) if q >= m else None, p_star),
        norm=Bound(
            norm_bound_D(q, m) if q > math.sqrt(m) else None,
            shell_norm(g, inv, well, q).shells,
            kind=BoundKind.UPPER,
        ),
    )


def path_cross_check(g: Graph, inv: Involution, well: Vertex, q: float) -> PathCrossCheck:
    system = create_system(g, inv, well, q)
    spec = system.spectrum
    t_star = spectral.optimal_time(spec)
    p_star = spectral.transfer_probability(spec, well, system.partner, t_star).probability
    bound = path_fidelity_bound(q)

    if p_star > bound:
        return PathCrossCheck(
            bound=bound,
            p_at_tstar=p_star,
            search_time=None,
            search_probability=None,
            witness=Witness.T_STAR,
        )

    logger.debug("p(t*) = {p:.6f} misses {bound:.6f}, searching the grid.", p=p_star, bound=bound)
    search = spectral.fidelity_search(spec, well, system.partner)

    return PathCrossCheck(
        bound=bound,
        p_at_tstar=p_star,
        search_time=search.time,
        search_probability=search.probability,
        witness=Witness.SEARCH if search.probability > bound else Witness.NEITHER,
    )
