import dataclasses
import enum
import math
from functools import cached_property
from typing import NamedTuple, TypeAlias

import numpy as np
import numpy.typing as npt

from qwalk.engine import errors
from qwalk.engine.graph import Graph, VertexPartition
from qwalk.shared.compat import StrEnum

FloatArray: TypeAlias = npt.NDArray[np.float64]

RESIDUAL_TOLERANCE = 1e-8
SQRT2 = math.sqrt(2.0)


@enum.unique
class Block(StrEnum):
    PLUS = enum.auto()
    MINUS = enum.auto()


def matrix_norm(matrix: FloatArray) -> float:
    """Maximum absolute row sum, an upper bound on the spectral norm."""
    if matrix.size == 0:
        return 0.0
    return float(np.abs(matrix).sum(axis=1).max())


@dataclasses.dataclass(frozen=True, eq=False)
class Hamiltonian:
    graph: Graph
    matrix: FloatArray

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def norm(self) -> float:
        return matrix_norm(self.matrix)

    def residual(self, value: float, vector: FloatArray) -> float:
        return float(np.linalg.norm(self.matrix @ vector - value * vector))


@dataclasses.dataclass(frozen=True, eq=False)
class BlockReduction:
    """
    H⁺ (as stated and symmetrized) and H⁻ for one vertex partition.

    Plus-block coordinates follow ``partition.reduced`` (N then S), minus-block
    coordinates follow ``partition.n``.
    """

    hamiltonian: Hamiltonian
    partition: VertexPartition
    hplus_asym: FloatArray
    hplus_sym: FloatArray
    hminus: FloatArray

    @cached_property
    def scaling(self) -> FloatArray:
        """Diagonal of D with H⁺_sym = D⁻¹·H⁺_asym·D."""
        return np.concatenate(
            [np.ones(self.partition.k), np.full(self.partition.size_s, SQRT2)]
        )

    def block(self, which: Block) -> FloatArray:
        return self.hplus_sym if which == Block.PLUS else self.hminus


class Disc(NamedTuple):
    center: float
    radius: float

    @property
    def lower(self) -> float:
        return self.center - self.radius

    @property
    def upper(self) -> float:
        return self.center + self.radius

    def contains(self, value: float, tolerance: float = 0.0) -> bool:
        return self.lower - tolerance <= value <= self.upper + tolerance


def assemble_hamiltonian(g: Graph) -> Hamiltonian:
    matrix = g.adjacency.astype(np.float64) + np.diag(np.asarray(g.potential, dtype=np.float64))
    matrix.setflags(write=False)
    return Hamiltonian(graph=g, matrix=matrix)


def block_reduce(h: Hamiltonian, part: VertexPartition) -> BlockReduction:
    if part.k * 2 + part.size_s != h.n:
        raise errors.StructuralError(
            f"Partition covers {part.k * 2 + part.size_s} vertices, Hamiltonian has {h.n}."
        )

    n_idx, sigma_idx, s_idx = list(part.n), list(part.sigma_n), list(part.s)
    k, s = part.k, part.size_s
    matrix = h.matrix

    h_prime = matrix[np.ix_(n_idx, n_idx)]
    a_sigma = matrix[np.ix_(n_idx, sigma_idx)]
    a_s = matrix[np.ix_(n_idx, s_idx)]
    h_s = matrix[np.ix_(s_idx, s_idx)]

    hplus_asym = np.zeros((k + s, k + s))
    hplus_asym[:k, :k] = h_prime + a_sigma
    hplus_asym[:k, k:] = a_s
    hplus_asym[k:, :k] = 2 * a_s.T
    hplus_asym[k:, k:] = h_s

    hplus_sym = hplus_asym.copy()
    hplus_sym[:k, k:] = SQRT2 * a_s
    hplus_sym[k:, :k] = SQRT2 * a_s.T

    hminus = h_prime - a_sigma

    for block in (hplus_asym, hplus_sym, hminus):
        block.setflags(write=False)

    return BlockReduction(
        hamiltonian=h,
        partition=part,
        hplus_asym=hplus_asym,
        hplus_sym=hplus_sym,
        hminus=hminus,
    )


def lift_eigenpair(
    reduction: BlockReduction,
    which: Block,
    reduced_vector: FloatArray,
    symmetric: bool = True,
) -> FloatArray:
    """
    Extend an eigenvector of H⁺ or H⁻ to a unit eigenvector of H.

    Plus vectors become [a, a, b], minus vectors [c, -c, 0] in N/σN/S order.
    With ``symmetric`` the plus vector is taken as an eigenvector of the
    symmetrized block and mapped back through D first.
    """
    part = reduction.partition
    h = reduction.hamiltonian
    vector = np.asarray(reduced_vector, dtype=np.float64)
    lifted = np.zeros(h.n)

    if which == Block.PLUS:
        size = part.k + part.size_s

        if vector.shape != (size,):
            raise errors.StructuralError(f"Plus block vector must have length {size}.")

        if symmetric:
            vector = vector * reduction.scaling

        lifted[list(part.n)] = vector[: part.k]
        lifted[list(part.sigma_n)] = vector[: part.k]
        lifted[list(part.s)] = vector[part.k :]
    else:
        if vector.shape != (part.k,):
            raise errors.StructuralError(f"Minus block vector must have length {part.k}.")

        lifted[list(part.n)] = vector
        lifted[list(part.sigma_n)] = -vector

    length = float(np.linalg.norm(lifted))

    if length == 0.0:
        raise errors.NumericError("Cannot lift a zero vector.")

    lifted /= length
    value = float(lifted @ h.matrix @ lifted)
    residual = h.residual(value, lifted)

    if residual > RESIDUAL_TOLERANCE * max(1.0, h.norm):
        raise errors.NumericError(
            f"Lifted {which} vector is not an eigenvector of H: residual {residual:.3e}."
        )

    return lifted


def gershgorin_intervals(h: Hamiltonian) -> list[Disc]:
    matrix = h.matrix
    centers = np.diag(matrix)
    radii = np.abs(matrix).sum(axis=1) - np.abs(centers)
    return [Disc(float(c), float(r)) for c, r in zip(centers, radii)]
