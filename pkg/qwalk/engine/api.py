import dataclasses
from functools import cached_property

from qwalk.engine import errors
from qwalk.engine.graph import (
    Graph,
    Involution,
    Vertex,
    VertexPartition,
    bfs_distances,
    max_degree,
    partition_vertices,
)
from qwalk.engine.hamiltonian import (
    BlockReduction,
    Hamiltonian,
    assemble_hamiltonian,
    block_reduce,
)
from qwalk.engine.spectral import Spectrum, hamiltonian_spectrum


@dataclasses.dataclass(frozen=True, eq=False)
class WellSystem:
    """A graph with an involution, a marked well pair and everything derived from it."""

    graph: Graph
    involution: Involution
    well: Vertex
    hamiltonian: Hamiltonian
    partition: VertexPartition
    reduction: BlockReduction
    spectrum: Spectrum

    def __repr__(self) -> str:
        return f"<WellSystem n={self.graph.n}, well={self.well}->{self.partner}>"

    @property
    def partner(self) -> Vertex:
        return self.involution(self.well)

    @property
    def q(self) -> float:
        return self.graph.potential[self.well]

    @cached_property
    def max_degree(self) -> int:
        return max_degree(self.graph)

    @cached_property
    def distance(self) -> int:
        return int(bfs_distances(self.graph, self.well)[self.partner])


def create_system(g: Graph, inv: Involution, well: Vertex, q: float | None = None) -> WellSystem:
    """
    Build the reduced system for ``g``.

    With ``q`` the potential is replaced by the double well (q at the well pair,
    zero elsewhere); without it the graph's own potential is used.
    """
    if q is not None:
        if q <= 0:
            raise errors.DomainError(f"Well potential must be positive, got {q}.")
        g = g.with_double_well(inv, well, q)

    partition = partition_vertices(g, inv, well)
    hamiltonian = assemble_hamiltonian(g)
    reduction = block_reduce(hamiltonian, partition)
    return WellSystem(
        graph=g,
        involution=inv,
        well=well,
        hamiltonian=hamiltonian,
        partition=partition,
        reduction=reduction,
        spectrum=hamiltonian_spectrum(hamiltonian, reduction),
    )
