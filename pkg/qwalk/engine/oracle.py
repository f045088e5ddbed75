"""
Slow, independent reference computations.

Nothing here reuses the eigensolver or the masked walk recurrence, so every
result can be held against the main implementation of the same quantity.
"""

import math

import networkx as nx
import numpy as np
import numpy.typing as npt
from loguru import logger

from qwalk.engine import errors
from qwalk.engine.graph import Graph, Involution, Vertex
from qwalk.engine.hamiltonian import FloatArray, Hamiltonian
from qwalk.engine.spectral import ComplexArray, SearchResult

MAX_INVOLUTION_VERTICES = 12
MAX_DFS_VERTICES = 8
MAX_DFS_LENGTH = 10
SCALED_NORM = 0.5
TAYLOR_CUTOFF = 1e-16
MAX_TAYLOR_TERMS = 60


def matexp_unitary(h: Hamiltonian, t: float) -> ComplexArray:
    """e^{itH} by a Taylor series on a scaled matrix followed by repeated squaring."""
    generator = 1j * t * h.matrix.astype(np.complex128)
    norm = float(np.abs(generator).sum(axis=0).max()) if generator.size else 0.0
    squarings = max(0, math.ceil(math.log2(norm / SCALED_NORM))) if norm > SCALED_NORM else 0
    scaled = generator / 2**squarings

    identity = np.eye(h.n, dtype=np.complex128)
    result = identity.copy()
    term = identity

    for k in range(1, MAX_TAYLOR_TERMS + 1):
        term = term @ scaled / k
        result += term

        if float(np.abs(term).max(initial=0.0)) < TAYLOR_CUTOFF:
            break

    for _ in range(squarings):
        result = result @ result

    unitary: ComplexArray = result
    return unitary


def matexp_probability(h: Hamiltonian, u: Vertex, v: Vertex, t: float) -> float:
    return float(abs(matexp_unitary(h, t)[v, u]) ** 2)


def exhaustive_fidelity(
    h: Hamiltonian, u: Vertex, v: Vertex, horizon: float, step: float
) -> SearchResult:
    """Step the state e_u forward by e^{i·step·H} and keep the best p(t) at v."""
    if horizon <= 0 or step <= 0:
        raise errors.DomainError("Horizon and step must be positive.")

    if step > horizon:
        raise errors.DomainError(f"Step {step} exceeds horizon {horizon}.")

    propagator = matexp_unitary(h, step)
    state = np.zeros(h.n, dtype=np.complex128)
    state[u] = 1.0
    count = int(math.floor(horizon / step + 1e-9)) + 1
    best_index, best_probability = 0, -1.0

    for index in range(count):
        probability = float(abs(state[v]) ** 2)

        if probability > best_probability:
            best_index, best_probability = index, probability

        state = propagator @ state

    return SearchResult(time=best_index * step, probability=best_probability, evaluated=count)


def enumerate_involutions(g: Graph) -> list[Involution]:
    """
    Every potential-preserving automorphism of order at most two.

    The identity is always first; the rest follow in lexicographic order.
    """
    if g.n > MAX_INVOLUTION_VERTICES:
        raise errors.SizeError(
            f"Involution search is limited to {MAX_INVOLUTION_VERTICES} vertices, got {g.n}."
        )

    graph = g.to_networkx()
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        graph, graph, node_match=lambda a, b: a["potential"] == b["potential"]
    )
    found: set[tuple[Vertex, ...]] = set()

    for mapping in matcher.isomorphisms_iter():
        image = tuple(mapping[vertex] for vertex in range(g.n))

        if all(image[image[vertex]] == vertex for vertex in range(g.n)):
            found.add(image)

    logger.debug("Found {count} involutions on {n} vertices.", count=len(found), n=g.n)
    identity = Involution.identity(g.n)
    others = sorted(image for image in found if image != identity.map)
    return [identity] + [Involution(image) for image in others]


def enumerate_walks_dfs(
    g: Graph, source: Vertex, target: Vertex, forbidden_interior: frozenset[Vertex], length: int
) -> npt.NDArray[np.int64]:
    if g.n > MAX_DFS_VERTICES or length > MAX_DFS_LENGTH:
        raise errors.SizeError(
            f"Walk enumeration is limited to n <= {MAX_DFS_VERTICES} and "
            f"L <= {MAX_DFS_LENGTH}, got n={g.n}, L={length}."
        )

    if length < 0:
        raise errors.DomainError(f"Walk length must be nonnegative, got {length}.")

    counts = [0] * (length + 1)
    counts[0] = int(source == target)

    def extend(vertex: Vertex, steps: int) -> None:
        for neighbor in g.neighbors[vertex]:
            if neighbor == target:
                counts[steps + 1] += 1

            if steps + 1 < length and neighbor not in forbidden_interior:
                extend(neighbor, steps + 1)

    if length >= 1:
        extend(source, 0)

    return np.asarray(counts, dtype=np.int64)


def reference_eigenvalues(matrix: FloatArray) -> FloatArray:
    """LAPACK eigenvalues in descending order."""
    values: FloatArray = np.linalg.eigvalsh(np.asarray(matrix, dtype=np.float64))[::-1]
    return values
