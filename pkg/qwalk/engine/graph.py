import dataclasses
import enum
import math
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, TypeAlias

import networkx as nx
import numpy as np
import numpy.typing as npt

from qwalk.engine import errors
from qwalk.shared.compat import StrEnum

Vertex: TypeAlias = int
Edge: TypeAlias = tuple[Vertex, Vertex]
IntArray: TypeAlias = npt.NDArray[np.int64]

def normalize_edge(u: Vertex, w: Vertex) -> Edge:
    return (u, w) if u < w else (w, u)


@dataclasses.dataclass(frozen=True)
class Graph:
    """
    Simple connected graph on vertices 0..n-1 with a real potential per vertex.

    Instances are validated on construction: edge endpoints must be in range,
    self-loops are rejected, potentials must be finite and the graph must be
    connected.
    """

    n: int
    edges: frozenset[Edge]
    potential: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise errors.StructuralError(f"Graph needs at least one vertex, got n={self.n}.")

        if len(self.potential) != self.n:
            raise errors.StructuralError(
                f"Expected {self.n} potentials, got {len(self.potential)}."
            )

        for value in self.potential:
            if not math.isfinite(value):
                raise errors.StructuralError(f"Potential {value} is not finite.")

        for u, w in self.edges:
            if not (0 <= u < self.n and 0 <= w < self.n):
                raise errors.StructuralError(f"Edge ({u}, {w}) has an endpoint out of range.")

            if u == w:
                raise errors.StructuralError(f"Self-loop at vertex {u} is not allowed.")

            if u > w:
                raise errors.StructuralError(f"Edge ({u}, {w}) is not normalized.")

        if not nx.is_connected(self.network):
            unreachable = min(set(range(self.n)) - nx.node_connected_component(self.network, 0))
            raise errors.ConnectivityError(
                f"Graph is disconnected: vertex {unreachable} is unreachable from vertex 0."
            )

    def __repr__(self) -> str:
        return f"<Graph n={self.n}, {len(self.edges)} edges>"

    @classmethod
    def build(
        cls, n: int, edges: Iterable[tuple[int, int]], potential: Iterable[float] | None = None
    ) -> "Graph":
        normalized: set[Edge] = set()

        for u, w in edges:
            edge = normalize_edge(int(u), int(w))

            if edge in normalized:
                raise errors.StructuralError(f"Edge {edge} is listed more than once.")

            normalized.add(edge)

        values = tuple(float(q) for q in potential) if potential is not None else (0.0,) * n
        return cls(n=n, edges=frozenset(normalized), potential=values)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, potential_attr: str = "potential") -> "Graph":
        nodes = sorted(graph.nodes)
        index = {node: i for i, node in enumerate(nodes)}
        edges = [(index[u], index[w]) for u, w in graph.edges]
        potential = [float(graph.nodes[node].get(potential_attr, 0.0)) for node in nodes]
        return cls.build(len(nodes), edges, potential)

    def to_networkx(self, potential_attr: str = "potential") -> nx.Graph:
        graph = nx.Graph()

        for vertex, value in enumerate(self.potential):
            graph.add_node(vertex, **{potential_attr: value})

        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def network(self) -> nx.Graph:
        """networkx view of the graph, built once."""
        return self.to_networkx()

    @cached_property
    def neighbors(self) -> tuple[tuple[Vertex, ...], ...]:
        adjacency: list[list[Vertex]] = [[] for _ in range(self.n)]

        for u, w in sorted(self.edges):
            adjacency[u].append(w)
            adjacency[w].append(u)

        return tuple(tuple(sorted(items)) for items in adjacency)

    @cached_property
    def adjacency(self) -> IntArray:
        matrix = np.zeros((self.n, self.n), dtype=np.int64)

        for u, w in self.edges:
            matrix[u, w] = matrix[w, u] = 1

        matrix.setflags(write=False)
        return matrix

    def has_edge(self, u: Vertex, w: Vertex) -> bool:
        return normalize_edge(u, w) in self.edges

    def degree(self, vertex: Vertex) -> int:
        return len(self.neighbors[vertex])

    def induced_degree(self, vertex: Vertex, subset: frozenset[Vertex]) -> int:
        return sum(1 for neighbor in self.neighbors[vertex] if neighbor in subset)

    def with_potential(self, potential: Iterable[float]) -> "Graph":
        return dataclasses.replace(self, potential=tuple(float(q) for q in potential))

    def with_double_well(self, inv: "Involution", well: Vertex, q: float) -> "Graph":
        partner = inv(well)

        if partner == well:
            raise errors.DomainError(f"Well {well} is fixed by the involution.")

        potential = [0.0] * self.n
        potential[well] = potential[partner] = float(q)
        return self.with_potential(potential)


@dataclasses.dataclass(frozen=True)
class Involution:
    map: tuple[Vertex, ...]

    def __call__(self, vertex: Vertex) -> Vertex:
        return self.map[vertex]

    def __len__(self) -> int:
        return len(self.map)

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self.map)

    @classmethod
    def identity(cls, n: int) -> "Involution":
        return cls(tuple(range(n)))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[Vertex, Vertex]]) -> "Involution":
        mapping = list(range(n))

        for u, w in pairs:
            mapping[u], mapping[w] = w, u

        return cls(tuple(mapping))

    @property
    def is_identity(self) -> bool:
        return all(image == vertex for vertex, image in enumerate(self.map))

    @property
    def fixed_points(self) -> tuple[Vertex, ...]:
        return tuple(vertex for vertex, image in enumerate(self.map) if image == vertex)


@enum.unique
class ViolationKind(StrEnum):
    NOT_SELF_INVERSE = enum.auto()
    EDGE_NOT_PRESERVED = enum.auto()
    POTENTIAL_NOT_PRESERVED = enum.auto()


class Violation(NamedTuple):
    kind: ViolationKind
    message: str
    witness: tuple[Vertex, ...]


@dataclasses.dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, kind: ViolationKind) -> list[Violation]:
        return [violation for violation in self.violations if violation.kind == kind]


@dataclasses.dataclass(frozen=True)
class VertexPartition:
    """
    Split V = N ∪ σN ∪ S built around a marked well.

    ``sigma_n[j]`` is the image of ``n[j]``; the well is always ``n[0]``.
    """

    n: tuple[Vertex, ...]
    sigma_n: tuple[Vertex, ...]
    s: tuple[Vertex, ...]

    @property
    def k(self) -> int:
        return len(self.n)

    @property
    def size_s(self) -> int:
        return len(self.s)

    @property
    def well(self) -> Vertex:
        return self.n[0]

    @property
    def partner(self) -> Vertex:
        return self.sigma_n[0]

    @property
    def reduced(self) -> tuple[Vertex, ...]:
        """Vertex order of the plus block: N followed by S."""
        return self.n + self.s


def validate_involution(g: Graph, inv: Involution) -> Verdict:
    if len(inv) != g.n:
        raise errors.StructuralError(
            f"Involution has length {len(inv)}, graph has {g.n} vertices."
        )

    for vertex, image in enumerate(inv):
        if not 0 <= image < g.n:
            raise errors.StructuralError(f"Image {image} of vertex {vertex} is out of range.")

    violations: list[Violation] = []

    for vertex, image in enumerate(inv):
        if inv(image) != vertex:
            violations.append(
                Violation(
                    ViolationKind.NOT_SELF_INVERSE,
                    f"σ(σ({vertex})) = {inv(image)}, expected {vertex}.",
                    (vertex, image),
                )
            )

    for u, w in sorted(g.edges):
        if not g.has_edge(inv(u), inv(w)):
            violations.append(
                Violation(
                    ViolationKind.EDGE_NOT_PRESERVED,
                    f"Edge ({u}, {w}) maps to ({inv(u)}, {inv(w)}) which is not an edge.",
                    (u, w),
                )
            )

    for vertex, image in enumerate(inv):
        if g.potential[vertex] != g.potential[image]:
            violations.append(
                Violation(
                    ViolationKind.POTENTIAL_NOT_PRESERVED,
                    f"Potential {g.potential[vertex]} at vertex {vertex} differs from "
                    f"{g.potential[image]} at its image {image}.",
                    (vertex, image),
                )
            )

    return Verdict(tuple(violations))


def ensure_involution(g: Graph, inv: Involution) -> None:
    verdict = validate_involution(g, inv)

    if not verdict.ok:
        raise errors.InvalidInvolution(verdict.violations[0].message)


def bfs_distances(g: Graph, source: Vertex) -> IntArray:
    if not 0 <= source < g.n:
        raise errors.StructuralError(f"Source vertex {source} is out of range.")

    lengths = nx.single_source_shortest_path_length(g.network, source)

    if len(lengths) < g.n:
        unreachable = min(set(range(g.n)) - lengths.keys())
        raise errors.ConnectivityError(f"Vertex {unreachable} is unreachable from {source}.")

    return np.fromiter((lengths[vertex] for vertex in range(g.n)), dtype=np.int64, count=g.n)


def max_degree(g: Graph) -> int:
    return max(len(items) for items in g.neighbors)


def partition_vertices(g: Graph, inv: Involution, well: Vertex) -> VertexPartition:
    ensure_involution(g, inv)

    partner = inv(well)

    if partner == well:
        raise errors.DomainError(f"Well {well} is fixed by the involution.")

    from_well = bfs_distances(g, well)
    from_partner = bfs_distances(g, partner)
    chosen: list[Vertex] = []

    for vertex in range(g.n):
        image = inv(vertex)

        if image <= vertex:
            # Fixed vertices and pairs already seen from their smaller member.
            continue

        if from_well[vertex] < from_partner[vertex]:
            chosen.append(vertex)
        elif from_well[vertex] > from_partner[vertex]:
            chosen.append(image)
        else:
            chosen.append(vertex)

    n_part = (well,) + tuple(sorted(vertex for vertex in chosen if vertex != well))
    return VertexPartition(
        n=n_part,
        sigma_n=tuple(inv(vertex) for vertex in n_part),
        s=inv.fixed_points,
    )


def mirror_build(
    half: Graph, cross_edges: Iterable[tuple[Vertex, Vertex]]
) -> tuple[Graph, Involution]:
    """
    Glue ``half`` to a mirror copy of itself.

    Vertex ``i`` of the half keeps its index, its mirror gets ``i + half.n``.
    A cross pair ``(i, j)`` adds the edges ``i–j'`` and ``j–i'``.
    """
    size = half.n
    edges: set[Edge] = set()

    for u, w in half.edges:
        edges.add((u, w))
        edges.add((u + size, w + size))

    for i, j in cross_edges:
        if not (0 <= i < size and 0 <= j < size):
            raise errors.StructuralError(f"Cross pair ({i}, {j}) is out of range.")

        edges.add(normalize_edge(i, j + size))
        edges.add(normalize_edge(j, i + size))

    graph = Graph(n=2 * size, edges=frozenset(edges), potential=half.potential * 2)
    involution = Involution(tuple(range(size, 2 * size)) + tuple(range(size)))
    return graph, involution


def path_graph(n: int) -> tuple[Graph, Involution]:
    """Path 0–1–…–(n-1) with its mirror involution."""
    graph = Graph.from_networkx(nx.path_graph(n))
    return graph, Involution(tuple(n - 1 - vertex for vertex in range(n)))


def cycle_graph(n: int) -> tuple[Graph, Involution]:
    """Even cycle with the antipodal involution i -> i + n/2."""
    if n < 4 or n % 2:
        raise errors.StructuralError(f"Antipodal cycles need an even n >= 4, got {n}.")

    graph = Graph.from_networkx(nx.cycle_graph(n))
    return graph, Involution(tuple((vertex + n // 2) % n for vertex in range(n)))


def hypercube_graph(dimension: int) -> tuple[Graph, Involution]:
    """Hypercube with the antipodal (bitwise complement) involution."""
    if dimension < 1:
        raise errors.StructuralError(f"Hypercube dimension must be positive, got {dimension}.")

    # Sorted tuple labels enumerate the vertices in binary order.
    graph = Graph.from_networkx(nx.hypercube_graph(dimension))
    top = 2**dimension - 1
    return graph, Involution(tuple(top - vertex for vertex in range(graph.n)))


def star_graph(leaves: int) -> Graph:
    """Star with the centre at vertex 0."""
    return Graph.from_networkx(nx.star_graph(leaves))


def random_mirrored(
    rng: np.random.Generator,
    half_size: int,
    degree_cap: int = 6,
    extra_edges: int = 0,
    cross_pairs: int = 1,
) -> tuple[Graph, Involution]:
    """
    Random graph with an involution by construction.

    The half is a random spanning tree; at least one cross pair joins it to its
    mirror, then up to ``cross_pairs`` pairs and ``extra_edges`` chords are
    added while no vertex exceeds ``degree_cap``.
    """
    if half_size < 1:
        raise errors.StructuralError(f"Half size must be positive, got {half_size}.")

    if degree_cap < 3:
        raise errors.StructuralError(f"Degree cap must be at least 3, got {degree_cap}.")

    degrees = [0] * half_size
    edges: set[Edge] = set()

    for vertex in range(1, half_size):
        # Tree degrees stay below the cap so that a cross pair always fits.
        candidates = [u for u in range(vertex) if degrees[u] < degree_cap - 1]
        parent = int(rng.choice(candidates))
        edges.add((parent, vertex))
        degrees[parent] += 1
        degrees[vertex] += 1

    anchor = int(rng.integers(0, half_size))
    pairs: set[Edge] = {(anchor, anchor)}
    degrees[anchor] += 1

    for _ in range(cross_pairs - 1):
        i, j = (int(x) for x in rng.integers(0, half_size, size=2))
        pair = normalize_edge(i, j)
        touched = {i, j}

        if pair in pairs or any(degrees[x] >= degree_cap for x in touched):
            continue

        pairs.add(pair)
        for x in touched:
            degrees[x] += 1

    for _ in range(extra_edges):
        u, w = sorted(int(x) for x in rng.integers(0, half_size, size=2))

        if u == w or (u, w) in edges or degrees[u] >= degree_cap or degrees[w] >= degree_cap:
            continue

        edges.add((u, w))
        degrees[u] += 1
        degrees[w] += 1

    half = Graph(n=half_size, edges=frozenset(edges), potential=(0.0,) * half_size)
    return mirror_build(half, sorted(pairs))
