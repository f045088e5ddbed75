import dataclasses
from typing import Callable, Iterable, Iterator, NamedTuple, TypeAlias

import numpy as np

from qwalk.engine import errors
from qwalk.engine.graph import (
    Graph,
    Involution,
    Vertex,
    bfs_distances,
    cycle_graph,
    hypercube_graph,
    max_degree,
    path_graph,
    random_mirrored,
)

FamilyName: TypeAlias = str
FamilyDefinition: TypeAlias = Callable[[], Iterable["CorpusCase"]]
FamilyRegistry: TypeAlias = dict[FamilyName, "Family"]

RANDOM_SEED = 20240601
RANDOM_CASES = 50
RANDOM_MAX_VERTICES = 60
RANDOM_DEGREE_CAP = 6


class CorpusCase(NamedTuple):
    name: str
    graph: Graph
    involution: Involution
    well: Vertex

    @property
    def m(self) -> int:
        return max_degree(self.graph)

    @property
    def d(self) -> int:
        return int(bfs_distances(self.graph, self.well)[self.involution(self.well)])


@dataclasses.dataclass(frozen=True)
class Family:
    name: FamilyName
    cases: list[CorpusCase]

    def __iter__(self) -> Iterator[CorpusCase]:
        return iter(self.cases)

    def __len__(self) -> int:
        return len(self.cases)

    def __getitem__(self, name: str) -> CorpusCase:
        for case in self.cases:
            if case.name == name:
                return case

        raise KeyError(name)


_families: FamilyRegistry = {}


def register(func: FamilyDefinition) -> FamilyDefinition:
    family_name = func.__name__
    _families[family_name] = Family(name=family_name, cases=list(func()))
    return func


def get_families() -> FamilyRegistry:
    return _families


def get_family(name: FamilyName) -> Family:
    try:
        return _families[name]
    except KeyError:
        raise errors.DomainError(f"Unknown corpus family {name!r}.") from None


def all_cases() -> list[CorpusCase]:
    return [case for family in _families.values() for case in family]


@register
def paths() -> Iterable[CorpusCase]:
    for n in range(2, 9):
        graph, inv = path_graph(n)
        yield CorpusCase(f"P{n}", graph, inv, 0)


@register
def cycles() -> Iterable[CorpusCase]:
    for n in range(4, 11, 2):
        graph, inv = cycle_graph(n)
        yield CorpusCase(f"C{n}", graph, inv, 0)


@register
def hypercubes() -> Iterable[CorpusCase]:
    for dimension in range(2, 5):
        graph, inv = hypercube_graph(dimension)
        yield CorpusCase(f"Q{dimension}", graph, inv, 0)


@register
def mirrored() -> Iterable[CorpusCase]:
    rng = np.random.default_rng(RANDOM_SEED)

    for index in range(RANDOM_CASES):
        half_size = int(rng.integers(2, RANDOM_MAX_VERTICES // 2 + 1))
        graph, inv = random_mirrored(
            rng,
            half_size,
            degree_cap=RANDOM_DEGREE_CAP,
            extra_edges=int(rng.integers(0, half_size // 2 + 1)),
            cross_pairs=int(rng.integers(1, 4)),
        )
        yield CorpusCase(f"R{index:02d}", graph, inv, int(rng.integers(0, half_size)))
