import math

import networkx as nx
import numpy as np
import pytest

from qwalk.engine import errors, graph
from qwalk.engine.graph import Graph, Involution, ViolationKind


def test_validate_involution_accepts_path_mirror(p3):
    g, inv = p3

    verdict = graph.validate_involution(g, inv)

    assert verdict.ok
    assert verdict.violations == ()


def test_validate_involution_reports_edge_not_preserved(p3):
    g, _ = p3
    inv = Involution((1, 0, 2))

    verdict = graph.validate_involution(g, inv)
    edge_violations = verdict.of_kind(ViolationKind.EDGE_NOT_PRESERVED)

    assert not verdict.ok
    assert [v.witness for v in edge_violations] == [(1, 2)]


def test_validate_involution_reports_potential_not_preserved():
    g = Graph.build(2, [(0, 1)], [1.0, 2.0])

    verdict = graph.validate_involution(g, Involution((1, 0)))

    assert [v.kind for v in verdict.violations] == [
        ViolationKind.POTENTIAL_NOT_PRESERVED,
        ViolationKind.POTENTIAL_NOT_PRESERVED,
    ]


def test_validate_involution_reports_map_of_higher_order():
    triangle = Graph.build(3, [(0, 1), (1, 2), (0, 2)])

    verdict = graph.validate_involution(triangle, Involution((1, 2, 0)))

    assert verdict.of_kind(ViolationKind.NOT_SELF_INVERSE)
    assert not verdict.of_kind(ViolationKind.EDGE_NOT_PRESERVED)


def test_validate_involution_rejects_length_mismatch(p3):
    g, _ = p3

    with pytest.raises(errors.StructuralError):
        graph.validate_involution(g, Involution((1, 0)))


def test_ensure_involution_raises_on_violation(p3):
    g, _ = p3

    with pytest.raises(errors.InvalidInvolution):
        graph.ensure_involution(g, Involution((1, 0, 2)))


@pytest.mark.parametrize(
    "edges,potential,exc",
    [
        ([(0, 1)], [0.0, 0.0, 0.0], errors.ConnectivityError),
        ([(0, 0), (0, 1)], [0.0, 0.0], errors.StructuralError),
        ([(0, 1), (1, 0)], [0.0, 0.0], errors.StructuralError),
        ([(0, 5)], [0.0, 0.0], errors.StructuralError),
        ([(0, 1)], [0.0, math.inf], errors.StructuralError),
    ],
)
def test_graph_build_rejects_invalid_input(edges, potential, exc):
    with pytest.raises(exc):
        Graph.build(len(potential), edges, potential)


def test_graph_adjacency_is_read_only(p3):
    g, _ = p3

    with pytest.raises(ValueError):
        g.adjacency[0, 0] = 1


def test_graph_networkx_round_trip():
    g = Graph.build(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [1.0, 0.0, 1.0, 0.0])

    again = Graph.from_networkx(g.to_networkx())

    assert again == g


def test_with_double_well_sets_only_the_well_pair(c4):
    g, inv = c4

    wells = g.with_double_well(inv, 1, 7.5)

    assert wells.potential == (0.0, 7.5, 0.0, 7.5)


def test_with_double_well_rejects_fixed_well(p3):
    g, inv = p3

    with pytest.raises(errors.DomainError):
        g.with_double_well(inv, 1, 4.0)


def test_partition_p2(p2):
    g, inv = p2

    part = graph.partition_vertices(g, inv, 0)

    assert (part.n, part.sigma_n, part.s) == ((0,), (1,), ())


def test_partition_p3(p3):
    g, inv = p3

    part = graph.partition_vertices(g, inv, 0)

    assert (part.n, part.sigma_n, part.s) == ((0,), (2,), (1,))
    assert part.reduced == (0, 1)


def test_partition_breaks_ties_towards_smaller_index(c4):
    g, inv = c4

    part = graph.partition_vertices(g, inv, 0)

    assert part.n == (0, 1)
    assert part.sigma_n == (2, 3)
    assert part.s == ()


def test_partition_puts_well_first_even_when_not_smallest(c4):
    g, inv = c4

    part = graph.partition_vertices(g, inv, 3)

    assert part.well == 3
    assert part.partner == 1
    assert set(part.n) == {3, 0}


def test_partition_rejects_fixed_well(p3):
    g, inv = p3

    with pytest.raises(errors.DomainError):
        graph.partition_vertices(g, inv, 1)


def test_bfs_distances():
    p3, _ = graph.path_graph(3)
    c4, _ = graph.cycle_graph(4)
    q3, _ = graph.hypercube_graph(3)

    assert graph.bfs_distances(p3, 0).tolist() == [0, 1, 2]
    assert graph.bfs_distances(c4, 0).tolist() == [0, 1, 2, 1]
    assert graph.bfs_distances(q3, 0)[7] == 3


@pytest.mark.parametrize(
    "g,expected",
    [
        (graph.path_graph(2)[0], 1),
        (graph.path_graph(5)[0], 2),
        (graph.star_graph(4), 4),
    ],
)
def test_max_degree(g, expected):
    assert graph.max_degree(g) == expected


def test_mirror_build_single_vertex_gives_p2():
    half = Graph.build(1, [], [5.0])

    g, inv = graph.mirror_build(half, [(0, 0)])

    assert g.edges == {(0, 1)}
    assert g.potential == (5.0, 5.0)
    assert inv.map == (1, 0)


def test_mirror_build_edge_with_midpoint_cross_gives_p4():
    half = Graph.build(2, [(0, 1)], [4.0, 0.0])

    g, inv = graph.mirror_build(half, [(1, 1)])

    assert nx.is_isomorphic(g.to_networkx(), nx.path_graph(4))
    assert graph.validate_involution(g, inv).ok


def test_mirror_build_without_cross_edges_is_disconnected():
    half = Graph.build(2, [(0, 1)])

    with pytest.raises(errors.ConnectivityError):
        graph.mirror_build(half, [])


def test_cycle_graph_requires_even_length():
    with pytest.raises(errors.StructuralError):
        graph.cycle_graph(5)


@pytest.mark.parametrize("dimension", [1, 2, 3, 4])
def test_hypercube_involution_is_antipodal(dimension):
    g, inv = graph.hypercube_graph(dimension)

    assert graph.validate_involution(g, inv).ok
    assert graph.bfs_distances(g, 0)[inv(0)] == dimension


@pytest.mark.parametrize("seed", range(20))
def test_random_mirrored_properties(seed):
    rng = np.random.default_rng(seed)
    half_size = int(rng.integers(1, 15))

    g, inv = graph.random_mirrored(rng, half_size, extra_edges=3, cross_pairs=3)
    well = int(rng.integers(0, half_size))
    part = graph.partition_vertices(g, inv, well)
    distances = graph.bfs_distances(g, well)

    assert graph.validate_involution(g, inv).ok
    assert all(inv(inv(v)) == v for v in range(g.n))
    assert graph.max_degree(g) <= 6
    assert sorted(part.n + part.sigma_n + part.s) == list(range(g.n))
    assert all(abs(distances[u] - distances[w]) <= 1 for u, w in g.edges)


def test_random_mirrored_rejects_small_degree_cap(rng):
    with pytest.raises(errors.StructuralError):
        graph.random_mirrored(rng, 4, degree_cap=2)


@pytest.mark.parametrize("seed", range(10))
def test_bfs_distances_agree_with_networkx(seed):
    rng = np.random.default_rng(seed)
    g, _ = graph.random_mirrored(rng, int(rng.integers(1, 12)), extra_edges=4, cross_pairs=2)
    network = g.to_networkx()

    for source in range(g.n):
        expected = nx.shortest_path_length(network, source=source)
        assert graph.bfs_distances(g, source).tolist() == [expected[v] for v in range(g.n)]


def test_disconnected_graph_names_unreachable_vertex():
    with pytest.raises(errors.ConnectivityError, match="vertex 2"):
        Graph.build(4, [(0, 1), (2, 3)])


@pytest.mark.parametrize("seed", range(20))
def test_partition_follows_distance_to_the_wells(seed):
    rng = np.random.default_rng(seed)
    half_size = int(rng.integers(1, 12))
    g, inv = graph.random_mirrored(rng, half_size, extra_edges=3, cross_pairs=3)
    well = int(rng.integers(0, half_size))

    part = graph.partition_vertices(g, inv, well)
    from_well = graph.bfs_distances(g, well)
    from_partner = graph.bfs_distances(g, inv(well))

    assert part.well == well
    assert set(part.s) == {v for v in range(g.n) if inv(v) == v}

    for vertex in range(g.n):
        if from_well[vertex] < from_partner[vertex]:
            assert vertex in part.n
        elif from_well[vertex] > from_partner[vertex]:
            assert vertex in part.sigma_n
