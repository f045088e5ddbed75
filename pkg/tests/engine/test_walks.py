import math

import networkx as nx
import numpy as np
import pytest

from qwalk.engine import errors, graph, oracle, walks
from qwalk.engine.api import create_system

WELLS = frozenset({0, 1})


def test_count_walks_p2_crossing():
    g, _ = graph.path_graph(2)

    result = walks.count_walks_avoiding(g, 0, 1, WELLS, 3)

    assert result.counts.tolist() == [0, 1, 0, 0]
    assert result.exact


def test_count_walks_p3_closed_walk():
    g, _ = graph.path_graph(3)

    result = walks.count_walks_avoiding(g, 0, 0, frozenset({0, 2}), 4)

    assert result.counts.tolist() == [1, 0, 1, 0, 0]


def test_count_walks_p3_first_crossing_at_distance():
    g, _ = graph.path_graph(3)

    result = walks.count_walks_avoiding(g, 0, 2, frozenset({0, 2}), 2)

    assert result.counts.tolist() == [0, 0, 1]
    assert result.first_nonzero() == 2


def test_count_walks_without_forbidden_vertices_are_adjacency_powers(c4):
    g, _ = c4
    power = np.linalg.matrix_power(g.adjacency, 5)

    result = walks.count_walks_avoiding(g, 0, 1, frozenset(), 5)

    assert result.counts[5] == power[0, 1]


def test_count_walks_rejects_negative_length(c4):
    g, _ = c4

    with pytest.raises(errors.DomainError):
        walks.count_walks_avoiding(g, 0, 1, frozenset(), -1)


def test_count_walks_switches_to_floating_point_for_huge_counts():
    g = graph.Graph.from_networkx(nx.complete_graph(8))

    result = walks.count_walks_avoiding(g, 0, 1, frozenset(), 30)

    assert not result.exact
    assert result.counts.dtype == np.float64
    assert result.counts[30] == pytest.approx((7**30 - (-1) ** 30) / 8, rel=1e-12)


@pytest.mark.parametrize("seed", range(12))
def test_masked_counts_match_depth_first_enumeration(seed):
    rng = np.random.default_rng(seed)
    g, inv = graph.random_mirrored(rng, int(rng.integers(1, 4)), extra_edges=2, cross_pairs=2)
    source = int(rng.integers(0, g.n))
    target = int(rng.integers(0, g.n))
    forbidden = frozenset({source, inv(source)})

    masked = walks.count_walks_avoiding(g, source, target, forbidden, 8)
    enumerated = oracle.enumerate_walks_dfs(g, source, target, forbidden, 8)

    assert masked.counts.tolist() == enumerated.tolist()


def test_walk_counts_are_bounded_by_degree_powers(rng):
    g, inv = graph.random_mirrored(rng, 10, extra_edges=5, cross_pairs=3)
    m = graph.max_degree(g)

    result = walks.count_walks_avoiding(g, 0, inv(0), frozenset({0, inv(0)}), 20)

    assert all(result.counts[k] <= m**k for k in range(21))


def test_walk_counts_respect_involution_symmetry(rng):
    g, inv = graph.random_mirrored(rng, 6, extra_edges=3, cross_pairs=2)
    v, w = 2, inv(2)
    forbidden = frozenset({v, w})

    closed = walks.count_walks_avoiding(g, v, v, forbidden, 12)
    mirrored = walks.count_walks_avoiding(g, w, w, forbidden, 12)
    crossing = walks.count_walks_avoiding(g, v, w, forbidden, 12)
    back = walks.count_walks_avoiding(g, w, v, forbidden, 12)

    assert closed.counts.tolist() == mirrored.counts.tolist()
    assert crossing.counts.tolist() == back.counts.tolist()


def test_z_truncated_p2():
    g, _ = graph.path_graph(2)
    q = 4.0

    crossing = walks.count_walks_avoiding(g, 0, 1, WELLS, 1)
    closed = walks.count_walks_avoiding(g, 0, 0, WELLS, 5)

    assert walks.z_truncated(crossing, q + 1).value == 1 / (q + 1)
    assert walks.z_truncated(closed, q + 1).value == 0.0


def test_z_truncated_p3_closed_walk_at_top_eigenvalue():
    g, _ = graph.path_graph(3)
    lam = 2 + math.sqrt(6)

    closed = walks.count_walks_avoiding(g, 0, 0, frozenset({0, 2}), 20)
    result = walks.z_truncated(closed, lam)

    assert result.value == pytest.approx(lam**-2)
    assert result.error_bound == pytest.approx((2 / lam) ** 21 / (1 - 2 / lam))


def test_z_truncated_rejects_divergent_lambda():
    g, _ = graph.path_graph(3)
    closed = walks.count_walks_avoiding(g, 0, 0, frozenset({0, 2}), 4)

    with pytest.raises(errors.DivergenceError):
        walks.z_truncated(closed, 1.5)


def test_z_truncated_is_monotone_in_length(c4):
    g, _ = c4
    values = [
        walks.z_truncated(walks.count_walks_avoiding(g, 0, 0, frozenset({0, 2}), n), 5.0).value
        for n in range(1, 15)
    ]

    assert values == sorted(values)


def test_default_truncation():
    assert walks.default_truncation(0, 5.0) == 1
    assert walks.default_truncation(2, 2.0001) == walks.MAX_TRUNCATION

    length = walks.default_truncation(2, 10.0)
    assert walks.truncation_error(2, 10.0, length) < walks.TRUNCATION_TARGET
    assert walks.truncation_error(2, 10.0, length - 1) >= walks.TRUNCATION_TARGET


def test_well_system_residual_p2_exact():
    g, inv = graph.path_graph(2)

    plus = walks.well_system_residual(g, inv, 0, 5.0, 4.0, length=1)
    minus = walks.well_system_residual(g, inv, 0, 3.0, 4.0, length=1)

    assert plus.sym == pytest.approx(0.0, abs=1e-15)
    assert minus.antisym == pytest.approx(0.0, abs=1e-15)


def test_well_system_residual_p3_at_top_eigenvalue():
    g, inv = graph.path_graph(3)

    residual = walks.well_system_residual(g, inv, 0, 2 + math.sqrt(6), 4.0, length=40)

    assert residual.sym < 1e-6


def test_well_system_residual_is_within_truncation_error():
    g, inv = graph.cycle_graph(6)
    q = 10.0
    lam = float(create_system(g, inv, 0, q).spectrum.eigenvalues[0])

    for length in (5, 10, 40):
        residual = walks.well_system_residual(g, inv, 0, lam, q, length=length)
        assert residual.sym <= residual.error_bound + 1e-12


def test_gap_certificate_p3():
    g, inv = graph.path_graph(3)

    report = walks.gap_certificate_check(g, inv, 0, 4.0)

    assert report.gap == pytest.approx(2 + math.sqrt(6) - 4)
    assert report.intermediate_rhs == pytest.approx(1 / (2 + math.sqrt(6)) + 1 / 4)
    assert not report.intermediate_holds
    assert report.scaled_holds
    assert report.scaled_lhs == pytest.approx(report.intermediate_rhs)
    assert report.identity_residual < 1e-9
    assert report.final_bound == pytest.approx(1 / 3)
    assert report.final_holds


def test_gap_certificate_p2_equality_case():
    g, inv = graph.path_graph(2)

    report = walks.gap_certificate_check(g, inv, 0, 4.0)

    assert report.gap == pytest.approx(2.0)
    assert report.intermediate_rhs == 2.0
    assert report.intermediate_holds
    assert report.final_holds


def test_gap_certificate_p4():
    g, inv = graph.path_graph(4)

    report = walks.gap_certificate_check(g, inv, 0, 10.0)

    assert report.final_bound == pytest.approx(2 / 144)
    assert report.final_holds
    assert report.scaled_holds


def test_gap_certificate_adjacent_wells_miss_gap_two():
    g, inv = graph.path_graph(4)

    report = walks.gap_certificate_check(g, inv, 1, 10.0)

    assert report.final_bound == 2.0
    assert report.gap < 2.0
    assert not report.final_holds


def test_gap_certificate_requires_lambda2_above_degree():
    g, inv = graph.path_graph(3)

    with pytest.raises(errors.PreconditionError):
        walks.gap_certificate_check(g, inv, 0, 1.0)
