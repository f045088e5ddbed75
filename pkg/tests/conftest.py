import json
from pathlib import Path

import numpy as np
import pytest

from qwalk.engine import graph
from qwalk.engine.graph import Graph, Involution


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)


@pytest.fixture
def p2() -> tuple[Graph, Involution]:
    g, inv = graph.path_graph(2)
    return g.with_double_well(inv, 0, 4.0), inv


@pytest.fixture
def p3() -> tuple[Graph, Involution]:
    g, inv = graph.path_graph(3)
    return g.with_double_well(inv, 0, 4.0), inv


@pytest.fixture
def c4() -> tuple[Graph, Involution]:
    return graph.cycle_graph(4)


def write_graph_file(path: Path, payload: dict[str, object]) -> Path:
    path.write_text(json.dumps(payload))
    return path


@pytest.fixture
def p2_file(tmp_path: Path) -> Path:
    return write_graph_file(
        tmp_path / "p2.json",
        {"n": 2, "potentials": [0, 0], "edges": [[0, 1]], "involution": [1, 0], "well": 0},
    )


@pytest.fixture
def p3_file(tmp_path: Path) -> Path:
    return write_graph_file(
        tmp_path / "p3.json",
        {
            "n": 3,
            "potentials": [4, 0, 4],
            "edges": [[0, 1], [1, 2]],
            "involution": [2, 1, 0],
            "well": 0,
        },
    )
