from __future__ import annotations

import numpy as np
import pytest

from graphmab.graph import Graph, Partition


@pytest.fixture
def path3() -> Graph:
    return Graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle() -> Graph:
    return Graph(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def star5() -> Graph:
    """Center 0, leaves 1..4."""
    return Graph(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def dumbbell6() -> Graph:
    """Two triangles {0,1,2} and {3,4,5} joined by the bridge (2,3)."""
    return Graph(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)])


@pytest.fixture
def dumbbell6_partition() -> Partition:
    return Partition([[0, 1, 2], [3, 4, 5]], 6)


def random_connected_graph(
    rng: np.random.Generator, n: int, extra_edge_prob: float = 0.2
) -> Graph:
    """Uniform random tree plus extra edges; always connected."""
    edges = {(int(rng.integers(i)), i) for i in range(1, n)}
    iu, jv = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < extra_edge_prob
    for u, v in zip(iu[mask], jv[mask]):
        pair = (int(u), int(v))
        if pair not in edges:
            edges.add(pair)
    return Graph(n, edges)


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE {name}: {outcome}", flush=True)
