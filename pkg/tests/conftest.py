import numpy as np
import pytest

from tripower.graph_core import Graph, from_edge_list


def random_simple_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """Erdos-Renyi style test graph with independent edges."""
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return from_edge_list(n, edges)


def relabel(g: Graph, perm: np.ndarray) -> Graph:
    edges = [(int(perm[u]), int(perm[v])) for u, v in g.edges()]
    return from_edge_list(g.n, edges)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
