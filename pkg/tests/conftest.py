import networkx as nx
import numpy as np
import pytest
from networkx.generators.atlas import graph_atlas_g

from pottspoly.graphs.core import Graph, hypercube, petersen


def connected_atlas(max_n):
    out = []
    for h in graph_atlas_g():
        n = h.number_of_nodes()
        if 1 <= n <= max_n and nx.is_connected(h):
            out.append(Graph.from_edges(n, h.edges()))
    return out


def catalog():
    """All connected graphs on at most 6 vertices plus Q_3 and the Petersen graph."""
    return connected_atlas(6) + [hypercube(3), petersen()]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
