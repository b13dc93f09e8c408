import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from clusterqec import build_connectivity_graph, circulant, hypergraph_product


@pytest.fixture(scope="session")
def toric18():
    c = circulant(3, [0, 1])
    return hypergraph_product(c, c)


@pytest.fixture(scope="session")
def toric18_graph(toric18):
    return build_connectivity_graph(toric18)


@pytest.fixture(scope="session")
def toric450():
    c = circulant(15, [0, 1])
    return hypergraph_product(c, c)


@pytest.fixture(scope="session")
def code450_98():
    c = circulant(15, [0, 1, 3, 7])
    return hypergraph_product(c, c)


@pytest.fixture(scope="session")
def code450_98_graph(code450_98):
    return build_connectivity_graph(code450_98)
