import pytest

from tecsim import cellcomplex as cc
from tecsim import graphstate as gs
from tecsim import statevector as sv


@pytest.fixture(scope="session")
def l8():
    return cc.build_l8()


@pytest.fixture(scope="session")
def l8_graph(l8):
    return gs.graph_from_complex(l8)


@pytest.fixture(scope="session")
def l8_group(l8_graph):
    return gs.stabilizer_generators(l8_graph)


@pytest.fixture(scope="session")
def l8_state(l8_graph):
    return sv.prepare_graph_state(l8_graph)


@pytest.fixture(scope="session")
def lab_state():
    return sv.prepare_lab_state()


@pytest.fixture(scope="session")
def elementary():
    return cc.build_elementary_cell()


@pytest.fixture(scope="session")
def elementary_graph(elementary):
    return gs.graph_from_complex(elementary)


def l8_qubit(l8, l8_graph, name):
    """Qubit id for a paper-style qubit name on the 8-qubit lattice."""
    cells = {"1": "f1", "3": "f3", "4": "f4",
             "1'": "f1'", "3'": "f3'", "4'": "f4'",
             "2": "e2", "2'": "e2'"}
    return l8_graph.cell_to_qubit[l8.id_of(cells[name])]
