import pytest

from encbench.calculus.names import source_name
from encbench.explorer.graph import Edge, ReductionGraph, StepClass, Witness


def graph_of(size, edges, barbs=None, success=(), kind="target"):
    """A reduction graph over nodes 0..size-1 with the given immediate barbs."""
    graph = ReductionGraph(kind=kind)
    for n in range(size):
        graph.add_state(n, n in success)
    for source, target in edges:
        graph.add_edge(Edge(source, target, StepClass.SIM, Witness.NO_CLAUSE))
    for n, names in (barbs or {}).items():
        graph.set_barbs(n, frozenset(source_name(x) for x in names))
    return graph


@pytest.fixture
def choice_graph():
    """A three-way choice: 0 offers o, p, q; o and p lead to 1, q leads to 2."""
    return graph_of(3, [(0, 1), (0, 2)], {0: "opq"}, kind="source")


@pytest.fixture
def partial_commitment_graph():
    """Like `choice_graph`, plus an internal step to 3 that has dropped p."""
    return graph_of(4, [(0, 1), (0, 2), (0, 3), (3, 1), (3, 2)], {0: "opq", 3: "oq"})
