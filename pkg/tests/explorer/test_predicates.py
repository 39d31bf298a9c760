import pytest

from encbench.calculus import csp
from encbench.encoder.coordinators import Coordinator
from encbench.explorer.build import build_source_graph
from encbench.explorer.graph import Edge, ReductionGraph, StepClass, Witness
from encbench.explorer.predicates import (
    check_aux_cycles,
    check_lock_invariants,
    detect_divergence,
    reachable_predicates,
)
from encbench.workflow.syntax import parse_source

from tests.explorer.test_build import target_graph


@pytest.mark.parametrize(
    "text, diverges",
    [("DIV", True), ("mu X . X", True), ("a -> STOP", False), ("STOP |~| TICK", False)],
)
def test_source_divergence(text, diverges):
    assert detect_divergence(build_source_graph(parse_source(text))) is diverges


def test_divergence_unknown_on_truncated_graph():
    graph = build_source_graph(csp.Div())
    graph.truncate("test")
    assert detect_divergence(graph) is None


def test_reachable_predicates_follow_edges():
    predicates = reachable_predicates(build_source_graph(parse_source("a -> TICK")))
    assert predicates[0].success
    assert {str(b) for b in predicates[0].barbs} == {"a"}
    assert predicates[1].barbs == frozenset()


def test_aux_cycle_is_reported():
    graph = ReductionGraph(kind="target")
    for n in range(2):
        graph.add_state(n, False)
    graph.add_edge(Edge(0, 1, StepClass.AUX, Witness.NO_CLAUSE))
    graph.add_edge(Edge(1, 0, StepClass.AUX, Witness.NO_CLAUSE))
    verdict = check_aux_cycles(graph)
    assert verdict.is_false
    assert verdict.witness["clause"] == "aux-only-cycle"

    with_sim = ReductionGraph(kind="target")
    for n in range(2):
        with_sim.add_state(n, False)
    with_sim.add_edge(Edge(0, 1, StepClass.AUX, Witness.NO_CLAUSE))
    with_sim.add_edge(Edge(1, 0, StepClass.SIM, Witness.CHOICE_CHANNEL))
    assert check_aux_cycles(with_sim).is_true


@pytest.mark.parametrize("coordinator", list(Coordinator))
@pytest.mark.parametrize("text", ["a -> STOP [] b -> TICK", "DIV", "a -> STOP |~| b -> STOP"])
def test_encoded_graphs_respect_locks(coordinator, text):
    graph = target_graph(text, coordinator)
    assert check_lock_invariants(graph).is_true
    assert check_aux_cycles(graph).is_true
