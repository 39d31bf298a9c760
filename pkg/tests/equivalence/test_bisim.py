import pytest

from encbench.equivalence.bisim import equivalence_classes, weak_bisim_check
from encbench.equivalence.verdict import Result

from tests.equivalence.conftest import graph_of


@pytest.mark.parametrize("node", range(4))
def test_every_node_is_bisimilar_to_itself(partial_commitment_graph, node):
    g = partial_commitment_graph
    assert weak_bisim_check(g, g, node, node).is_true


def test_internal_steps_are_unobservable():
    short = graph_of(2, [(0, 1)], {0: "a"})
    long = graph_of(3, [(0, 1), (1, 2)], {0: "a", 1: "a"})
    verdict = weak_bisim_check(short, long)
    assert verdict.is_true
    assert verdict.relation


def test_partial_commitment_is_not_bisimilar(choice_graph, partial_commitment_graph):
    verdict = weak_bisim_check(choice_graph, partial_commitment_graph)
    assert verdict.result is Result.FALSE
    assert verdict.witness["clause"] == "step"
    for node in choice_graph.nodes():
        assert weak_bisim_check(choice_graph, partial_commitment_graph, node, 3).is_false


def test_success_distinguishes():
    verdict = weak_bisim_check(graph_of(1, [], success={0}), graph_of(1, []))
    assert verdict.witness["clause"] == "signature"
    assert verdict.witness["left"]["success"] is True


def test_truncated_graphs_are_inconclusive(choice_graph):
    other = graph_of(1, [])
    other.truncate("max_states")
    verdict = weak_bisim_check(choice_graph, other)
    assert verdict.result is Result.INCONCLUSIVE
    assert "max_states" in verdict.cause


def test_equivalence_classes_cover_all_parts(choice_graph, partial_commitment_graph):
    u, block = equivalence_classes(choice_graph, partial_commitment_graph)
    assert len(block) == 7
    assert block[u.node(0, 1)] == block[u.node(1, 1)] == block[u.node(1, 2)]
    assert block[u.node(1, 3)] not in {block[u.node(0, n)] for n in choice_graph.nodes()}
