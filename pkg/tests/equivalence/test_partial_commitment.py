import pytest

from encbench.calculus.names import source_name
from encbench.criteria.correspondence import EncodingGraphs
from encbench.encoder.coordinators import Coordinator
from encbench.equivalence.bisim import equivalence_classes, weak_bisim_check
from encbench.equivalence.coupled import coupled_sim_check
from encbench.explorer.predicates import reachable_predicates


@pytest.fixture
def decentral_e(term_e):
    return EncodingGraphs(term_e, Coordinator.DECENTRAL)


def partial_nodes(graph):
    """Target nodes that can still do o and q but no longer p."""
    partial = frozenset(source_name(n) for n in "oq")
    reachable = reachable_predicates(graph)
    return [n for n in graph.nodes() if reachable[n].barbs == partial]


def test_decentral_encoding_commits_partially(decentral_e):
    source, target = decentral_e.source, decentral_e.target
    assert not target.truncated
    nodes = partial_nodes(target)
    assert nodes

    u, block = equivalence_classes(source, target)
    source_blocks = {block[u.node(0, s)] for s in source.nodes()}
    for n in nodes:
        assert block[u.node(1, n)] not in source_blocks, n
    for s in source.nodes():
        assert weak_bisim_check(source, target, s, nodes[0]).is_false


def test_partially_committed_encoding_is_coupled_similar(decentral_e):
    verdict = coupled_sim_check(decentral_e.source, decentral_e.target)
    assert verdict.is_true, verdict.witness
