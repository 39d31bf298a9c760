from encbench.equivalence.bisim import weak_bisim_check
from encbench.equivalence.coupled import audit_coupled, coupled_relation, coupled_sim_check
from encbench.equivalence.verdict import Result

from tests.equivalence.conftest import graph_of


def test_partial_commitment_is_coupled_similar(choice_graph, partial_commitment_graph):
    verdict = coupled_sim_check(choice_graph, partial_commitment_graph)
    assert verdict.is_true, verdict.witness
    assert verdict.stats["audited"] is True


def test_partial_state_is_simulated_one_way_only(choice_graph, partial_commitment_graph):
    relation = coupled_relation(choice_graph, partial_commitment_graph)
    assert relation.related_back(3, 0)
    assert not relation.related(0, 3)
    assert not relation.equivalent(0, 3)
    assert not audit_coupled(relation)


def test_bisimilar_graphs_are_coupled_similar():
    short = graph_of(2, [(0, 1)], {0: "a"})
    long = graph_of(3, [(0, 1), (1, 2)], {0: "a", 1: "a"})
    assert weak_bisim_check(short, long).is_true
    assert coupled_sim_check(short, long).is_true


def test_lost_barb_fails():
    offers = graph_of(2, [(0, 1)], {0: "ab"})
    drops = graph_of(2, [(0, 1)], {0: "a"})
    verdict = coupled_sim_check(offers, drops)
    assert verdict.result is Result.FALSE
    assert verdict.witness["clause"] == "signature"


def test_premature_commitment_fails():
    offers = graph_of(1, [], {0: "ab"})
    commits = graph_of(2, [(0, 1)], {0: "ab", 1: "a"})
    verdict = coupled_sim_check(offers, commits)
    assert verdict.result is Result.FALSE
    assert verdict.witness["clause"] in ("simulation", "simulation-back")


def test_truncated_graphs_are_inconclusive(choice_graph):
    other = graph_of(1, [])
    other.truncate("max_edges")
    assert coupled_sim_check(choice_graph, other).result is Result.INCONCLUSIVE
