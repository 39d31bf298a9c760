import pytest

from encbench.criteria.correspondence import (
    EncodingGraphs,
    check_aux_steps_preserve_equivalence,
    check_one_sim_step,
    check_operational_correspondence_strict,
    check_weak_operational_correspondence,
)
from encbench.encoder.coordinators import Coordinator
from encbench.equivalence.verdict import Result
from encbench.explorer.build import Budget
from encbench.workflow.syntax import parse_source

SMALL_TERMS = ["a -> STOP", "a -> STOP [] b -> TICK", "DIV", "a -> STOP |~| b -> STOP"]


def test_graphs_are_shared_and_cached():
    graphs = EncodingGraphs(parse_source("a -> STOP [] b -> STOP"), Coordinator.CENTRAL)
    assert graphs.target is graphs.derivative(graphs.source.root)
    assert len(graphs.derivatives()) == graphs.source.node_count
    assert graphs.truncation() is None
    assert graphs.bisimulation is graphs.bisimulation


@pytest.mark.parametrize("text", SMALL_TERMS)
def test_strict_correspondence_of_central(text):
    verdict = check_operational_correspondence_strict(parse_source(text))
    assert verdict.is_true, verdict.witness


@pytest.mark.parametrize("text", SMALL_TERMS)
def test_weak_correspondence_of_decentral(text):
    verdict = check_weak_operational_correspondence(parse_source(text))
    assert verdict.is_true, verdict.witness


@pytest.mark.parametrize("text", SMALL_TERMS)
def test_one_sim_step(text):
    assert check_one_sim_step(parse_source(text)).is_true


@pytest.mark.parametrize("coordinator", list(Coordinator))
def test_aux_steps_preserve_equivalence(coordinator):
    verdict = check_aux_steps_preserve_equivalence(parse_source("a -> STOP [] b -> TICK"), coordinator)
    assert verdict.is_true
    assert verdict.stats["aux_edges_checked"] >= 0


def test_truncation_makes_checks_inconclusive():
    p = parse_source("mu X . a -> X")
    budget = Budget(max_states=2)
    assert check_operational_correspondence_strict(p, budget).result is Result.INCONCLUSIVE
    assert check_weak_operational_correspondence(p, budget).result is Result.INCONCLUSIVE
