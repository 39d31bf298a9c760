from encbench.criteria.distributability import (
    check_distributability_preservation,
    distributable_pairs,
)
from encbench.encoder.coordinators import Coordinator
from encbench.workflow.syntax import parse_source

INTERLEAVING = "a -> STOP |[]| b -> STOP"


def test_distributable_pairs(term_e):
    assert len(distributable_pairs(parse_source(INTERLEAVING))) == 1
    assert not distributable_pairs(term_e)
    assert not distributable_pairs(parse_source("a -> STOP [] b -> STOP"))


def test_decentral_preserves_distributability():
    verdict = check_distributability_preservation(parse_source(INTERLEAVING))
    assert verdict.is_true, verdict.witness
    assert verdict.stats["pairs"] >= 1
    assert verdict.stats["approximation"] == "commutation"


def test_central_serializes_independent_actions():
    verdict = check_distributability_preservation(
        parse_source(INTERLEAVING), coordinator=Coordinator.CENTRAL
    )
    assert verdict.is_false
    assert verdict.witness["clause"] == "commutation"
    assert sorted(verdict.witness["steps"]) == ["a", "b"]


def test_terms_without_pairs_hold_vacuously():
    verdict = check_distributability_preservation(parse_source("a -> STOP"))
    assert verdict.is_true
    assert verdict.stats["pairs"] == 0
