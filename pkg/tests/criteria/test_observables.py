import pytest

from encbench.criteria.correspondence import EncodingGraphs
from encbench.criteria.observables import (
    check_barb_respect,
    check_divergence_reflection,
    check_static_barbs,
    check_static_success,
    check_success_sensitivity,
)
from encbench.encoder.coordinators import Coordinator
from encbench.equivalence.verdict import Result
from encbench.explorer.build import Budget
from encbench.workflow.syntax import parse_source


@pytest.mark.parametrize("coordinator", list(Coordinator))
@pytest.mark.parametrize(
    "text, diverges",
    [("DIV", True), ("mu X . X", True), ("a -> STOP", False), ("a -> STOP |~| TICK", False)],
)
def test_divergence_reflection(text, diverges, coordinator):
    verdict = check_divergence_reflection(parse_source(text), coordinator)
    assert verdict.is_true
    assert verdict.stats["source_diverges"] is diverges


@pytest.mark.parametrize("coordinator", list(Coordinator))
@pytest.mark.parametrize(
    "text, success",
    [("TICK", True), ("a -> TICK", True), ("a -> TICK |[a]| a -> STOP", True), ("a -> STOP", False)],
)
def test_success_sensitivity(text, success, coordinator):
    verdict = check_success_sensitivity(parse_source(text), coordinator)
    assert verdict.is_true
    assert verdict.stats["success"] is success


@pytest.mark.parametrize("coordinator", list(Coordinator))
@pytest.mark.parametrize(
    "text, barbs",
    [
        ("a -> STOP [] b -> TICK", ["a", "b"]),
        ("(a -> STOP) / a", []),
        ("rn {a -> b} a -> STOP", ["b"]),
        ("a -> STOP |[a]| b -> STOP", ["b"]),
    ],
)
def test_barb_respect(text, barbs, coordinator):
    verdict = check_barb_respect(parse_source(text), coordinator)
    assert verdict.is_true
    assert verdict.stats["barbs"] == barbs


def test_barb_respect_is_inconclusive_when_truncated():
    p = parse_source("mu X . a -> X")
    verdict = check_barb_respect(p, Coordinator.CENTRAL, Budget(max_states=2))
    assert verdict.result is Result.INCONCLUSIVE


@pytest.mark.parametrize("coordinator", list(Coordinator))
@pytest.mark.parametrize("text", ["a -> STOP [] b -> TICK", "rn {a -> b} a -> STOP", "STOP"])
def test_static_barbs(text, coordinator):
    p = parse_source(text)
    verdict = check_static_barbs(p, coordinator, graphs=EncodingGraphs(p, coordinator))
    assert verdict.is_true


@pytest.mark.parametrize(
    "text, success",
    [("TICK", True), ("TICK |[]| STOP", True), ("a -> TICK", False), ("STOP |~| TICK", False)],
)
def test_static_success(text, success):
    verdict = check_static_success(parse_source(text))
    assert verdict.is_true
    assert verdict.stats["success"] is success
