import pytest

from encbench.calculus.names import source_name
from encbench.criteria.invariance import (
    check_injective,
    check_name_invariance,
    check_name_invariance_all,
    default_renamings,
    induced_renaming,
)
from encbench.encoder.coordinators import Coordinator
from encbench.encoder.policy import make_renaming_policy
from encbench.workflow.syntax import parse_source

a, b, c = (source_name(n) for n in "abc")


def test_default_renamings():
    p = parse_source("a -> STOP [] b -> STOP")
    renamings = default_renamings(p)
    assert renamings[0] == {}
    assert renamings[1] == {a: b, b: a}
    assert renamings[2] == {a: source_name("a_renamed")}


def test_non_injective_renaming_is_rejected():
    with pytest.raises(ValueError, match="not injective"):
        check_injective({a: b}, [a, b])


def test_induced_renaming_maps_triples():
    policy = make_renaming_policy([a])
    renamed = make_renaming_policy([c])
    induced = induced_renaming({a: c}, policy, renamed)
    assert induced == dict(zip(policy.triple(a), renamed.triple(c)))


@pytest.mark.parametrize("coordinator", list(Coordinator))
@pytest.mark.parametrize(
    "text, count",
    [
        ("a -> STOP [] b -> TICK", 3),
        ("a -> TICK |[a]| a -> STOP", 2),
        ("(a -> b -> STOP) / a", 3),
        ("rn {a -> b} a -> STOP", 3),
        ("TICK |~| STOP", 1),
    ],
)
def test_name_invariance(text, count, coordinator):
    verdict = check_name_invariance_all(parse_source(text), coordinator)
    assert verdict.is_true, verdict.witness
    assert verdict.stats["renamings"] == count


@pytest.mark.parametrize(
    "text, count", [("STOP", 1), ("a -> STOP", 2), ("a -> STOP |[a]| a -> TICK", 2), ("a -> b -> STOP", 3)]
)
def test_renaming_count_follows_the_names_of_the_term(text, count):
    assert len(default_renamings(parse_source(text))) == count


def test_explicit_renaming(term_e):
    sigma = {source_name("o"): source_name("x"), source_name("q"): source_name("p2")}
    assert check_name_invariance(term_e, sigma, Coordinator.DECENTRAL).is_true
