import pytest

from encbench.calculus.csp import TAU, source_names
from encbench.calculus.errors import PolicyError
from encbench.calculus.names import Name, NameKind, Role, source_name
from encbench.encoder.policy import RenamingPolicy, ReservedNames, make_renaming_policy
from encbench.workflow.syntax import parse_source

a, b, c = (source_name(n) for n in "abc")


def test_triples_are_distinct_and_invertible():
    policy = make_renaming_policy([a, b])
    policy.check()
    assert [n.ident for n in policy.triple(a)] == ["a_1", "a_2", "a_3"]
    assert policy.ref(b).role is Role.REF
    assert policy.left(b).role is Role.SYNC_LEFT
    assert policy.right(b).role is Role.SYNC_RIGHT
    for n in policy.triple(b):
        assert policy.source_of(n) == b
    assert policy.label(TAU) == policy.tau
    assert policy.source_of(policy.tau) is TAU
    assert policy.source_of(source_name("zzz")) is None


def test_missing_names_raise_policy_error():
    policy = make_renaming_policy([a])
    with pytest.raises(PolicyError):
        policy.ref(b)
    with pytest.raises(PolicyError):
        policy.sort([a, c])


def test_sort_follows_first_occurrence_order():
    policy = make_renaming_policy([c, a, b])
    assert policy.sort({a, b, c}) == [c, a, b]


def test_reserved_images_are_rejected():
    reserved = ReservedNames()
    bad = RenamingPolicy(
        order=(a,),
        images={a: (reserved.fresh("c"), source_name("a2"), source_name("a3"))},
    )
    with pytest.raises(ValueError, match="reserved"):
        bad.check()


def test_overlapping_images_are_rejected():
    shared = Name("x", NameKind.GENERATED)
    bad = RenamingPolicy(
        order=(a, b),
        images={
            a: (shared, source_name("a2"), source_name("a3")),
            b: (shared, source_name("b2"), source_name("b3")),
        },
    )
    with pytest.raises(ValueError, match="image of two source names"):
        bad.check()


def test_reserved_variants_are_fresh():
    reserved = ReservedNames()
    first, second = reserved.fresh_many("l", 2)
    assert first != second
    assert first.role is second.role is Role.LOCK
    assert ReservedNames.is_reserved(first)
    with pytest.raises(KeyError):
        reserved.fresh("nope")


def test_policy_of_a_term_follows_its_first_occurrences():
    p = parse_source("b -> STOP [] a -> c -> STOP")
    policy = make_renaming_policy(source_names(p))
    assert policy.order == (b, a, c)
    assert policy.sort({a, b, c}) == [b, a, c]
