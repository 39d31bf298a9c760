import pytest

from encbench.calculus import csp
from encbench.calculus.errors import IllFormedTermError
from encbench.calculus.names import source_name

a, b, c, o, p, q = (source_name(x) for x in "abcopq")
STOP = csp.Stop()


def test_transitions_of_e(term_e):
    left = csp.ExtSum(((o, STOP), (p, STOP)))
    sync = frozenset({o, p})
    assert csp.source_transitions(term_e) == {
        (o, csp.Par(STOP, STOP, sync)),
        (p, csp.Par(STOP, STOP, sync)),
        (q, csp.Par(left, STOP, sync)),
    }
    assert csp.source_barbs(term_e) == {o, p, q}
    assert not csp.source_reductions(term_e)


@pytest.mark.parametrize(
    "term, expected",
    [
        (csp.Div(), {(csp.TAU, csp.Div())}),
        (csp.IntChoice(csp.prefix(a, STOP), STOP), {(csp.TAU, csp.prefix(a, STOP)), (csp.TAU, STOP)}),
        (csp.Conceal(csp.prefix(a, STOP), a), {(csp.TAU, csp.Conceal(STOP, a))}),
        (csp.Rename(csp.prefix(a, STOP), ((a, b),)), {(b, csp.Rename(STOP, ((a, b),)))}),
        (csp.Success(), set()),
        (STOP, set()),
    ],
)
def test_single_operator_rules(term, expected):
    assert csp.source_transitions(term) == expected


def test_recursion_unfolds_by_tau():
    loop = csp.Mu("X", csp.prefix(a, csp.Var("X")))
    assert csp.source_transitions(loop) == {(csp.TAU, csp.prefix(a, loop))}


def test_synchronisation_needs_both_sides():
    term = csp.Par(csp.prefix(a, csp.Success()), csp.prefix(a, STOP), frozenset({a}))
    assert csp.source_transitions(term) == {
        (a, csp.Par(csp.Success(), STOP, frozenset({a})))
    }
    blocked = csp.Par(csp.prefix(a, STOP), csp.prefix(b, STOP), frozenset({a}))
    assert csp.source_barbs(blocked) == {b}


def test_interleaving_steps_are_distributable():
    term = csp.Par(csp.prefix(a, STOP), csp.prefix(b, STOP))
    first, second = csp.source_steps(term)
    assert csp.distributable(first, second)


def test_choice_steps_conflict(term_e):
    steps = {step.label: step for step in csp.source_steps(term_e)}
    assert not csp.distributable(steps[o], steps[p])
    assert not csp.distributable(steps[o], steps[q])


@pytest.mark.parametrize(
    "term, success",
    [
        (csp.Success(), True),
        (csp.Par(STOP, csp.Success()), True),
        (csp.Conceal(csp.Success(), a), True),
        (csp.prefix(a, csp.Success()), False),
        (csp.IntChoice(csp.Success(), STOP), False),
    ],
)
def test_source_has_success(term, success):
    assert csp.source_has_success(term) is success


def test_unbound_variable_is_rejected():
    with pytest.raises(IllFormedTermError, match="Unbound process variable"):
        csp.check_well_formed(csp.prefix(a, csp.Var("X")))


def test_empty_sum_is_rejected():
    with pytest.raises(IllFormedTermError):
        csp.check_well_formed(csp.ExtSum(()))


def test_renaming_domain_must_be_a_set():
    with pytest.raises(IllFormedTermError):
        csp.check_well_formed(csp.Rename(STOP, ((a, b), (a, c))))


def test_source_names_in_first_occurrence_order():
    term = csp.Par(csp.prefix(b, csp.prefix(a, STOP)), csp.prefix(c, STOP), frozenset({q}))
    assert csp.source_names(term) == (b, a, c, q)


def test_alphabet_respects_concealment_and_renaming():
    term = csp.Rename(csp.Conceal(csp.prefix(a, csp.prefix(b, STOP)), a), ((b, c),))
    assert csp.alphabet(term) == {c}


def test_rename_source_reaches_every_occurrence():
    term = csp.Conceal(csp.Par(csp.prefix(a, STOP), STOP, frozenset({a})), a)
    renamed = csp.rename_source(term, {a: b})
    assert renamed == csp.Conceal(csp.Par(csp.prefix(b, STOP), STOP, frozenset({b})), b)


def test_substitution_avoids_capture():
    inner = csp.Mu("Y", csp.prefix(a, csp.Var("X")))
    result = csp.substitute_var(inner, "X", csp.Var("Y"))
    assert isinstance(result, csp.Mu)
    assert result.var != "Y"
    assert csp.free_vars(result) == {"Y"}
