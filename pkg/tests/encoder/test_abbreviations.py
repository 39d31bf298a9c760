from encbench.calculus import ccs
from encbench.calculus.names import Role, source_name
from encbench.encoder.abbreviations import (
    expand_bool,
    expand_if,
    expand_match_set,
    expand_replicated_if,
)
from encbench.encoder.policy import ReservedNames

lock, a, b, x = (source_name(n) for n in ("l", "a", "b", "x"))


def test_boolean_instantiation_answers_on_the_matching_carrier():
    positive = expand_bool(lock, True, ReservedNames())
    t, f = positive.params
    assert (t.role, f.role) == (Role.TRUE, Role.FALSE)
    assert positive.body == ccs.out(t)
    negative = expand_bool(lock, False, ReservedNames())
    assert negative.body == ccs.out(negative.params[1])


def test_if_offers_both_carriers():
    then, otherwise = ccs.out(a), ccs.out(b)
    expanded = expand_if(lock, then, otherwise, ReservedNames())
    assert isinstance(expanded, ccs.Res)
    t, f = expanded.names
    assert ccs.free_names(expanded) == {lock, a, b}
    components = []
    rest = expanded.body
    while isinstance(rest, ccs.Par):
        components.append(rest.left)
        rest = rest.right
    components.append(rest)
    assert components == [ccs.out(lock, t, f), ccs.inp(t, (), then), ccs.inp(f, (), otherwise)]


def test_replicated_if_reoffers_after_each_answer():
    expanded = expand_replicated_if(lock, ccs.out(a), ccs.Nil(), ReservedNames())
    t, f = expanded.names
    offer = ccs.out(lock, t, f)
    assert expanded.body == ccs.par(
        offer, ccs.rep(t, (), ccs.par(offer, ccs.out(a))), ccs.rep(f, (), offer)
    )


def test_match_set_is_a_product_of_matches():
    product = expand_match_set(x, [a, b], ccs.out(x))
    assert product == ccs.Par(ccs.Match(x, a, ccs.out(x)), ccs.Match(x, b, ccs.out(x)))
    assert expand_match_set(x, [], ccs.out(x)) == ccs.Nil()
