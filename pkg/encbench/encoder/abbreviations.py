"""Boolean locks, if-constructs and match sets, expanded into plain target syntax."""

from typing import Iterable

from encbench.calculus import ccs
from encbench.calculus.names import Name
from encbench.encoder.policy import ReservedNames


def expand_bool(lock: Name, value: bool, reserved: ReservedNames) -> ccs.Input:
    """l⟨⊤⟩ is l(t,f).t⟨⟩ and l⟨⊥⟩ is l(t,f).f⟨⟩."""
    t, f = reserved.fresh("t"), reserved.fresh("f")
    return ccs.inp(lock, (t, f), ccs.out(t if value else f))


def expand_if(
    lock: Name,
    then: ccs.TargetProcess,
    otherwise: ccs.TargetProcess,
    reserved: ReservedNames,
) -> ccs.TargetProcess:
    """l(v).if v then P else Q is (νt,f)(l⟨t,f⟩ | t().P | f().Q)."""
    t, f = reserved.fresh("t"), reserved.fresh("f")
    return ccs.res(
        (t, f),
        ccs.par(ccs.out(lock, t, f), ccs.inp(t, (), then), ccs.inp(f, (), otherwise)),
    )


def expand_replicated_if(
    chan: Name,
    then: ccs.TargetProcess,
    otherwise: ccs.TargetProcess,
    reserved: ReservedNames,
) -> ccs.TargetProcess:
    """!s(v).if v then P else Q, re-offering the carriers after every answer."""
    t, f = reserved.fresh("t"), reserved.fresh("f")
    offer = ccs.out(chan, t, f)
    return ccs.res(
        (t, f),
        ccs.par(
            offer,
            ccs.rep(t, (), ccs.par(offer, then)),
            ccs.rep(f, (), ccs.par(offer, otherwise)),
        ),
    )


def expand_match_set(x: Name, allowed: Iterable[Name], body: ccs.TargetProcess) -> ccs.TargetProcess:
    return ccs.par(*(ccs.Match(x, a, body) for a in allowed))
