from __future__ import annotations

import logging
from enum import Enum

from encbench.calculus import ccs, csp
from encbench.calculus.names import Name, Role
from encbench.encoder.abbreviations import expand_bool, expand_if
from encbench.encoder.inner import encode_inner
from encbench.encoder.policy import RenamingPolicy, ReservedNames, make_renaming_policy


class Coordinator(str, Enum):
    CENTRAL = "central"
    DECENTRAL = "decentral"


def _announcement_params(reserved: ReservedNames) -> tuple[Name, Name, Name, Name]:
    return reserved.fresh("c"), reserved.fresh("r"), reserved.fresh("l"), reserved.fresh("s")


def encode_central(
    p: csp.SourceProcess, policy: RenamingPolicy | None = None
) -> ccs.TargetProcess:
    """(νact,o)(⟦P⟧ | o⟨⟩ | !o().act(c,r,l,s).(r⟨⟩ | if l then o⟨⟩|s⟨⊤⟩ else o⟨⟩))"""
    policy = policy or make_renaming_policy(csp.source_names(p))
    reserved = ReservedNames()
    inner = encode_inner(p, policy, reserved)
    act, once = reserved.act, reserved.once
    c, r, l, s = _announcement_params(reserved)
    test = expand_if(
        l,
        ccs.par(ccs.out(once), expand_bool(s, True, reserved)),
        ccs.out(once),
        reserved,
    )
    coordinator = ccs.rep(once, (), ccs.inp(act, (c, r, l, s), ccs.par(ccs.out(r), test)))
    encoded = ccs.res((act, once), ccs.par(inner, ccs.out(once), coordinator))
    logging.debug(f"Central encoding uses {len(ccs.all_names(encoded))} names.")
    return encoded


def encode_decentral(
    p: csp.SourceProcess, policy: RenamingPolicy | None = None
) -> ccs.TargetProcess:
    """(νact)(⟦P⟧ | !act(c,r,l,s).(r⟨⟩ | if l then s⟨⊤⟩ else 0))"""
    policy = policy or make_renaming_policy(csp.source_names(p))
    reserved = ReservedNames()
    inner = encode_inner(p, policy, reserved)
    act = reserved.act
    c, r, l, s = _announcement_params(reserved)
    test = expand_if(l, expand_bool(s, True, reserved), ccs.Nil(), reserved)
    coordinator = ccs.rep(act, (c, r, l, s), ccs.par(ccs.out(r), test))
    encoded = ccs.res((act,), ccs.par(inner, coordinator))
    logging.debug(f"Decentral encoding uses {len(ccs.all_names(encoded))} names.")
    return encoded


def encode(
    p: csp.SourceProcess,
    coordinator: Coordinator,
    policy: RenamingPolicy | None = None,
) -> ccs.TargetProcess:
    if coordinator is Coordinator.CENTRAL:
        return encode_central(p, policy)
    return encode_decentral(p, policy)


def strip_once(t: ccs.TargetProcess) -> ccs.TargetProcess:
    """Remove the single-attempt guard of a central encoding.

    Drops the once-channel from its restriction, every output on it, and turns
    !o().act(x̃).P into !act(x̃).P. Applied to a central encoding the result is
    the decentral encoding of the same term.
    """
    match t:
        case ccs.Output(chan, _) if chan.role is Role.ONCE:
            return ccs.Nil()
        case ccs.RepInput(chan, (), ccs.Input(inner_chan, params, body)) if chan.role is Role.ONCE:
            return ccs.RepInput(inner_chan, params, strip_once(body))
        case ccs.Par(left, right):
            return ccs.par(strip_once(left), strip_once(right))
        case ccs.Res(names, body):
            return ccs.res(tuple(n for n in names if n.role is not Role.ONCE), strip_once(body))
        case ccs.Input(chan, params, body):
            return ccs.Input(chan, params, strip_once(body))
        case ccs.RepInput(chan, params, body):
            return ccs.RepInput(chan, params, strip_once(body))
        case ccs.Match(x, y, body):
            return ccs.Match(x, y, strip_once(body))
    return t
