"""Translated barbs of target states.

A state shows the translated barb `a` when an announcement of `a` waits on the
outermost act channel, a coordinator is ready to take it, and the lock test it
would trigger answers ⊤. A state also shows `a` when an announcement of `a` was
already taken by a decentral coordinator and its pending lock test answers ⊤.
Announcements of τ are never barbs.
"""

from __future__ import annotations

import logging
from typing import Callable, NamedTuple

from encbench.calculus.canonical import (
    AtomKind,
    CanonicalState,
    RawState,
    drain,
    output_template,
    probe,
)
from encbench.calculus.csp import SourceLabel
from encbench.calculus.errors import ProbeBudgetExceeded
from encbench.calculus.names import Name, Role

# Decodes the first argument of an announcement into a source label, or None
# for names outside the policy. Only visible source names become barbs.
LabelDecoder = Callable[[Name], SourceLabel | None]


class Announcement(NamedTuple):
    atom: int
    label: Name
    req: int
    lock: int


def coordinator_ready(raw: RawState | CanonicalState) -> bool:
    """Some coordinator can receive on the outermost act channel now.

    The central coordinator is ready while its once token is out or its single
    act input is unguarded. The replicated decentral coordinator is always ready.
    """
    for template, env in raw.atoms:
        role = raw.role(env[template.subject]) if template.subject is not None else None
        if template.kind in (AtomKind.INPUT, AtomKind.REP) and role is Role.OUTER_ACT:
            return True
        if template.kind is AtomKind.OUTPUT and role is Role.ONCE:
            return True
    return False


def outer_announcements(raw: RawState | CanonicalState, decode: LabelDecoder) -> list[Announcement]:
    found = []
    for i, (template, env) in enumerate(raw.atoms):
        if template.kind is not AtomKind.OUTPUT or len(template.args) != 4:
            continue
        if raw.role(env[template.subject]) is not Role.OUTER_ACT:
            continue
        c, req, lock, _ = (env[s] for s in template.args)
        if raw.role(c) is Role.TAU:
            continue
        label = decode(raw.name(c))
        if isinstance(label, Name):
            found.append(Announcement(i, label, req, lock))
    return found


def evaluate_announcement(raw: RawState, announcement: Announcement, budget: int) -> bool | None:
    """Consume `announcement` as a coordinator would and probe its lock.

    Lock tests already in flight are answered first, so the injected test
    never overtakes a coordinator that committed earlier.
    """
    work = raw.copy()
    del work.atoms[announcement.atom]
    work = drain(work, budget)
    t, f = work.fresh(Role.TRUE), work.fresh(Role.FALSE)
    work.atoms.append((output_template(0), (announcement.req,)))
    work.atoms.append((output_template(2), (announcement.lock, t, f)))
    return probe(work, t, budget)


def translated_barbs(
    state: CanonicalState,
    decode: LabelDecoder,
    budget: int = 10_000,
    include_pending: bool = True,
) -> tuple[frozenset[Name], bool]:
    """Barbs of `state` and whether some probe ran out of budget."""
    raw = state.raw()
    barbs: set[Name] = set()
    inconclusive = False
    announcements = outer_announcements(raw, decode) if coordinator_ready(raw) else []
    for announcement in announcements:
        if announcement.label in barbs:
            continue
        try:
            if evaluate_announcement(raw, announcement, budget):
                barbs.add(announcement.label)
        except ProbeBudgetExceeded as e:
            logging.warning(f"Barb probe for {announcement.label} gave up: {e}")
            inconclusive = True
    if include_pending:
        for entry in state.pending:
            if entry.label.role is Role.TAU or entry.label in barbs:
                continue
            try:
                if probe(raw, entry.carrier, budget):
                    barbs.add(entry.label)
            except ProbeBudgetExceeded as e:
                logging.warning(f"Pending probe for {entry.label} gave up: {e}")
                inconclusive = True
    return frozenset(barbs), inconclusive
