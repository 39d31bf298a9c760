"""Auxiliary/simulation classification of target steps."""

from __future__ import annotations

import logging
from typing import Callable

from encbench.calculus.canonical import (
    CanonicalState,
    RawState,
    Redex,
    lock_value,
    probe,
    reader_carrier,
)
from encbench.calculus.csp import TAU, SourceLabel
from encbench.calculus.errors import ProbeBudgetExceeded
from encbench.calculus.names import CHOICE_ROLES, Name, NameKind, Role, source_name
from encbench.encoder.coordinators import Coordinator
from encbench.explorer.graph import StepClass, Witness

Decoder = Callable[[Name], SourceLabel | None]


def decode_by_role(name: Name) -> SourceLabel | None:
    """Label decoder for encodings built with the default renaming policy."""
    if name.role is Role.TAU and name.kind is NameKind.RESERVED:
        return TAU
    if name.role is Role.REF and name.ident.endswith("_1"):
        return source_name(name.ident[: -len("_1")])
    return None


def announcement_fields(state: CanonicalState | RawState, redex: Redex) -> tuple[int, ...]:
    template, env = state.atoms[redex.output]
    return tuple(env[s] for s in template.args)


def classify_step(
    pre: CanonicalState,
    redex: Redex,
    post: RawState,
    start: int,
    coordinator: Coordinator,
    decode: Decoder,
    probe_steps: int = 10_000,
) -> tuple[StepClass, Witness, SourceLabel | None]:
    """Class, deciding clause and commit label of the step `redex` from `pre`.

    `post` is the successor before compression and `start` the index of the
    first atom instantiated by the step.
    """
    role = pre.role(redex.channel)
    if role in CHOICE_ROLES:
        return StepClass.SIM, Witness.CHOICE_CHANNEL, None

    if coordinator is Coordinator.CENTRAL:
        if role is not Role.OUTER_ACT:
            return StepClass.AUX, Witness.NO_CLAUSE, None
        c, _, lock, _ = announcement_fields(pre, redex)
        label = decode(pre.name(c))
        carrier = reader_carrier(post, start, lock)
        if carrier is None:
            return StepClass.AUX, Witness.NO_CLAUSE, None
        try:
            answer = probe(post, carrier, probe_steps)
        except ProbeBudgetExceeded as e:
            logging.warning(f"Classifying announcement of {label} as sim: {e}")
            return StepClass.SIM, Witness.PROBE_INCONCLUSIVE, label
        if answer:
            return StepClass.SIM, Witness.OUTER_ACT_POSITIVE, label
        return StepClass.AUX, Witness.NO_CLAUSE, None

    receiver_template = pre.atoms[redex.input][0]
    if lock_value(receiver_template) is not True:
        return StepClass.AUX, Witness.NO_CLAUSE, None
    fields = announcement_fields(pre, redex)
    label = None
    if len(fields) == 2:
        for entry in pre.pending:
            if entry.carrier == fields[0]:
                label = TAU if entry.label.role is Role.TAU else entry.label
                break
    return StepClass.SIM, Witness.POSITIVE_LOCK, label
