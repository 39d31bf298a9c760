from __future__ import annotations

from enum import Enum
from typing import NamedTuple


class NameKind(str, Enum):
    SOURCE = "source"
    RESERVED = "reserved"
    GENERATED = "generated"


class Role(str, Enum):
    """What a target name is used for inside the encodings.

    Roles never influence the semantics of a term. They travel with names into
    canonical states so that step classification and lock analysis can tell a
    lock from a request channel after every bound name has been renumbered.
    """

    OUTER_ACT = "act"
    ACT = "act*"
    ACT_BRIDGE = "act'"
    CHAN = "c"
    LOCK = "l"
    LOCK_GUARD = "l'"
    REQ = "r"
    SIMU = "s"
    NEXT = "mt"
    SYN = "syn"
    SYN_BRIDGE = "syn'"
    BOOL = "v"
    TAU = "tau"
    ONCE = "o"
    MU = "mu"
    REP = "rep"
    VAR = "x"
    TRUE = "t"
    FALSE = "f"
    PARAM = "y"
    REF = "ref"
    SYNC_LEFT = "left"
    SYNC_RIGHT = "right"


# Steps on these channels are simulation steps under both coordinators.
CHOICE_ROLES = frozenset({Role.MU, Role.REP, Role.VAR})


class Name(NamedTuple):
    ident: str
    kind: NameKind = NameKind.SOURCE
    role: Role | None = None

    def __str__(self) -> str:
        return self.ident

    @property
    def is_source(self) -> bool:
        return self.kind is NameKind.SOURCE


def source_name(ident: str) -> Name:
    return Name(ident, NameKind.SOURCE)
