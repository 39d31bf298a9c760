from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from encbench.calculus.csp import TAU, SourceLabel, Tau
from encbench.calculus.errors import PolicyError
from encbench.calculus.names import Name, NameKind, Role

# Row of the reserved-name table -> role of the row's variants.
RESERVED_ROWS: dict[str, Role] = {
    "act": Role.ACT,
    "act'": Role.ACT_BRIDGE,
    "c": Role.CHAN,
    "l": Role.LOCK,
    "l'": Role.LOCK_GUARD,
    "r": Role.REQ,
    "s": Role.SIMU,
    "mt": Role.NEXT,
    "syn": Role.SYN,
    "syn'": Role.SYN_BRIDGE,
    "v": Role.BOOL,
    "tau": Role.TAU,
    "o": Role.ONCE,
    "mu": Role.MU,
    "rep": Role.REP,
    "x": Role.VAR,
    "t": Role.TRUE,
    "f": Role.FALSE,
    "y": Role.PARAM,
}


class ReservedNames:
    """The reserved names plus a monotone counter for their variants.

    One instance is threaded through a single encoding run, so two runs over
    the same term produce identical output.
    """

    def __init__(self) -> None:
        self._counter = itertools.count(1)
        self.act = Name("act", NameKind.RESERVED, Role.OUTER_ACT)
        self.tau = Name("tau", NameKind.RESERVED, Role.TAU)
        self.once = Name("o", NameKind.RESERVED, Role.ONCE)

    def fresh(self, row: str) -> Name:
        if row not in RESERVED_ROWS:
            raise KeyError(f"No reserved row {row!r}")
        return Name(f"{row}{next(self._counter)}", NameKind.RESERVED, RESERVED_ROWS[row])

    def fresh_many(self, row: str, count: int) -> tuple[Name, ...]:
        return tuple(self.fresh(row) for _ in range(count))

    @staticmethod
    def is_reserved(name: Name) -> bool:
        return name.kind is NameKind.RESERVED


@dataclass(frozen=True)
class RenamingPolicy:
    """Injective map from source names to reference/left-sync/right-sync triples.

    `order` is the first-occurrence order of the source names; every ordering
    the encoder produces (match products, synchronisation sets, restriction
    lists) follows it, so that renaming a term and renaming its encoding agree.
    """

    order: tuple[Name, ...]
    images: Mapping[Name, tuple[Name, Name, Name]]
    tau: Name = Name("tau", NameKind.RESERVED, Role.TAU)
    _inverse: dict[Name, Name] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        for source, triple in self.images.items():
            for target in triple:
                self._inverse[target] = source

    def triple(self, name: Name) -> tuple[Name, Name, Name]:
        try:
            return self.images[name]
        except KeyError:
            raise PolicyError(f"Renaming policy has no image for {name}") from None

    def ref(self, name: Name) -> Name:
        return self.triple(name)[0]

    def left(self, name: Name) -> Name:
        return self.triple(name)[1]

    def right(self, name: Name) -> Name:
        return self.triple(name)[2]

    def label(self, label: SourceLabel) -> Name:
        """Announcement channel of a source label: its reference name, or τ."""
        return self.tau if isinstance(label, Tau) else self.ref(label)

    def source_of(self, target: Name) -> SourceLabel | None:
        """Inverse of `label`; None for names outside the policy."""
        if target == self.tau:
            return TAU
        return self._inverse.get(target)

    def sort(self, names: Iterable[Name]) -> list[Name]:
        position = {n: i for i, n in enumerate(self.order)}
        wanted = set(names)
        missing = wanted - set(position)
        if missing:
            raise PolicyError(
                f"Renaming policy has no image for {', '.join(sorted(map(str, missing)))}"
            )
        return sorted(wanted, key=position.__getitem__)

    def check(self) -> None:
        """Assert both conditions on the policy: no reserved images, disjoint triples."""
        seen: set[Name] = set()
        for source, triple in self.images.items():
            if len(set(triple)) != 3:
                raise ValueError(f"Image of {source} repeats a name: {triple}")
            for target in triple:
                if ReservedNames.is_reserved(target):
                    raise ValueError(f"{source} is mapped onto reserved name {target}")
                if target in seen:
                    raise ValueError(f"{target} is the image of two source names")
                seen.add(target)


def make_renaming_policy(source_names: Iterable[Name]) -> RenamingPolicy:
    order = tuple(dict.fromkeys(source_names))
    images = {
        n: tuple(
            Name(f"{n.ident}_{i}", NameKind.GENERATED, role)
            for i, role in ((1, Role.REF), (2, Role.SYNC_LEFT), (3, Role.SYNC_RIGHT))
        )
        for n in order
    }
    return RenamingPolicy(order=order, images=images)
