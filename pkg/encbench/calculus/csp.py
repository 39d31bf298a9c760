"""CSP with multiway synchronisation, success, concealment and renaming.

Terms are immutable dataclasses, so they hash structurally and serve directly as
the nodes of source reduction graphs. The labelled semantics follows the usual
structural rules: prefix/external choice, concealment, renaming, recursion,
interleaving and synchronisation on the parallel set, divergence and internal
choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, NamedTuple, TypeAlias

from encbench.calculus.errors import IllFormedTermError
from encbench.calculus.names import Name


class Tau(Enum):
    TAU = "tau"

    def __str__(self) -> str:
        return "tau"


TAU = Tau.TAU
SourceLabel: TypeAlias = Name | Tau


@dataclass(frozen=True)
class Stop:
    pass


@dataclass(frozen=True)
class Div:
    pass


@dataclass(frozen=True)
class Success:
    pass


@dataclass(frozen=True)
class Par:
    left: SourceProcess
    right: SourceProcess
    sync: frozenset[Name] = frozenset()


@dataclass(frozen=True)
class IntChoice:
    left: SourceProcess
    right: SourceProcess


@dataclass(frozen=True)
class Conceal:
    body: SourceProcess
    hidden: Name


@dataclass(frozen=True)
class Rename:
    """`mapping` lists (x, f(x)) pairs; its first components are Dom(f)."""

    body: SourceProcess
    mapping: tuple[tuple[Name, Name], ...]

    def apply(self, label: SourceLabel) -> SourceLabel:
        for x, image in self.mapping:
            if x == label:
                return image
        return label

    @property
    def domain(self) -> tuple[Name, ...]:
        return tuple(x for x, _ in self.mapping)


@dataclass(frozen=True)
class Var:
    var: str


@dataclass(frozen=True)
class Mu:
    var: str
    body: SourceProcess


@dataclass(frozen=True)
class ExtSum:
    branches: tuple[tuple[Name, SourceProcess], ...]


SourceProcess: TypeAlias = (
    Stop | Div | Success | Par | IntChoice | Conceal | Rename | Var | Mu | ExtSum
)


def prefix(action: Name, continuation: SourceProcess) -> ExtSum:
    return ExtSum(((action, continuation),))


class SourceStep(NamedTuple):
    """One derivable transition plus the syntactic positions it uses.

    `resources` holds the paths of the sums, choices, recursions and divergences
    the step reduces; two steps sharing a resource are in conflict.
    """

    label: SourceLabel
    target: SourceProcess
    resources: frozenset[tuple[int, ...]]


# ---------------------------------------------------------------------------
# Well-formedness and variables


def free_vars(p: SourceProcess) -> frozenset[str]:
    match p:
        case Var(var):
            return frozenset({var})
        case Mu(var, body):
            return free_vars(body) - {var}
        case Par(left, right, _) | IntChoice(left, right):
            return free_vars(left) | free_vars(right)
        case Conceal(body, _) | Rename(body, _):
            return free_vars(body)
        case ExtSum(branches):
            return frozenset().union(*(free_vars(q) for _, q in branches))
        case _:
            return frozenset()


def check_well_formed(p: SourceProcess) -> None:
    """Reject terms that the semantics is not defined on."""
    unbound = free_vars(p)
    if unbound:
        raise IllFormedTermError(
            f"Unbound process variable(s): {', '.join(sorted(unbound))}"
        )
    for sub in subterms(p):
        if isinstance(sub, ExtSum) and not sub.branches:
            raise IllFormedTermError("External choice needs at least one branch.")
        if isinstance(sub, Rename):
            domain = sub.domain
            if len(set(domain)) != len(domain):
                raise IllFormedTermError(
                    f"Renaming lists a name twice in its domain: {domain}"
                )


def subterms(p: SourceProcess) -> Iterator[SourceProcess]:
    yield p
    match p:
        case Par(left, right, _) | IntChoice(left, right):
            yield from subterms(left)
            yield from subterms(right)
        case Conceal(body, _) | Rename(body, _) | Mu(_, body):
            yield from subterms(body)
        case ExtSum(branches):
            for _, q in branches:
                yield from subterms(q)


def _fresh_var(base: str, avoid: frozenset[str]) -> str:
    index = 1
    while f"{base}{index}" in avoid:
        index += 1
    return f"{base}{index}"


def substitute_var(p: SourceProcess, var: str, q: SourceProcess) -> SourceProcess:
    """Capture-avoiding p[q/var]."""
    match p:
        case Var(name):
            return q if name == var else p
        case Mu(bound, body):
            if bound == var:
                return p
            q_free = free_vars(q)
            if bound in q_free:
                renamed = _fresh_var(bound, q_free | free_vars(body) | {var})
                body = substitute_var(body, bound, Var(renamed))
                bound = renamed
            return Mu(bound, substitute_var(body, var, q))
        case Par(left, right, sync):
            return Par(substitute_var(left, var, q), substitute_var(right, var, q), sync)
        case IntChoice(left, right):
            return IntChoice(substitute_var(left, var, q), substitute_var(right, var, q))
        case Conceal(body, hidden):
            return Conceal(substitute_var(body, var, q), hidden)
        case Rename(body, mapping):
            return Rename(substitute_var(body, var, q), mapping)
        case ExtSum(branches):
            return ExtSum(tuple((a, substitute_var(c, var, q)) for a, c in branches))
        case _:
            return p


def unfold(p: Mu) -> SourceProcess:
    return substitute_var(p.body, p.var, p)


# ---------------------------------------------------------------------------
# Labelled semantics


def source_steps(p: SourceProcess, path: tuple[int, ...] = ()) -> list[SourceStep]:
    """All derivable transitions of `p` together with their resources."""
    steps: list[SourceStep] = []
    match p:
        case ExtSum(branches):
            for action, continuation in branches:
                steps.append(SourceStep(action, continuation, frozenset({path})))
        case Mu():
            steps.append(SourceStep(TAU, unfold(p), frozenset({path})))
        case Div():
            steps.append(SourceStep(TAU, p, frozenset({path})))
        case IntChoice(left, right):
            steps.append(SourceStep(TAU, left, frozenset({path})))
            steps.append(SourceStep(TAU, right, frozenset({path})))
        case Conceal(body, hidden):
            for step in source_steps(body, path + (0,)):
                label = TAU if step.label == hidden else step.label
                steps.append(
                    SourceStep(label, Conceal(step.target, hidden), step.resources)
                )
        case Rename(body, mapping):
            for step in source_steps(body, path + (0,)):
                steps.append(
                    SourceStep(
                        p.apply(step.label), Rename(step.target, mapping), step.resources
                    )
                )
        case Par(left, right, sync):
            left_steps = source_steps(left, path + (0,))
            right_steps = source_steps(right, path + (1,))
            for step in left_steps:
                if step.label not in sync:
                    steps.append(
                        SourceStep(step.label, Par(step.target, right, sync), step.resources)
                    )
            for step in right_steps:
                if step.label not in sync:
                    steps.append(
                        SourceStep(step.label, Par(left, step.target, sync), step.resources)
                    )
            for lstep in left_steps:
                if lstep.label not in sync:
                    continue
                for rstep in right_steps:
                    if rstep.label == lstep.label:
                        steps.append(
                            SourceStep(
                                lstep.label,
                                Par(lstep.target, rstep.target, sync),
                                lstep.resources | rstep.resources,
                            )
                        )
    return steps


def source_transitions(p: SourceProcess) -> frozenset[tuple[SourceLabel, SourceProcess]]:
    return frozenset((step.label, step.target) for step in source_steps(p))


def source_reductions(p: SourceProcess) -> frozenset[SourceProcess]:
    """Successors under the τ-only reduction relation."""
    return frozenset(target for label, target in source_transitions(p) if label is TAU)


def source_barbs(p: SourceProcess) -> frozenset[Name]:
    return frozenset(label for label, _ in source_transitions(p) if label is not TAU)


def source_has_success(p: SourceProcess) -> bool:
    match p:
        case Success():
            return True
        case Par(left, right, _):
            return source_has_success(left) or source_has_success(right)
        case Conceal(body, _) | Rename(body, _):
            return source_has_success(body)
        case _:
            return False


def source_distributable_components(p: SourceProcess) -> list[SourceProcess]:
    match p:
        case Par(left, right, _):
            return source_distributable_components(left) + source_distributable_components(
                right
            )
        case Conceal(body, hidden):
            return [Conceal(c, hidden) for c in source_distributable_components(body)]
        case Rename(body, mapping):
            return [Rename(c, mapping) for c in source_distributable_components(body)]
        case _:
            return [p]


def distributable(first: SourceStep, second: SourceStep) -> bool:
    return not (first.resources & second.resources)


# ---------------------------------------------------------------------------
# Names


def alphabet(p: SourceProcess) -> frozenset[Name]:
    """Visible actions `p` may ever perform, by a syntactic over-approximation."""
    match p:
        case ExtSum(branches):
            result = frozenset(a for a, _ in branches)
            for _, q in branches:
                result |= alphabet(q)
            return result
        case Par(left, right, _) | IntChoice(left, right):
            return alphabet(left) | alphabet(right)
        case Conceal(body, hidden):
            return alphabet(body) - {hidden}
        case Rename(body, _):
            return frozenset(p.apply(a) for a in alphabet(body))
        case Mu(_, body):
            return alphabet(body)
        case _:
            return frozenset()


def _ordered_names(p: SourceProcess, seen: dict[Name, None]) -> None:
    match p:
        case ExtSum(branches):
            for action, q in branches:
                seen.setdefault(action)
                _ordered_names(q, seen)
        case Par(left, right, _) | IntChoice(left, right):
            _ordered_names(left, seen)
            _ordered_names(right, seen)
        case Conceal(body, hidden):
            _ordered_names(body, seen)
            seen.setdefault(hidden)
        case Rename(body, mapping):
            _ordered_names(body, seen)
            for x, image in mapping:
                seen.setdefault(x)
                seen.setdefault(image)
        case Mu(_, body):
            _ordered_names(body, seen)


def source_names(p: SourceProcess) -> tuple[Name, ...]:
    """All names of `p` in first-occurrence order.

    Names that only occur in synchronisation sets come last, sorted, since a set
    has no occurrence order of its own.
    """
    seen: dict[Name, None] = {}
    _ordered_names(p, seen)
    sync_only = {
        a
        for sub in subterms(p)
        if isinstance(sub, Par)
        for a in sub.sync
        if a not in seen
    }
    return tuple(seen) + tuple(sorted(sync_only))


def rename_source(p: SourceProcess, sigma: Mapping[Name, Name]) -> SourceProcess:
    """Apply a name substitution to every name occurrence of `p`."""

    def s(a: Name) -> Name:
        return sigma.get(a, a)

    match p:
        case ExtSum(branches):
            return ExtSum(tuple((s(a), rename_source(q, sigma)) for a, q in branches))
        case Par(left, right, sync):
            return Par(
                rename_source(left, sigma),
                rename_source(right, sigma),
                frozenset(s(a) for a in sync),
            )
        case IntChoice(left, right):
            return IntChoice(rename_source(left, sigma), rename_source(right, sigma))
        case Conceal(body, hidden):
            return Conceal(rename_source(body, sigma), s(hidden))
        case Rename(body, mapping):
            return Rename(
                rename_source(body, sigma), tuple((s(x), s(y)) for x, y in mapping)
            )
        case Mu(var, body):
            return Mu(var, rename_source(body, sigma))
        case _:
            return p


def count_parallel(p: SourceProcess) -> int:
    return sum(1 for sub in subterms(p) if isinstance(sub, Par))


def sync_names(p: SourceProcess) -> frozenset[Name]:
    return frozenset(
        a for sub in subterms(p) if isinstance(sub, Par) for a in sub.sync
    )
