"""Asynchronous CCS with name passing, matching, replication and success."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, TypeAlias

from encbench.calculus.names import Name, NameKind


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Success:
    pass


@dataclass(frozen=True)
class Par:
    left: TargetProcess
    right: TargetProcess


@dataclass(frozen=True)
class Res:
    names: tuple[Name, ...]
    body: TargetProcess


@dataclass(frozen=True)
class Input:
    chan: Name
    params: tuple[Name, ...]
    body: TargetProcess


@dataclass(frozen=True)
class RepInput:
    chan: Name
    params: tuple[Name, ...]
    body: TargetProcess


@dataclass(frozen=True)
class Output:
    chan: Name
    args: tuple[Name, ...] = ()


@dataclass(frozen=True)
class Match:
    x: Name
    y: Name
    body: TargetProcess


TargetProcess: TypeAlias = Nil | Success | Par | Res | Input | RepInput | Output | Match
Substitution: TypeAlias = Mapping[Name, Name]


def par(*components: TargetProcess) -> TargetProcess:
    """Right-nested parallel composition; the empty product is 0."""
    parts = [c for c in components if not isinstance(c, Nil)]
    if not parts:
        return Nil()
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Par(part, result)
    return result


def res(names: tuple[Name, ...] | list[Name], body: TargetProcess) -> TargetProcess:
    names = tuple(names)
    if not names:
        return body
    return Res(names, body)


def inp(chan: Name, params: tuple[Name, ...] | list[Name], body: TargetProcess) -> Input:
    return Input(chan, tuple(params), body)


def rep(chan: Name, params: tuple[Name, ...] | list[Name], body: TargetProcess) -> RepInput:
    return RepInput(chan, tuple(params), body)


def out(chan: Name, *args: Name) -> Output:
    return Output(chan, tuple(args))


def check_params(t: TargetProcess) -> None:
    for sub in subprocesses(t):
        if isinstance(sub, (Input, RepInput)) and len(set(sub.params)) != len(sub.params):
            raise ValueError(f"Repeated parameter in input on {sub.chan}: {sub.params}")


def subprocesses(t: TargetProcess) -> Iterator[TargetProcess]:
    yield t
    match t:
        case Par(left, right):
            yield from subprocesses(left)
            yield from subprocesses(right)
        case Res(_, body) | Input(_, _, body) | RepInput(_, _, body) | Match(_, _, body):
            yield from subprocesses(body)


def free_names(t: TargetProcess) -> frozenset[Name]:
    match t:
        case Par(left, right):
            return free_names(left) | free_names(right)
        case Res(names, body):
            return free_names(body) - set(names)
        case Input(chan, params, body) | RepInput(chan, params, body):
            return {chan} | (free_names(body) - set(params))
        case Output(chan, args):
            return frozenset({chan, *args})
        case Match(x, y, body):
            return {x, y} | free_names(body)
        case _:
            return frozenset()


def free_subjects(t: TargetProcess) -> frozenset[Name]:
    """Free names used as a channel (in input or output subject position)."""
    match t:
        case Par(left, right):
            return free_subjects(left) | free_subjects(right)
        case Res(names, body):
            return free_subjects(body) - set(names)
        case Input(chan, params, body) | RepInput(chan, params, body):
            return {chan} | (free_subjects(body) - set(params))
        case Output(chan, _):
            return frozenset({chan})
        case Match(_, _, body):
            return free_subjects(body)
        case _:
            return frozenset()


def all_names(t: TargetProcess) -> frozenset[Name]:
    found: set[Name] = set()
    for sub in subprocesses(t):
        match sub:
            case Res(names, _):
                found.update(names)
            case Input(chan, params, _) | RepInput(chan, params, _):
                found.add(chan)
                found.update(params)
            case Output(chan, args):
                found.add(chan)
                found.update(args)
            case Match(x, y, _):
                found.update((x, y))
    return frozenset(found)


_primes = itertools.count()


def _fresh_like(name: Name, avoid: set[Name]) -> Name:
    while True:
        candidate = Name(f"{name.ident}'{next(_primes)}", NameKind.GENERATED, name.role)
        if candidate not in avoid:
            return candidate


def substitute(t: TargetProcess, sub: Substitution) -> TargetProcess:
    """Capture-avoiding simultaneous substitution of free names."""
    if not sub:
        return t

    def s(n: Name) -> Name:
        return sub.get(n, n)

    match t:
        case Par(left, right):
            return Par(substitute(left, sub), substitute(right, sub))
        case Output(chan, args):
            return Output(s(chan), tuple(s(a) for a in args))
        case Match(x, y, body):
            return Match(s(x), s(y), substitute(body, sub))
        case Res(names, body):
            new_names, inner = _enter_binder(names, body, sub)
            return Res(new_names, substitute(body, inner))
        case Input(chan, params, body):
            new_params, inner = _enter_binder(params, body, sub)
            return Input(s(chan), new_params, substitute(body, inner))
        case RepInput(chan, params, body):
            new_params, inner = _enter_binder(params, body, sub)
            return RepInput(s(chan), new_params, substitute(body, inner))
        case _:
            return t


def _enter_binder(
    binders: tuple[Name, ...], body: TargetProcess, sub: Substitution
) -> tuple[tuple[Name, ...], dict[Name, Name]]:
    """Rename binders that would capture an image of `sub`; return the inner map."""
    inner = {k: v for k, v in sub.items() if k not in binders}
    relevant = free_names(body)
    images = {v for k, v in inner.items() if k in relevant}
    avoid = images | relevant | set(inner) | set(binders)
    renamed = []
    for b in binders:
        if b in images:
            fresh = _fresh_like(b, avoid)
            avoid.add(fresh)
            inner[b] = fresh
            renamed.append(fresh)
        else:
            renamed.append(b)
    return tuple(renamed), inner
