"""Canonical states of target terms and their reduction semantics.

A state is a prenex restriction over a multiset of atoms (outputs, inputs,
replicated inputs, stuck matches and success). Each atom is a closure: an
interned `Template` describing its shape with every name abstracted into a
numbered slot, plus an environment filling the slots. Environment entries are
ints: bound names are numbered from 0, free names are negative indices into the
state's sorted free-name table (-1 is the first free name).

Input bodies are compiled once per template into plans, so firing a redex never
walks or rebuilds an AST.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, TypeAlias

from encbench.calculus import ccs
from encbench.calculus.errors import ArityError, ProbeBudgetExceeded
from encbench.calculus.names import Name, NameKind, Role

Atom: TypeAlias = "tuple[Template, tuple[int, ...]]"


class AtomKind(str, Enum):
    OUTPUT = "o"
    INPUT = "i"
    REP = "r"
    MATCH = "m"
    SUCCESS = "s"


# ---------------------------------------------------------------------------
# Normalised atom trees
#
# A normalised component is one of
#   ("o", chan, args)
#   ("i" | "r", chan, params, body)
#   ("m", x, y, body)
#   ("s",)
# and a normalised body is (restricted_names, components). Names are the
# binder-unique names produced by `_uniquify`.

_unique = itertools.count()


def _uniquify(t: ccs.TargetProcess) -> ccs.TargetProcess:
    """Give every binder a globally fresh name so that scopes never shadow."""

    def fresh(n: Name) -> Name:
        return Name(f"{n.ident}#{next(_unique)}", NameKind.GENERATED, n.role)

    def walk(t: ccs.TargetProcess, env: dict[Name, Name]) -> ccs.TargetProcess:
        match t:
            case ccs.Par(left, right):
                return ccs.Par(walk(left, env), walk(right, env))
            case ccs.Res(names, body):
                inner = dict(env)
                renamed = []
                for n in names:
                    inner[n] = fresh(n)
                    renamed.append(inner[n])
                return ccs.Res(tuple(renamed), walk(body, inner))
            case ccs.Input(chan, params, body) | ccs.RepInput(chan, params, body):
                inner = dict(env)
                renamed = []
                for n in params:
                    inner[n] = fresh(n)
                    renamed.append(inner[n])
                kind = type(t)
                return kind(env.get(chan, chan), tuple(renamed), walk(body, inner))
            case ccs.Output(chan, args):
                return ccs.Output(env.get(chan, chan), tuple(env.get(a, a) for a in args))
            case ccs.Match(x, y, body):
                return ccs.Match(env.get(x, x), env.get(y, y), walk(body, env))
            case _:
                return t

    return walk(t, {})


def _flatten(t: ccs.TargetProcess, names: list[Name], comps: list[tuple]) -> None:
    match t:
        case ccs.Nil():
            return
        case ccs.Par(left, right):
            _flatten(left, names, comps)
            _flatten(right, names, comps)
        case ccs.Res(bound, body):
            names.extend(bound)
            _flatten(body, names, comps)
        case ccs.Match(x, y, body) if x == y:
            _flatten(body, names, comps)
        case ccs.Match(x, y, body):
            comps.append(("m", x, y, _normal_body(body)))
        case ccs.Output(chan, args):
            comps.append(("o", chan, args))
        case ccs.Input(chan, params, body):
            comps.append(("i", chan, params, _normal_body(body)))
        case ccs.RepInput(chan, params, body):
            comps.append(("r", chan, params, _normal_body(body)))
        case ccs.Success():
            comps.append(("s",))


def _shape(comp: tuple) -> tuple:
    """Name-blind shape of a component, used to order siblings."""
    match comp[0]:
        case "o":
            return ("o", len(comp[2]))
        case "i" | "r":
            return (comp[0], len(comp[2]), _body_shape(comp[3]))
        case "m":
            return ("m", _body_shape(comp[3]))
        case _:
            return ("s",)


def _body_shape(body: tuple) -> tuple:
    names, comps = body
    return (tuple(n.role.value if n.role else "" for n in names), tuple(_shape(c) for c in comps))


def _normal_body(t: ccs.TargetProcess) -> tuple:
    names: list[Name] = []
    comps: list[tuple] = []
    _flatten(t, names, comps)
    comps.sort(key=lambda c: repr(_shape(c)))
    return (tuple(names), tuple(comps))


class _Numbering:
    """Slot and local numbering for one template key."""

    def __init__(self) -> None:
        self.slots: dict[Name, int] = {}
        self.locals: dict[Name, int] = {}

    def bind(self, n: Name) -> None:
        self.locals[n] = len(self.locals)

    def ref(self, n: Name) -> tuple:
        if n in self.locals:
            return ("l", self.locals[n])
        if n not in self.slots:
            self.slots[n] = len(self.slots)
        return ("s", self.slots[n])


def _occurs(n: Name, comps: Iterable[tuple]) -> bool:
    for c in comps:
        match c[0]:
            case "o":
                if n == c[1] or n in c[2]:
                    return True
            case "i" | "r":
                if n == c[1] or _occurs(n, c[3][1]):
                    return True
            case "m":
                if n in (c[1], c[2]) or _occurs(n, c[3][1]):
                    return True
    return False


def _used_names(body: tuple) -> tuple[Name, ...]:
    names, comps = body
    return tuple(n for n in names if _occurs(n, comps))


def _key_comp(comp: tuple, num: _Numbering) -> tuple:
    match comp[0]:
        case "o":
            return ("o", num.ref(comp[1]), tuple(num.ref(a) for a in comp[2]))
        case "i" | "r":
            chan = num.ref(comp[1])
            for p in comp[2]:
                num.bind(p)
            return (comp[0], chan, len(comp[2]), _key_body(comp[3], num))
        case "m":
            return ("m", num.ref(comp[1]), num.ref(comp[2]), _key_body(comp[3], num))
        case _:
            return ("s",)


def _key_body(body: tuple, num: _Numbering) -> tuple:
    names = _used_names(body)
    for n in names:
        num.bind(n)
    roles = tuple(n.role.value if n.role else "" for n in names)
    return (roles, tuple(_key_comp(c, num) for c in body[1]))


# ---------------------------------------------------------------------------
# Templates


class Template:
    """Interned shape of an atom; compared by identity."""

    __slots__ = (
        "kind", "key", "order", "nf", "slots", "arity", "subject", "args",
        "nparams", "match_slots", "out_counts", "in_counts", "sends",
        "guards_success", "body_outputs", "_plan",
    )

    def __init__(self, key: tuple, nf: tuple, slots: tuple[Name, ...]):
        self.key = key
        self.order = repr(key)
        self.nf = nf
        self.slots = slots
        self.arity = len(slots)
        self.kind = AtomKind(nf[0])
        self.subject: int | None = None
        self.args: tuple[int, ...] = ()
        self.nparams = 0
        self.match_slots: tuple[int, int] | None = None
        slot_of = {n: i for i, n in enumerate(slots)}
        if self.kind is AtomKind.OUTPUT:
            self.subject = slot_of[nf[1]]
            self.args = tuple(slot_of[a] for a in nf[2])
        elif self.kind in (AtomKind.INPUT, AtomKind.REP):
            self.subject = slot_of[nf[1]]
            self.nparams = len(nf[2])
        elif self.kind is AtomKind.MATCH:
            self.match_slots = (slot_of[nf[1]], slot_of[nf[2]])
        outs: dict[int, int] = {}
        ins: dict[int, int] = {}
        sends: set[tuple[int | None, tuple[int, ...]]] = set()
        body_outputs: set[int] = set()
        success = [False]

        def scan(comp: tuple, top: bool) -> None:
            match comp[0]:
                case "o":
                    if comp[1] in slot_of:
                        s = slot_of[comp[1]]
                        outs[s] = outs.get(s, 0) + 1
                        if not top:
                            body_outputs.add(s)
                    carried = tuple(slot_of[a] for a in comp[2] if a in slot_of)
                    if carried:
                        # None: sent on a name bound inside the template.
                        sends.add((slot_of.get(comp[1]), carried))
                case "i" | "r" | "m":
                    if comp[0] != "m" and comp[1] in slot_of:
                        s = slot_of[comp[1]]
                        ins[s] = ins.get(s, 0) + 1
                    for sub in comp[3][1]:
                        scan(sub, False)
                case _:
                    success[0] = True

        scan(nf, True)
        self.out_counts = tuple(outs.items())
        self.in_counts = tuple(ins.items())
        self.sends = tuple(sorted(sends, key=repr))
        self.body_outputs = frozenset(body_outputs)
        self.guards_success = success[0]
        self._plan = None

    def __repr__(self) -> str:
        return f"Template({self.order})"

    @property
    def plan(self) -> tuple:
        if self._plan is None:
            self._plan = _compile(self)
        return self._plan


_TEMPLATES: dict[tuple, Template] = {}


def template_of(comp: tuple) -> tuple[Template, tuple[Name, ...]]:
    """Intern the template of a normalised component; return it with its slot names."""
    num = _Numbering()
    key = _key_comp(comp, num)
    slots = tuple(sorted(num.slots, key=num.slots.__getitem__))
    template = _TEMPLATES.get(key)
    if template is None:
        template = Template(key, comp, slots)
        _TEMPLATES[key] = template
        return template, slots
    return template, slots


# ---------------------------------------------------------------------------
# Plans
#
#   (ATOM, template, refs)
#   (NEW, positions, roles)
#   (MATCH, x, y, subplan, stuck_template, stuck_refs)

_ATOM, _NEW, _MATCH, _SUCCESS = 0, 1, 2, 3


def _compile(template: Template) -> tuple:
    nf = template.nf
    frame: dict[Name, int] = {n: i for i, n in enumerate(template.slots)}
    for p in nf[2]:
        frame[p] = len(frame)

    def body_plan(body: tuple) -> tuple:
        steps: list[tuple] = []
        names = _used_names(body)
        if names:
            positions = []
            for n in names:
                frame[n] = len(frame)
                positions.append(frame[n])
            steps.append((_NEW, tuple(positions), tuple(n.role for n in names)))
        for comp in body[1]:
            if comp[0] == "m":
                sub = body_plan(comp[3])
                stuck, slots = template_of(comp)
                steps.append(
                    (_MATCH, frame[comp[1]], frame[comp[2]], sub, stuck,
                     tuple(frame[n] for n in slots))
                )
            elif comp[0] == "s":
                steps.append((_SUCCESS,))
            else:
                sub_template, slots = template_of(comp)
                steps.append((_ATOM, sub_template, tuple(frame[n] for n in slots)))
        return tuple(steps)

    plan = body_plan(nf[3])
    return (len(frame), plan)


@functools.cache
def success_template() -> Template:
    return template_of(("s",))[0]


@functools.cache
def output_template(arity: int) -> Template:
    chan = Name("c", NameKind.GENERATED)
    args = tuple(Name(f"x{i}", NameKind.GENERATED) for i in range(arity))
    return template_of(("o", chan, args))[0]


@functools.cache
def _lock_instance(positive: bool) -> Template:
    lock = Name("l", NameKind.GENERATED)
    t = Name("t", NameKind.GENERATED, Role.TRUE)
    f = Name("f", NameKind.GENERATED, Role.FALSE)
    body = ((), (("o", t if positive else f, ()),))
    return template_of(("i", lock, (t, f), body))[0]


def lock_value(template: Template) -> bool | None:
    """⊤/⊥ for the two Boolean-instantiation shapes l(t,f).t⟨⟩ / l(t,f).f⟨⟩."""
    if template is _lock_instance(True):
        return True
    if template is _lock_instance(False):
        return False
    return None


# ---------------------------------------------------------------------------
# States


class Pending(NamedTuple):
    """A consumed announcement whose lock test has not been answered yet."""

    label: Name
    carrier: int


@dataclass(frozen=True, eq=False)
class CanonicalState:
    free: tuple[Name, ...]
    roles: tuple[Role | None, ...]
    atoms: tuple[Atom, ...]
    pending: tuple[Pending, ...] = ()
    _hash: int = field(default=0, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_hash", hash((self.free, self.roles, self.atoms, self.pending))
        )

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CanonicalState):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.atoms == other.atoms
            and self.free == other.free
            and self.roles == other.roles
            and self.pending == other.pending
        )

    def raw(self) -> RawState:
        return RawState(
            atoms=list(self.atoms),
            roles=dict(enumerate(self.roles)),
            free=self.free,
            next_id=len(self.roles),
            pending=list(self.pending),
        )

    def name(self, ident: int) -> Name:
        return _name_of(ident, self.free, self.roles[ident] if ident >= 0 else None)

    def role(self, ident: int) -> Role | None:
        return self.roles[ident] if ident >= 0 else self.free[-ident - 1].role


def _name_of(ident: int, free: tuple[Name, ...], role: Role | None) -> Name:
    if ident < 0:
        return free[-ident - 1]
    return Name(f"%{ident}", NameKind.GENERATED, role)


@dataclass
class RawState:
    """Mutable working form between two canonical states."""

    atoms: list[Atom]
    roles: dict[int, Role | None]
    free: tuple[Name, ...]
    next_id: int
    pending: list[Pending]

    def copy(self) -> RawState:
        return RawState(
            list(self.atoms), dict(self.roles), self.free, self.next_id, list(self.pending)
        )

    def role(self, ident: int) -> Role | None:
        return self.roles.get(ident) if ident >= 0 else self.free[-ident - 1].role

    def name(self, ident: int) -> Name:
        return _name_of(ident, self.free, self.roles.get(ident) if ident >= 0 else None)

    def fresh(self, role: Role | None) -> int:
        ident = self.next_id
        self.next_id += 1
        self.roles[ident] = role
        return ident


# ---------------------------------------------------------------------------
# From terms to states


class Settings(NamedTuple):
    prune: bool = True
    compress: bool = True
    settle_limit: int = 10_000


def to_raw(t: ccs.TargetProcess) -> RawState:
    t = _uniquify(t)
    names, comps = _normal_body(t)
    free = tuple(sorted(ccs.free_names(t)))
    ids: dict[Name, int] = {n: -(i + 1) for i, n in enumerate(free)}
    raw = RawState([], {}, free, 0, [])
    for n in names:
        ids[n] = raw.fresh(n.role)
    for comp in comps:
        template, slots = template_of(comp)
        raw.atoms.append((template, tuple(ids[n] for n in slots)))
    return raw


def canonicalize(t: ccs.TargetProcess, settings: Settings = Settings(compress=False)) -> CanonicalState:
    raw = to_raw(t)
    if settings.compress:
        raw = settle(raw, settings)
    return normalize(raw, settings.prune)[0]


def materialize(state: CanonicalState) -> ccs.TargetProcess:
    """Read a canonical state back as a term (pending metadata is dropped)."""
    parts = []
    for template, env in state.atoms:
        actual = {slot: state.name(i) for slot, i in zip(template.slots, env)}
        parts.append(ccs.substitute(_nf_to_term(template.nf), actual))
    bound = tuple(state.name(i) for i in range(len(state.roles)))
    return ccs.res(bound, ccs.par(*parts))


def _nf_to_term(comp: tuple) -> ccs.TargetProcess:
    match comp[0]:
        case "o":
            return ccs.Output(comp[1], tuple(comp[2]))
        case "i":
            return ccs.Input(comp[1], tuple(comp[2]), _nf_body_to_term(comp[3]))
        case "r":
            return ccs.RepInput(comp[1], tuple(comp[2]), _nf_body_to_term(comp[3]))
        case "m":
            return ccs.Match(comp[1], comp[2], _nf_body_to_term(comp[3]))
        case _:
            return ccs.Success()


def _nf_body_to_term(body: tuple) -> ccs.TargetProcess:
    names, comps = body
    return ccs.res(_used_names(body), ccs.par(*(_nf_to_term(c) for c in comps)))


# ---------------------------------------------------------------------------
# Occurrence analysis, pruning and numbering


class Occurrences:
    """Deep occurrence counts of every name of a raw state.

    A bound name escapes when some output that can still be received carries
    it. An output can be received when its channel is free, has an input
    somewhere in the state, escapes itself, or is bound inside the sending
    atom. Names carried only on channels nobody can ever listen to stay
    private, so spent if-constructs that re-offer their own carriers are junk.
    """

    def __init__(self, raw: RawState):
        self.outs: dict[int, int] = {}
        self.ins: dict[int, int] = {}
        sends: list[tuple[int | None, tuple[int, ...]]] = []
        for template, env in raw.atoms:
            for slot, count in template.out_counts:
                n = env[slot]
                self.outs[n] = self.outs.get(n, 0) + count
            for slot, count in template.in_counts:
                n = env[slot]
                self.ins[n] = self.ins.get(n, 0) + count
            for subject, carried in template.sends:
                chan = None if subject is None else env[subject]
                sends.append((chan, tuple(env[s] for s in carried)))
        self.escaping: set[int] = set()
        while True:
            grown = False
            for chan, carried in sends:
                if chan is None or chan < 0 or chan in self.ins or chan in self.escaping:
                    for n in carried:
                        if n not in self.escaping:
                            self.escaping.add(n)
                            grown = True
            if not grown:
                return

    def junk(self, atom: Atom) -> bool:
        template, env = atom
        if template.kind is AtomKind.MATCH:
            return True
        if template.kind is AtomKind.SUCCESS:
            return False
        n = env[template.subject]
        if n < 0 or n in self.escaping:
            return False
        if template.kind is AtomKind.OUTPUT:
            return self.ins.get(n, 0) == 0
        own = dict(template.out_counts).get(template.subject, 0)
        if self.outs.get(n, 0) - own > 0:
            return False
        if template.guards_success:
            return False
        return not any(env[s] < 0 for s in template.body_outputs)


def prune(raw: RawState) -> None:
    while True:
        occ = Occurrences(raw)
        kept = [a for a in raw.atoms if not occ.junk(a)]
        if len(kept) == len(raw.atoms):
            return
        raw.atoms = kept


def _live_pending(raw: RawState) -> list[Pending]:
    carriers = {
        env[template.args[0]]
        for template, env in raw.atoms
        if template.kind is AtomKind.OUTPUT and len(template.args) == 2
    }
    return [p for p in raw.pending if p.carrier in carriers]


def _rank(values: dict[int, object]) -> dict[int, int]:
    ordered = sorted(set(values.values()))
    index = {v: i for i, v in enumerate(ordered)}
    return {k: index[v] for k, v in values.items()}


def normalize(raw: RawState, prune_junk: bool = True) -> tuple[CanonicalState, dict[int, int]]:
    """Canonical state of `raw` plus the map from raw bound ids to canonical ids."""
    if prune_junk:
        prune(raw)
    pending = _live_pending(raw)
    atoms = raw.atoms
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for a, (_, env) in enumerate(atoms):
        for p, n in enumerate(env):
            if n >= 0:
                occurrences.setdefault(n, []).append((a, p))
    labels: dict[int, list[str]] = {}
    for entry in pending:
        labels.setdefault(entry.carrier, []).append(entry.label.ident)
    colour = _rank(
        {
            n: ((raw.roles.get(n).value if raw.roles.get(n) else ""), tuple(sorted(labels.get(n, ()))))
            for n in occurrences
        }
    )

    def atom_key(index: int) -> tuple:
        template, env = atoms[index]
        first: dict[int, int] = {}
        entries = []
        for n in env:
            if n < 0:
                name = raw.free[-n - 1]
                entries.append((0, name.ident, name.kind.value, 0))
            else:
                entries.append((1, "", str(colour[n]).zfill(8), first.setdefault(n, len(first))))
        return (template.order, tuple(entries))

    distinct = len(set(colour.values()))
    for _ in range(3):
        keys = [atom_key(a) for a in range(len(atoms))]
        refined = _rank(
            {n: (colour[n], tuple(sorted((keys[a], p) for a, p in occ))) for n, occ in occurrences.items()}
        )
        colour = refined
        now = len(set(colour.values()))
        if now == distinct:
            break
        distinct = now

    keys = [atom_key(a) for a in range(len(atoms))]
    order = sorted(range(len(atoms)), key=keys.__getitem__)

    used_free = sorted({raw.free[-n - 1] for _, env in atoms for n in env if n < 0})
    free_index = {name: -(i + 1) for i, name in enumerate(used_free)}
    idmap: dict[int, int] = {}
    new_atoms = []
    for a in order:
        template, env = atoms[a]
        mapped = []
        for n in env:
            if n < 0:
                mapped.append(free_index[raw.free[-n - 1]])
            else:
                if n not in idmap:
                    idmap[n] = len(idmap)
                mapped.append(idmap[n])
        new_atoms.append((template, tuple(mapped)))
    roles = [None] * len(idmap)
    for old, new in idmap.items():
        roles[new] = raw.roles.get(old)
    new_pending = tuple(sorted(Pending(p.label, idmap[p.carrier]) for p in pending))
    state = CanonicalState(tuple(used_free), tuple(roles), tuple(new_atoms), new_pending)
    return state, idmap


# ---------------------------------------------------------------------------
# Reductions


class Redex(NamedTuple):
    channel: int
    output: int
    input: int
    replicated: bool


def redexes(raw: RawState | CanonicalState) -> list[Redex]:
    outs: dict[int, list[int]] = {}
    ins: dict[int, list[int]] = {}
    for i, (template, env) in enumerate(raw.atoms):
        if template.kind is AtomKind.OUTPUT:
            outs.setdefault(env[template.subject], []).append(i)
        elif template.kind in (AtomKind.INPUT, AtomKind.REP):
            ins.setdefault(env[template.subject], []).append(i)
    found: list[Redex] = []
    seen: set[tuple[Atom, Atom]] = set()
    for chan, outputs in outs.items():
        for j in ins.get(chan, ()):
            receiver = raw.atoms[j]
            for o in outputs:
                sender = raw.atoms[o]
                if len(sender[0].args) != receiver[0].nparams:
                    raise ArityError(
                        str(raw.name(chan)), len(sender[0].args), receiver[0].nparams
                    )
                if (sender, receiver) in seen:
                    continue
                seen.add((sender, receiver))
                found.append(Redex(chan, o, j, receiver[0].kind is AtomKind.REP))
    return found


def instantiate(raw: RawState, template: Template, env: tuple[int, ...], args: tuple[int, ...]) -> None:
    """Append the atoms of the body of input `template` after receiving `args`."""
    size, plan = template.plan
    frame = [0] * size
    frame[: len(env)] = env
    frame[len(env): len(env) + len(args)] = args
    _run(raw, plan, frame)


def _run(raw: RawState, plan: tuple, frame: list[int]) -> None:
    for step in plan:
        tag = step[0]
        if tag == _ATOM:
            raw.atoms.append((step[1], tuple(frame[r] for r in step[2])))
        elif tag == _NEW:
            for position, role in zip(step[1], step[2]):
                frame[position] = raw.fresh(role)
        elif tag == _MATCH:
            if frame[step[1]] == frame[step[2]]:
                _run(raw, step[3], frame)
            else:
                raw.atoms.append((step[4], tuple(frame[r] for r in step[5])))
        else:
            raw.atoms.append((success_template(), ()))


def fire(raw: RawState | CanonicalState, redex: Redex) -> tuple[RawState, int]:
    """Successor of one redex; also returns where the instantiated atoms start."""
    work = raw.raw() if isinstance(raw, CanonicalState) else raw.copy()
    sender = work.atoms[redex.output]
    receiver = work.atoms[redex.input]
    args = tuple(sender[1][s] for s in sender[0].args)
    drop = {redex.output} if redex.replicated else {redex.output, redex.input}
    work.atoms = [a for i, a in enumerate(work.atoms) if i not in drop]
    start = len(work.atoms)
    instantiate(work, receiver[0], receiver[1], args)
    return work, start


def has_success(state: CanonicalState | RawState) -> bool:
    return any(t.kind is AtomKind.SUCCESS for t, _ in state.atoms)


# ---------------------------------------------------------------------------
# Administrative-step compression

# Channels whose steps may decide between source alternatives.
PROTECTED_ROLES = frozenset({Role.OUTER_ACT, Role.LOCK, Role.MU, Role.REP, Role.VAR})


def administrative_redex(raw: RawState) -> Redex | None:
    """A deterministic step on a private channel, if one exists.

    The channel must be bound, never passed as data, unprotected, and have a
    single possible receiver; a linear receiver also needs a single possible
    sender. Such a step commutes with every other step and is unobservable.
    """
    occ = Occurrences(raw)
    outs: dict[int, list[int]] = {}
    ins: dict[int, list[int]] = {}
    for i, (template, env) in enumerate(raw.atoms):
        if template.kind is AtomKind.OUTPUT:
            outs.setdefault(env[template.subject], []).append(i)
        elif template.kind in (AtomKind.INPUT, AtomKind.REP):
            ins.setdefault(env[template.subject], []).append(i)
    for chan in sorted(outs):
        if chan < 0 or chan in occ.escaping or raw.roles.get(chan) in PROTECTED_ROLES:
            continue
        receivers = ins.get(chan, [])
        if len(receivers) != 1 or occ.ins.get(chan, 0) != 1:
            continue
        j = receivers[0]
        replicated = raw.atoms[j][0].kind is AtomKind.REP
        if not replicated and (len(outs[chan]) != 1 or occ.outs.get(chan, 0) != 1):
            continue
        o = outs[chan][0]
        if len(raw.atoms[o][0].args) != raw.atoms[j][0].nparams:
            raise ArityError(str(raw.name(chan)), len(raw.atoms[o][0].args), raw.atoms[j][0].nparams)
        return Redex(chan, o, j, replicated)
    return None


def settle(raw: RawState, settings: Settings = Settings()) -> RawState:
    for _ in range(settings.settle_limit):
        if settings.prune:
            prune(raw)
        redex = administrative_redex(raw)
        if redex is None:
            return raw
        raw, _ = fire(raw, redex)
    raise ProbeBudgetExceeded(
        f"Administrative steps did not settle within {settings.settle_limit} steps."
    )


def target_reductions(
    state: CanonicalState, settings: Settings = Settings(compress=False)
) -> list[tuple[Redex, CanonicalState]]:
    """Every redex of `state` with its canonical successor, unclassified."""
    steps = []
    for redex in redexes(state):
        post, _ = fire(state, redex)
        if settings.compress:
            post = settle(post, settings)
        steps.append((redex, normalize(post, settings.prune)[0]))
    return steps


# ---------------------------------------------------------------------------
# Lock-evaluation probe

# The only channels a probe reduces on: requests, locks, Boolean handshakes
# and the guarded chain of a synchronisation attempt.
LOCK_MACHINERY = frozenset(
    {Role.REQ, Role.LOCK, Role.LOCK_GUARD, Role.SIMU, Role.TRUE, Role.FALSE, Role.BOOL}
)


def _machinery(work: RawState) -> list[Redex]:
    return [r for r in redexes(work) if work.role(r.channel) in LOCK_MACHINERY]


def reader_carrier(raw: RawState, start: int, lock: int) -> int | None:
    """Carrier t of the if-construct output l⟨t,f⟩ created at or after `start`."""
    for template, env in raw.atoms[start:]:
        if (
            template.kind is AtomKind.OUTPUT
            and len(template.args) == 2
            and env[template.subject] == lock
        ):
            return env[template.args[0]]
    return None


def lock_answer(raw: RawState, redex: Redex, carrier: int) -> bool | None:
    """⊤/⊥ if `redex` answers the lock test whose carrier is `carrier`."""
    sender = raw.atoms[redex.output]
    if len(sender[0].args) != 2 or sender[1][sender[0].args[0]] != carrier:
        return None
    return lock_value(raw.atoms[redex.input][0])


def probe(raw: RawState, carrier: int, budget: int) -> bool | None:
    """Run lock machinery until the test carried by `carrier` is answered.

    Returns None when the machinery quiesces first. Raises ProbeBudgetExceeded
    when `budget` steps do not suffice.
    """
    work = raw.copy()
    for _ in range(budget):
        candidates = _machinery(work)
        if not candidates:
            return None
        for redex in candidates:
            answer = lock_answer(work, redex, carrier)
            if answer is not None:
                return answer
        work, _ = fire(work, candidates[0])
    raise ProbeBudgetExceeded(f"Lock probe did not settle within {budget} steps.")


def drain(raw: RawState, budget: int) -> RawState:
    """Run lock machinery to quiescence, answering every lock test in flight."""
    work = raw.copy()
    for _ in range(budget):
        candidates = _machinery(work)
        if not candidates:
            return work
        work, _ = fire(work, candidates[0])
    raise ProbeBudgetExceeded(f"Lock machinery did not quiesce within {budget} steps.")
