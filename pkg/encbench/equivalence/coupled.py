"""Success-sensitive, barb-respecting, weak reduction coupled similarity.

The relation lives on the pairs between two graphs, in both orientations: rows
`forward[p]` (nodes of the second graph related to node p of the first) and
`backward[q]` (nodes of the first related to node q of the second), each a
Python int bitset. A pair (P, Q) survives while every strong step P ⟼ P′ is
answered by some Q ⟹ Q′ with (P′, Q′) related and some Q ⟹ Q″ with (Q″, P′)
related.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

import networkx as nx

from encbench.equivalence.union import UnionGraph, union
from encbench.equivalence.verdict import Verdict
from encbench.explorer.graph import ReductionGraph

CLOSURE_LIMIT = 2_000
AUDIT_LIMIT = 1_500


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Side:
    """One graph of the pair with local ids and a predecessor-closure operator."""

    def __init__(self, u: UnionGraph, index: int):
        self.nodes = u.members(index)
        offset = self.nodes.start
        self.successors = [tuple(v - offset for v in u.successors[n]) for n in self.nodes]
        self.signature = [u.signature[n] for n in self.nodes]
        self.predecessors: list[list[int]] = [[] for _ in self.nodes]
        for a, succ in enumerate(self.successors):
            for b in succ:
                self.predecessors[b].append(a)
        self._reach: list[int] | None = None
        if len(self.nodes) <= CLOSURE_LIMIT:
            self._reach = self._closures()

    def __len__(self) -> int:
        return len(self.nodes)

    def _closures(self) -> list[int]:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self)))
        g.add_edges_from((a, b) for a, succ in enumerate(self.successors) for b in succ)
        condensed = nx.condensation(g)
        members = nx.get_node_attributes(condensed, "members")
        reach: dict[int, int] = {}
        for component in reversed(list(nx.topological_sort(condensed))):
            mask = 0
            for n in members[component]:
                mask |= 1 << n
            for child in condensed.successors(component):
                mask |= reach[child]
            reach[component] = mask
        mapping = condensed.graph["mapping"]
        return [reach[mapping[n]] for n in range(len(self))]

    def reaching(self, target: int) -> int:
        """Bitset of nodes reaching some node of `target` in zero or more steps."""
        if not target:
            return 0
        if self._reach is not None:
            mask = 0
            for n, reach in enumerate(self._reach):
                if reach & target:
                    mask |= 1 << n
            return mask
        seen = target
        queue = deque(_bits(target))
        while queue:
            n = queue.popleft()
            for m in self.predecessors[n]:
                if not seen >> m & 1:
                    seen |= 1 << m
                    queue.append(m)
        return seen

    def reachable(self, node: int) -> int:
        if self._reach is not None:
            return self._reach[node]
        seen = 1 << node
        queue = deque([node])
        while queue:
            n = queue.popleft()
            for m in self.successors[n]:
                if not seen >> m & 1:
                    seen |= 1 << m
                    queue.append(m)
        return seen


def _columns(rows: list[int], width: int) -> list[int]:
    cols = [0] * width
    for p, row in enumerate(rows):
        for q in _bits(row):
            cols[q] |= 1 << p
    return cols


def _refine(challenger: _Side, defender: _Side, rows: list[int], coupling: list[int]) -> bool:
    """One pass of the functional over pairs (challenger, defender); True if changed.

    `rows[p]` relates challenger node p to defender nodes and `coupling[p]`
    holds the defender nodes related to p in the opposite orientation.
    """
    changed = False
    allowed: dict[int, int] = {}
    for p in range(len(challenger)):
        if not rows[p]:
            continue
        mask = rows[p]
        for p_next in challenger.successors[p]:
            if p_next not in allowed:
                allowed[p_next] = defender.reaching(rows[p_next]) & defender.reaching(coupling[p_next])
            mask &= allowed[p_next]
            if not mask:
                break
        if mask != rows[p]:
            rows[p] = mask
            changed = True
    return changed


@dataclass
class CoupledRelation:
    u: UnionGraph
    forward: list[int]
    backward: list[int]
    rounds: int

    def related(self, p: int, q: int) -> bool:
        """(p, q) with p local to the first graph and q local to the second."""
        return bool(self.forward[p] >> q & 1)

    def related_back(self, q: int, p: int) -> bool:
        return bool(self.backward[q] >> p & 1)

    def equivalent(self, p: int, q: int) -> bool:
        return self.related(p, q) and self.related_back(q, p)


def coupled_relation(g1: ReductionGraph, g2: ReductionGraph) -> CoupledRelation:
    """Largest coupled simulation contained in the pairs between g1 and g2."""
    u = union(g1, g2)
    left, right = _Side(u, 0), _Side(u, 1)
    forward = [
        sum(1 << q for q in range(len(right)) if sp.simulated_by(right.signature[q]))
        for sp in left.signature
    ]
    backward = [
        sum(1 << p for p in range(len(left)) if sq.simulated_by(left.signature[p]))
        for sq in right.signature
    ]
    rounds = 0
    while True:
        rounds += 1
        fwd_changed = _refine(left, right, forward, _columns(backward, len(left)))
        bwd_changed = _refine(right, left, backward, _columns(forward, len(right)))
        if not (fwd_changed or bwd_changed):
            break
    logging.debug(f"Coupled simulation stable after {rounds} rounds.")
    return CoupledRelation(u, forward, backward, rounds)


def audit_coupled(relation: CoupledRelation) -> list[tuple[str, int, int]]:
    """Re-validate both orientations of `relation` clause by clause.

    Weak reach comes from networkx descendants on each graph, independently of
    the bitset closures used by the fixpoint.
    """
    u = relation.u
    g = u.digraph()
    sides = (u.members(0), u.members(1))

    def weak(side: int, local: int) -> set[int]:
        n = sides[side][local]
        return {m - sides[side].start for m in nx.descendants(g, n)} | {local}

    def related(side: int, a: int, b: int) -> bool:
        rows = relation.forward if side == 0 else relation.backward
        return bool(rows[a] >> b & 1)

    violations = []
    for side, rows in ((0, relation.forward), (1, relation.backward)):
        other = 1 - side
        for a, row in enumerate(rows):
            for b in _bits(row):
                if not u.signature[sides[side][a]].simulated_by(u.signature[sides[other][b]]):
                    violations.append(("signature", a, b))
                    continue
                reach_b = weak(other, b)
                for a_next in u.successors[sides[side][a]]:
                    a_next -= sides[side].start
                    if not any(related(side, a_next, x) for x in reach_b):
                        violations.append(("simulation", a, b))
                    elif not any(related(other, x, a_next) for x in reach_b):
                        violations.append(("coupling", a, b))
    return violations


def coupled_sim_check(
    g1: ReductionGraph,
    g2: ReductionGraph,
    s1: int | None = None,
    s2: int | None = None,
) -> Verdict:
    """Whether node `s1` of `g1` and node `s2` of `g2` are coupled similar."""
    if g1.truncated or g2.truncated:
        cause = g1.truncation_cause if g1.truncated else g2.truncation_cause
        return Verdict.inconclusive(f"truncated graph: {cause}")
    s1 = g1.root if s1 is None else s1
    s2 = g2.root if s2 is None else s2
    relation = coupled_relation(g1, g2)
    there, back = relation.related(s1, s2), relation.related_back(s2, s1)
    if there and back:
        audited = len(relation.u) <= AUDIT_LIMIT
        if audited:
            violations = audit_coupled(relation)
            if violations:
                logging.error(f"Coupled simulation self-audit found {len(violations)} violations.")
                return Verdict.inconclusive(f"self-audit failed at {violations[0]}")
        pairs = [(p, q) for p in range(len(relation.forward)) for q in _bits(relation.forward[p])]
        return Verdict.holds(pairs, rounds=relation.rounds, audited=audited)
    u = relation.u
    clause = "signature"
    sig1, sig2 = u.signature[u.node(0, s1)], u.signature[u.node(1, s2)]
    if sig1 == sig2:
        clause = "simulation" if not there else "simulation-back"
    return Verdict.fails(
        clause,
        left={"success": sig1.success, "barbs": sorted(map(str, sig1.barbs))},
        right={"success": sig2.success, "barbs": sorted(map(str, sig2.barbs))},
        forward=there,
        backward=back,
    )
