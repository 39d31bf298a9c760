"""Success-sensitive, barb-respecting, weak reduction bisimilarity.

Computed by partition refinement on the disjoint union of the graphs: starting
from the partition by observation signature, a block is split by the set of
blocks its members reach weakly, until no block splits. Two states in the same
final block answer each other's strong steps with weak steps into the same
block, so the final partition is the largest bisimulation.
"""

from __future__ import annotations

import logging
from typing import Hashable, Iterable

import networkx as nx

from encbench.equivalence.union import UnionGraph, union
from encbench.equivalence.verdict import Verdict
from encbench.explorer.graph import ReductionGraph

AUDIT_LIMIT = 3_000


def _number(keys: list[Hashable]) -> list[int]:
    ids: dict[Hashable, int] = {}
    return [ids.setdefault(k, len(ids)) for k in keys]


def weak_reach_masks(u: UnionGraph, block: list[int]) -> list[int]:
    """Per node, the bitmask of blocks it reaches in zero or more steps."""
    condensed = nx.condensation(u.digraph())
    members = nx.get_node_attributes(condensed, "members")
    reach: dict[int, int] = {}
    for component in reversed(list(nx.topological_sort(condensed))):
        mask = 0
        for node in members[component]:
            mask |= 1 << block[node]
        for child in condensed.successors(component):
            mask |= reach[child]
        reach[component] = mask
    mapping = condensed.graph["mapping"]
    return [reach[mapping[n]] for n in range(len(u))]


def bisimulation_blocks(u: UnionGraph) -> list[int]:
    block = _number(list(u.signature))
    rounds = 0
    while True:
        rounds += 1
        reach = weak_reach_masks(u, block)
        refined = _number([(block[n], reach[n]) for n in range(len(u))])
        if max(refined, default=-1) == max(block, default=-1):
            logging.debug(f"Partition refinement stable after {rounds} rounds.")
            return refined
        block = refined


def audit_bisimulation(u: UnionGraph, block: list[int], nodes: Iterable[int]) -> list[tuple[int, int, int]]:
    """Re-check every clause of the partition on `nodes`; return violations.

    Independent of the refinement: weak reach is recomputed per node with
    networkx descendants.
    """
    g = u.digraph()
    reached: dict[int, set[int]] = {}

    def blocks_reached(n: int) -> set[int]:
        if n not in reached:
            reached[n] = {block[m] for m in nx.descendants(g, n)} | {block[n]}
        return reached[n]

    by_block: dict[int, list[int]] = {}
    for n in range(len(u)):
        by_block.setdefault(block[n], []).append(n)
    violations = []
    for x in nodes:
        for y in by_block[block[x]]:
            if u.signature[x] != u.signature[y]:
                violations.append((x, y, -1))
                continue
            for x_next in u.successors[x]:
                if block[x_next] not in blocks_reached(y):
                    violations.append((x, y, x_next))
    return violations


def _reachable(u: UnionGraph, *roots: int) -> set[int]:
    g = u.digraph()
    found = set(roots)
    for r in roots:
        found |= nx.descendants(g, r)
    return found


def weak_bisim_check(
    g1: ReductionGraph,
    g2: ReductionGraph,
    s1: int | None = None,
    s2: int | None = None,
) -> Verdict:
    """Whether node `s1` of `g1` and node `s2` of `g2` are weakly bisimilar."""
    u = union(g1, g2)
    if u.truncated:
        return Verdict.inconclusive(u.truncation_cause)
    x = u.node(0, g1.root if s1 is None else s1)
    y = u.node(1, g2.root if s2 is None else s2)
    block = bisimulation_blocks(u)
    if block[x] != block[y]:
        return _distinguish(u, block, x, y)
    scope = _reachable(u, x, y)
    if len(scope) <= AUDIT_LIMIT:
        violations = audit_bisimulation(u, block, sorted(scope))
        if violations:
            logging.error(f"Bisimulation self-audit found {len(violations)} violations.")
            return Verdict.inconclusive(f"self-audit failed at {violations[0]}")
        audited = True
    else:
        audited = False
    representative: dict[int, int] = {}
    for n in sorted(scope):
        representative.setdefault(block[n], n)
    relation = [(representative[block[n]], n) for n in sorted(scope)]
    return Verdict.holds(
        relation, blocks=len(set(block)), states=len(u), audited=audited
    )


def _distinguish(u: UnionGraph, block: list[int], x: int, y: int) -> Verdict:
    sx, sy = u.signature[x], u.signature[y]
    if sx != sy:
        return Verdict.fails(
            "signature",
            left={"success": sx.success, "barbs": sorted(map(str, sx.barbs))},
            right={"success": sy.success, "barbs": sorted(map(str, sy.barbs))},
        )
    reach = weak_reach_masks(u, block)
    for a, b in ((x, y), (y, x)):
        for a_next in u.successors[a]:
            if not reach[b] >> block[a_next] & 1:
                return Verdict.fails(
                    "step", challenger=u.locate(a), step_to=u.locate(a_next), defender=u.locate(b)
                )
    return Verdict.fails("step", challenger=u.locate(x), defender=u.locate(y))


def equivalence_classes(*graphs: ReductionGraph) -> tuple[UnionGraph, list[int]]:
    """Union of `graphs` and its bisimulation block per global node."""
    u = union(*graphs)
    return u, bisimulation_blocks(u)
