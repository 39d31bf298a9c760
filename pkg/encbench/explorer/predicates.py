"""Reachability predicates and structural invariants of reduction graphs."""

from __future__ import annotations

import logging
from collections import deque
from typing import NamedTuple

import networkx as nx

from encbench.calculus.canonical import AtomKind, CanonicalState, lock_value
from encbench.calculus.names import Role
from encbench.equivalence.verdict import Verdict
from encbench.explorer.graph import ReductionGraph, StepClass


class NodePredicates(NamedTuple):
    barbs: frozenset
    success: bool


def detect_divergence(graph: ReductionGraph) -> bool | None:
    """Whether a cycle is reachable from the root; None on a truncated graph."""
    if graph.truncated:
        return None
    reachable = nx.descendants(graph.graph, graph.root) | {graph.root}
    return not nx.is_directed_acyclic_graph(graph.graph.subgraph(reachable))


def reachable_predicates(graph: ReductionGraph) -> dict[int, NodePredicates]:
    """Barbs and success reachable from every node, over the condensation."""
    condensed = nx.condensation(graph.graph)
    members = nx.get_node_attributes(condensed, "members")
    barbs: dict[int, frozenset] = {}
    success: dict[int, bool] = {}
    for component in reversed(list(nx.topological_sort(condensed))):
        b: set = set()
        s = False
        for node in members[component]:
            b |= graph.barbs(node)
            s = s or graph.success(node)
        for child in condensed.successors(component):
            b |= barbs[child]
            s = s or success[child]
        barbs[component] = frozenset(b)
        success[component] = s
    mapping = condensed.graph["mapping"]
    if graph.truncated:
        logging.warning(
            "Reachable predicates of a truncated graph are lower bounds."
        )
    return {n: NodePredicates(barbs[mapping[n]], success[mapping[n]]) for n in graph.nodes()}


def lock_instances(state: CanonicalState) -> dict[int, tuple[int, int]]:
    """Bound lock id -> (positive, negative) instantiation counts."""
    counts: dict[int, tuple[int, int]] = {}
    for template, env in state.atoms:
        if template.kind is not AtomKind.INPUT:
            continue
        value = lock_value(template)
        if value is None:
            continue
        lock = env[template.subject]
        if lock < 0 or state.roles[lock] is not Role.LOCK:
            continue
        pos, neg = counts.get(lock, (0, 0))
        counts[lock] = (pos + 1, neg) if value else (pos, neg + 1)
    return counts


def check_lock_invariants(graph: ReductionGraph) -> Verdict:
    """Sum-lock invariants over every node of a target graph.

    Each lock has at most one positive instantiation, a positive instantiation
    never coexists with another one, and no lock becomes positive again after a
    negative instantiation was seen on any path to the node.
    """
    instances = [lock_instances(graph.states[n]) for n in graph.nodes()]
    for node, counts in enumerate(instances):
        for lock, (pos, neg) in counts.items():
            if pos > 1:
                return Verdict.fails("single-positive", node=node, lock=lock)
            if pos and neg:
                return Verdict.fails("positive-excludes-others", node=node, lock=lock)

    negative_seen: list[set[int]] = [set() for _ in graph.nodes()]
    queue = deque(graph.nodes())
    while queue:
        node = queue.popleft()
        carried = negative_seen[node] | {
            lock for lock, (_, neg) in instances[node].items() if neg
        }
        for edge in graph.out_edges(node):
            mapped = {post for pre, post in edge.lock_map if pre in carried}
            if not mapped <= negative_seen[edge.target]:
                negative_seen[edge.target] |= mapped
                queue.append(edge.target)
    for node, seen in enumerate(negative_seen):
        for lock in seen:
            if instances[node].get(lock, (0, 0))[0]:
                return Verdict.fails("no-positive-after-negative", node=node, lock=lock)
    if graph.truncated:
        return Verdict.inconclusive(graph.truncation_cause or "truncated graph")
    return Verdict.holds(locks=sum(len(c) for c in instances))


def check_aux_cycles(graph: ReductionGraph) -> Verdict:
    """Every cycle of a target graph contains a simulation step."""
    aux_only = nx.DiGraph()
    aux_only.add_nodes_from(graph.nodes())
    aux_only.add_edges_from(
        (e.source, e.target) for e in graph.edges() if e.cls is StepClass.AUX
    )
    try:
        cycle = nx.find_cycle(aux_only)
    except nx.NetworkXNoCycle:
        if graph.truncated:
            return Verdict.inconclusive(graph.truncation_cause or "truncated graph")
        return Verdict.holds()
    return Verdict.fails("aux-only-cycle", cycle=[list(step) for step in cycle])
