"""Preservation of distributability, checked as commutation of simulations.

For every reachable source state and every pair of its steps that use
disjoint parts of the term, the target graph of the encoded state must
contain a node where both steps can be decided by edges consuming disjoint
atoms, and deciding them in either order must lead to the same node.
"""

from __future__ import annotations

import logging
from itertools import combinations

from encbench.calculus import csp
from encbench.criteria.correspondence import EncodingGraphs
from encbench.encoder.coordinators import Coordinator
from encbench.equivalence.verdict import Verdict
from encbench.explorer.build import Budget
from encbench.explorer.graph import Edge, ReductionGraph, StepClass, Witness


def decides(edge: Edge, label: csp.SourceLabel) -> bool:
    """Whether `edge` is the point of no return of a source step labelled `label`."""
    if edge.cls is not StepClass.SIM:
        return False
    if edge.label is not None:
        return edge.label == label
    return label is csp.TAU and edge.witness is Witness.CHOICE_CHANNEL


def distributable_pairs(p: csp.SourceProcess) -> list[tuple[csp.SourceStep, csp.SourceStep]]:
    return [
        (first, second)
        for first, second in combinations(csp.source_steps(p), 2)
        if csp.distributable(first, second)
    ]


def find_diamond(
    graph: ReductionGraph, first: csp.SourceLabel, second: csp.SourceLabel
) -> tuple[int, int, int] | None:
    """A node deciding both labels by independent edges that commute."""
    for node in graph.nodes():
        out = list(graph.out_edges(node))
        for e1 in (e for e in out if decides(e, first)):
            for e2 in (e for e in out if decides(e, second)):
                if e1 is e2 or e1.consumed & e2.consumed:
                    continue
                after_first = {
                    e.target for e in graph.out_edges(e1.target) if decides(e, second)
                }
                after_second = {
                    e.target for e in graph.out_edges(e2.target) if decides(e, first)
                }
                common = after_first & after_second
                if common:
                    return node, e1.target, min(common)
    return None


def check_distributability_preservation(
    p: csp.SourceProcess,
    budget: Budget | None = None,
    coordinator: Coordinator = Coordinator.DECENTRAL,
    graphs: EncodingGraphs | None = None,
) -> Verdict:
    """Operational sufficient condition for preserving distributability."""
    graphs = graphs or EncodingGraphs(p, coordinator, budget)
    if graphs.source.truncated:
        return Verdict.inconclusive(f"source graph truncated: {graphs.source.truncation_cause}")
    pairs_checked = 0
    for node in graphs.source.nodes():
        pairs = distributable_pairs(graphs.source.states[node])
        if not pairs:
            continue
        target = graphs.derivative(node)
        for first, second in pairs:
            pairs_checked += 1
            diamond = find_diamond(target, first.label, second.label)
            if diamond is None:
                if target.truncated:
                    return Verdict.inconclusive(
                        f"target graph truncated: {target.truncation_cause}"
                    )
                logging.info(
                    f"No commuting simulations of {first.label} and {second.label} "
                    f"from source state {node}."
                )
                return Verdict.fails(
                    "commutation",
                    source_state=node,
                    steps=[str(first.label), str(second.label)],
                )
    return Verdict.holds(pairs=pairs_checked, approximation="commutation")
