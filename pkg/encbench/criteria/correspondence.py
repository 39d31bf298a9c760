"""Operational correspondence between a source term and its encoding.

All checks share one `EncodingGraphs`: the source graph of the term, and for
every source state S′ the target graph of ⟦S′⟧ under the same renaming policy.
The graph of the encoded term itself is the one of the source root.
"""

from __future__ import annotations

import logging
from functools import cached_property

import networkx as nx

from encbench.calculus import csp
from encbench.encoder.coordinators import Coordinator, encode
from encbench.encoder.policy import RenamingPolicy, make_renaming_policy
from encbench.equivalence.bisim import equivalence_classes
from encbench.equivalence.coupled import CoupledRelation, coupled_relation
from encbench.equivalence.union import UnionGraph
from encbench.equivalence.verdict import Verdict
from encbench.explorer.build import Budget, build_source_graph, build_target_graph
from encbench.explorer.graph import ReductionGraph, StepClass, merge


class EncodingGraphs:
    def __init__(
        self,
        p: csp.SourceProcess,
        coordinator: Coordinator,
        budget: Budget | None = None,
        policy: RenamingPolicy | None = None,
    ):
        csp.check_well_formed(p)
        self.p = p
        self.coordinator = coordinator
        self.budget = budget or Budget()
        self.policy = policy or make_renaming_policy(csp.source_names(p))
        self._derivatives: dict[int, ReductionGraph] = {}

    @cached_property
    def source(self) -> ReductionGraph:
        return build_source_graph(self.p, self.budget)

    @property
    def target(self) -> ReductionGraph:
        return self.derivative(self.source.root)

    def derivative(self, node: int) -> ReductionGraph:
        """Target graph of the encoding of source node `node`."""
        if node not in self._derivatives:
            term = encode(self.source.states[node], self.coordinator, self.policy)
            self._derivatives[node] = build_target_graph(
                term, self.coordinator, self.budget, self.policy
            )
        return self._derivatives[node]

    def derivatives(self) -> list[ReductionGraph]:
        return [self.derivative(n) for n in self.source.nodes()]

    def truncation(self) -> str | None:
        if self.source.truncated:
            return f"source graph truncated: {self.source.truncation_cause}"
        for graph in self.derivatives():
            if graph.truncated:
                return f"target graph truncated: {graph.truncation_cause}"
        return None

    @cached_property
    def bisimulation(self) -> tuple[UnionGraph, list[int]]:
        """Partition of the source graph together with every derivative graph.

        Part 0 is the source graph and part 1 + i the derivative of node i.
        """
        return equivalence_classes(self.source, *self.derivatives())

    @cached_property
    def coupled(self) -> tuple[CoupledRelation, list[int]]:
        """Coupled simulation between the source graph and all derivatives merged."""
        merged, offsets = merge(self.derivatives())
        return coupled_relation(self.source, merged), offsets


def _target_nodes(graphs: EncodingGraphs) -> range:
    return graphs.target.nodes()


def check_operational_correspondence_strict(
    p: csp.SourceProcess,
    budget: Budget | None = None,
    coordinator: Coordinator = Coordinator.CENTRAL,
    graphs: EncodingGraphs | None = None,
) -> Verdict:
    """Complete and sound up to weak bisimilarity, without extending target runs."""
    graphs = graphs or EncodingGraphs(p, coordinator, budget)
    cause = graphs.truncation()
    if cause:
        return Verdict.inconclusive(cause)
    u, block = graphs.bisimulation
    root = graphs.source.root
    target_blocks = {block[u.node(1 + root, t)] for t in _target_nodes(graphs)}
    encoded = {n: block[u.root(1 + n)] for n in graphs.source.nodes()}

    for n, b in encoded.items():
        if b not in target_blocks:
            return Verdict.fails("complete", source_state=n)
    encoded_blocks = set(encoded.values())
    for t in _target_nodes(graphs):
        if block[u.node(1 + root, t)] not in encoded_blocks:
            barbs = graphs.target.barbs(t)
            logging.info(f"Target state {t} matches no encoded source derivative.")
            return Verdict.fails(
                "sound",
                target_state=t,
                reachable_barbs=sorted(map(str, u.signature[u.node(1 + root, t)].barbs)),
                immediate_barbs=sorted(map(str, barbs)),
            )
    return Verdict.holds(
        blocks=len(set(block)),
        source_states=graphs.source.node_count,
        target_states=graphs.target.node_count,
    )


def _coupled_matches(graphs: EncodingGraphs) -> tuple[list[set[int]], list[int]]:
    """Per target node of ⟦p⟧, the source nodes whose encoding it is coupled similar to.

    Uses S′ ≍ ⟦S′⟧ and transitivity; a source node whose encoding is not coupled
    similar to it is compared to the target graph directly.
    """
    relation, offsets = graphs.coupled
    root_offset = offsets[graphs.source.root]
    matches: list[set[int]] = [set() for _ in _target_nodes(graphs)]
    not_faithful = []
    for n in graphs.source.nodes():
        encoded_root = offsets[n] + graphs.derivative(n).root
        if not relation.equivalent(n, encoded_root):
            not_faithful.append(n)
            continue
        for t in _target_nodes(graphs):
            if relation.equivalent(n, root_offset + t):
                matches[t].add(n)
    for n in not_faithful:
        logging.warning(f"Source state {n} is not coupled similar to its encoding.")
        direct = coupled_relation(graphs.target, graphs.derivative(n))
        encoded_root = graphs.derivative(n).root
        for t in _target_nodes(graphs):
            if direct.equivalent(t, encoded_root):
                matches[t].add(n)
    return matches, not_faithful


def check_weak_operational_correspondence(
    p: csp.SourceProcess,
    budget: Budget | None = None,
    coordinator: Coordinator = Coordinator.DECENTRAL,
    graphs: EncodingGraphs | None = None,
) -> Verdict:
    """Complete, and weakly sound: every target state extends to an encoded derivative."""
    graphs = graphs or EncodingGraphs(p, coordinator, budget)
    cause = graphs.truncation()
    if cause:
        return Verdict.inconclusive(cause)
    matches, not_faithful = _coupled_matches(graphs)
    matched_sources = set().union(*matches) if matches else set()
    for n in graphs.source.nodes():
        if n not in matched_sources:
            return Verdict.fails("complete", source_state=n)
    good = {t for t, m in enumerate(matches) if m}
    g = graphs.target.graph
    extendable = set(good)
    for t in good:
        extendable |= nx.ancestors(g, t)
    for t in _target_nodes(graphs):
        if t not in extendable:
            return Verdict.fails("weakly-sound", target_state=t)
    return Verdict.holds(
        matched_target_states=len(good),
        target_states=graphs.target.node_count,
        unfaithful_source_states=not_faithful,
    )


def check_one_sim_step(
    p: csp.SourceProcess,
    budget: Budget | None = None,
    graphs: EncodingGraphs | None = None,
) -> Verdict:
    """Every source step S ⟼ S′ is simulated by aux*·sim·aux* into a state ≈ ⟦S′⟧."""
    graphs = graphs or EncodingGraphs(p, Coordinator.CENTRAL, budget)
    cause = graphs.truncation()
    if cause:
        return Verdict.inconclusive(cause)
    u, block = graphs.bisimulation
    for edge in graphs.source.edges():
        part = 1 + edge.source
        derivative = graphs.derivative(edge.source)
        wanted = block[u.root(1 + edge.target)]
        before = _aux_closure(derivative, {derivative.root})
        after = _aux_closure(
            derivative,
            {
                e.target
                for n in before
                for e in derivative.out_edges(n)
                if e.cls is StepClass.SIM
            },
        )
        if not any(block[u.node(part, t)] == wanted for t in after):
            return Verdict.fails(
                "one-sim-step", source_step=[edge.source, edge.target], label=str(edge.label)
            )
    return Verdict.holds(source_steps=graphs.source.edge_count)


def _aux_closure(graph: ReductionGraph, start: set[int]) -> set[int]:
    seen = set(start)
    stack = list(start)
    while stack:
        n = stack.pop()
        for e in graph.out_edges(n):
            if e.cls is StepClass.AUX and e.target not in seen:
                seen.add(e.target)
                stack.append(e.target)
    return seen


def check_aux_steps_preserve_equivalence(
    p: csp.SourceProcess,
    coordinator: Coordinator,
    budget: Budget | None = None,
    graphs: EncodingGraphs | None = None,
    sample: int = 500,
) -> Verdict:
    """Both ends of the first `sample` aux edges lie in one bisimulation block."""
    graphs = graphs or EncodingGraphs(p, coordinator, budget)
    if graphs.target.truncated:
        return Verdict.inconclusive(f"target graph truncated: {graphs.target.truncation_cause}")
    u, block = equivalence_classes(graphs.target)
    checked = 0
    for edge in graphs.target.edges():
        if edge.cls is not StepClass.AUX:
            continue
        if block[edge.source] != block[edge.target]:
            return Verdict.fails("aux-step", edge=[edge.source, edge.target])
        checked += 1
        if checked >= sample:
            break
    return Verdict.holds(aux_edges_checked=checked)
