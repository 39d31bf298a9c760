from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterator, NamedTuple

import networkx as nx

from encbench.calculus.csp import TAU, SourceLabel


class StepClass(str, Enum):
    SOURCE_TAU = "sourceTau"
    SOURCE_ACT = "sourceAct"
    AUX = "aux"
    SIM = "sim"


class Witness(str, Enum):
    """Which clause decided the class of an edge."""

    SOURCE_RULE = "source-rule"
    NO_CLAUSE = "no-clause"
    OUTER_ACT_POSITIVE = "outermost-act-with-positive-lock"
    POSITIVE_LOCK = "positive-lock-consumption"
    CHOICE_CHANNEL = "mu-rep-var-step"
    PROBE_INCONCLUSIVE = "probe-inconclusive"


class Edge(NamedTuple):
    source: int
    target: int
    cls: StepClass
    witness: Witness
    label: SourceLabel | None = None
    consumed: frozenset[int] = frozenset()
    lock_map: tuple[tuple[int, int], ...] = ()

    @property
    def is_commit(self) -> bool:
        return self.label is not None and self.cls is not StepClass.AUX


@dataclass
class ReductionGraph:
    """Finite reduction graph over canonical states.

    Nodes are dense ints; the state of node `n` is `states[n]`. Edges live in a
    networkx MultiDiGraph keyed by (class, label), so two redexes of a state
    with the same outcome and the same class collapse into one edge. Commit
    edges also key on their consumed atoms.
    """

    kind: str
    graph: nx.MultiDiGraph = field(default_factory=nx.MultiDiGraph)
    states: list[Hashable] = field(default_factory=list)
    index: dict[Hashable, int] = field(default_factory=dict)
    root: int = 0
    truncated: bool = False
    truncation_cause: str | None = None
    flagged_edges: int = 0

    def add_state(self, state: Hashable, success: bool) -> tuple[int, bool]:
        node = self.index.get(state)
        if node is not None:
            return node, False
        node = len(self.states)
        self.states.append(state)
        self.index[state] = node
        self.graph.add_node(node, success=success, barbs=frozenset())
        return node, True

    def add_edge(self, edge: Edge) -> bool:
        # Commits with different resources stay apart for conflict analysis.
        key = (edge.cls.value, str(edge.label))
        if edge.is_commit:
            key += (tuple(sorted(edge.consumed, key=repr)),)
        if self.graph.has_edge(edge.source, edge.target, key=key):
            return False
        self.graph.add_edge(edge.source, edge.target, key=key, edge=edge)
        return True

    def truncate(self, cause: str) -> None:
        self.truncated = True
        self.truncation_cause = cause

    @property
    def node_count(self) -> int:
        return len(self.states)

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def nodes(self) -> range:
        return range(len(self.states))

    def edges(self) -> Iterator[Edge]:
        for _, _, data in self.graph.edges(data=True):
            yield data["edge"]

    def out_edges(self, node: int) -> Iterator[Edge]:
        for _, _, data in self.graph.out_edges(node, data=True):
            yield data["edge"]

    def successors(self, node: int) -> Iterator[int]:
        return self.graph.successors(node)

    def success(self, node: int) -> bool:
        return self.graph.nodes[node]["success"]

    def barbs(self, node: int) -> frozenset:
        return self.graph.nodes[node]["barbs"]

    def set_barbs(self, node: int, barbs: frozenset) -> None:
        self.graph.nodes[node]["barbs"] = barbs

    def count(self, cls: StepClass) -> int:
        return sum(1 for e in self.edges() if e.cls is cls)

    def stats(self) -> dict[str, int | bool]:
        return {
            "nodes": self.node_count,
            "edges": self.edge_count,
            "simEdges": self.count(StepClass.SIM),
            "auxEdges": self.count(StepClass.AUX),
            "truncated": self.truncated,
        }


def visible(label: SourceLabel | None) -> bool:
    return label is not None and label is not TAU


def merge(graphs: list[ReductionGraph], kind: str = "target") -> tuple[ReductionGraph, list[int]]:
    """Disjoint copy of `graphs` in one graph, with the node offset of each part.

    The root of the result is the root of the first part.
    """
    merged = ReductionGraph(kind=kind)
    offsets = []
    for graph in graphs:
        offset = merged.node_count
        offsets.append(offset)
        for node in graph.nodes():
            merged.states.append(graph.states[node])
            merged.graph.add_node(
                offset + node, success=graph.success(node), barbs=graph.barbs(node)
            )
        for edge in graph.edges():
            merged.add_edge(
                edge._replace(source=offset + edge.source, target=offset + edge.target)
            )
        if graph.truncated and not merged.truncated:
            merged.truncate(graph.truncation_cause or "truncated part")
    if graphs:
        merged.root = offsets[0] + graphs[0].root
    return merged, offsets
