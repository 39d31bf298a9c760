from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from encbench.equivalence.signature import ObservationSignature, signatures
from encbench.explorer.graph import ReductionGraph


@dataclass
class UnionGraph:
    """Disjoint union of reduction graphs with global node ids.

    Node `n` of the `i`-th graph is global node `offsets[i] + n`. Only the
    strong step relation and the observation signatures are kept.
    """

    graphs: list[ReductionGraph]
    offsets: list[int]
    successors: list[tuple[int, ...]]
    signature: list[ObservationSignature]
    _digraph: nx.DiGraph | None = field(default=None, repr=False)

    def node(self, graph_index: int, node: int) -> int:
        return self.offsets[graph_index] + node

    def root(self, graph_index: int) -> int:
        return self.node(graph_index, self.graphs[graph_index].root)

    def members(self, graph_index: int) -> range:
        start = self.offsets[graph_index]
        return range(start, start + self.graphs[graph_index].node_count)

    def locate(self, node: int) -> tuple[int, int]:
        for i in reversed(range(len(self.offsets))):
            if node >= self.offsets[i]:
                return i, node - self.offsets[i]
        raise IndexError(node)

    def __len__(self) -> int:
        return len(self.successors)

    @property
    def truncated(self) -> bool:
        return any(g.truncated for g in self.graphs)

    @property
    def truncation_cause(self) -> str | None:
        for g in self.graphs:
            if g.truncated:
                return f"{g.kind} graph truncated: {g.truncation_cause}"
        return None

    def digraph(self) -> nx.DiGraph:
        if self._digraph is None:
            g = nx.DiGraph()
            g.add_nodes_from(range(len(self)))
            g.add_edges_from((u, v) for u, succ in enumerate(self.successors) for v in succ)
            self._digraph = g
        return self._digraph


def union(*graphs: ReductionGraph) -> UnionGraph:
    offsets: list[int] = []
    successors: list[tuple[int, ...]] = []
    signature: list[ObservationSignature] = []
    for graph in graphs:
        offset = len(successors)
        offsets.append(offset)
        for node in graph.nodes():
            successors.append(tuple(sorted({offset + v for v in graph.successors(node)})))
        signature.extend(signatures(graph))
    return UnionGraph(list(graphs), offsets, successors, signature)
