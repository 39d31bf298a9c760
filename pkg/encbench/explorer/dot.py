from __future__ import annotations

import os
import tempfile
from pathlib import Path

import networkx as nx

from encbench.explorer.graph import ReductionGraph, StepClass
from encbench.explorer.predicates import reachable_predicates

_EDGE_STYLE = {
    StepClass.SIM: {"color": "red", "penwidth": "2"},
    StepClass.AUX: {"color": "gray50", "style": "dashed"},
    StepClass.SOURCE_TAU: {"color": "black"},
    StepClass.SOURCE_ACT: {"color": "blue"},
}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot_graph(graph: ReductionGraph) -> nx.MultiDiGraph:
    """Copy of `graph` carrying only DOT-ready string attributes."""
    predicates = reachable_predicates(graph)
    out = nx.MultiDiGraph(name=graph.kind)
    for node in graph.nodes():
        pred = predicates[node]
        label = f"{node}"
        if pred.barbs:
            label += "\\n⇓{" + ",".join(sorted(map(str, pred.barbs))) + "}"
        if graph.success(node):
            label += "\\n✓"
        attrs = {"label": _quote(label), "shape": "ellipse"}
        if node == graph.root:
            attrs["shape"] = "doublecircle"
        out.add_node(node, **attrs)
    for edge in graph.edges():
        text = edge.cls.value if edge.label is None else f"{edge.cls.value}:{edge.label}"
        out.add_edge(edge.source, edge.target, label=_quote(text), **_EDGE_STYLE[edge.cls])
    return out


def write_dot(graph: ReductionGraph, path: Path | str) -> None:
    """Write the graph as DOT, replacing `path` only once the file is complete."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    os.close(fd)
    try:
        nx.nx_pydot.write_dot(to_dot_graph(graph), tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
