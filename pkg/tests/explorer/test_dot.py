import networkx as nx

from encbench.calculus import csp
from encbench.encoder.coordinators import Coordinator
from encbench.explorer.build import build_source_graph
from encbench.explorer.dot import to_dot_graph, write_dot

from tests.explorer.test_build import target_graph


def test_write_dot(tmp_path):
    path = tmp_path / "div.dot"
    write_dot(target_graph("DIV", Coordinator.CENTRAL), path)
    text = path.read_text()
    assert "digraph" in text
    assert "red" in text
    assert not list(tmp_path.glob("*.tmp"))


def test_root_and_barbs_are_marked(term_e):
    dot = to_dot_graph(build_source_graph(term_e))
    assert isinstance(dot, nx.MultiDiGraph)
    root = dot.nodes[0]
    assert root["shape"] == "doublecircle"
    assert "o,p,q" in root["label"]


def test_success_is_marked():
    dot = to_dot_graph(build_source_graph(csp.Success()))
    assert "✓" in dot.nodes[0]["label"]
