from __future__ import annotations

import logging
from collections import deque

from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from encbench.calculus import csp
from encbench.calculus.canonical import (
    CanonicalState,
    Pending,
    RawState,
    Redex,
    Settings,
    fire,
    has_success,
    normalize,
    reader_carrier,
    redexes,
    settle,
    to_raw,
)
from encbench.calculus.ccs import TargetProcess
from encbench.calculus.errors import ProbeBudgetExceeded
from encbench.calculus.names import Name, Role
from encbench.encoder.coordinators import Coordinator
from encbench.encoder.policy import RenamingPolicy
from encbench.explorer.classify import (
    Decoder,
    announcement_fields,
    classify_step,
    decode_by_role,
)
from encbench.explorer.graph import Edge, ReductionGraph, StepClass, Witness, visible


class Budget(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_states: int = Field(default=50_000, gt=0)
    max_edges: int = Field(default=200_000, gt=0)
    probe_steps: int = Field(default=10_000, gt=0)
    prune: bool = True
    compress: bool = True

    def settings(self) -> Settings:
        return Settings(prune=self.prune, compress=self.compress, settle_limit=self.probe_steps)


def build_source_graph(
    p: csp.SourceProcess,
    budget: Budget | None = None,
    tau_only: bool = False,
    progress: bool = False,
) -> ReductionGraph:
    """Graph of every source term reachable from `p`.

    Edges are all labelled transitions unless `tau_only`, which keeps only the
    τ-steps (the reduction relation proper).
    """
    budget = budget or Budget()
    graph = ReductionGraph(kind="source")
    graph.root, _ = graph.add_state(p, csp.source_has_success(p))
    graph.set_barbs(graph.root, csp.source_barbs(p))
    frontier = deque([graph.root])
    with tqdm(desc="source states", disable=not progress) as bar:
        while frontier:
            node = frontier.popleft()
            bar.update(1)
            for step in csp.source_steps(graph.states[node]):
                if tau_only and step.label is not csp.TAU:
                    continue
                if graph.edge_count >= budget.max_edges:
                    graph.truncate(f"edge budget {budget.max_edges} exhausted")
                    return graph
                successor = graph.index.get(step.target)
                if successor is None:
                    if graph.node_count >= budget.max_states:
                        graph.truncate(f"state budget {budget.max_states} exhausted")
                        return graph
                    successor, _ = graph.add_state(
                        step.target, csp.source_has_success(step.target)
                    )
                    graph.set_barbs(successor, csp.source_barbs(step.target))
                    frontier.append(successor)
                cls = StepClass.SOURCE_TAU if step.label is csp.TAU else StepClass.SOURCE_ACT
                graph.add_edge(
                    Edge(node, successor, cls, Witness.SOURCE_RULE, step.label, step.resources)
                )
    return graph


def _record_pending(
    pre: CanonicalState, redex: Redex, post: RawState, start: int, decode: Decoder
) -> None:
    """Attach the label of a consumed announcement to its lock reader."""
    c, _, lock, _ = announcement_fields(pre, redex)
    name = pre.name(c)
    label = decode(name)
    if label is None:
        return
    carrier = reader_carrier(post, start, lock)
    if carrier is None:
        return
    post.pending.append(Pending(label if isinstance(label, Name) else name, carrier))


def initial_state(t: TargetProcess, settings: Settings) -> CanonicalState:
    raw = to_raw(t)
    if settings.compress:
        raw = settle(raw, settings)
    return normalize(raw, settings.prune)[0]


def target_step(
    pre: CanonicalState,
    redex: Redex,
    coordinator: Coordinator,
    decode: Decoder,
    budget: Budget,
) -> tuple[CanonicalState, StepClass, Witness, object, tuple[tuple[int, int], ...]]:
    """Successor of one redex with its class, witness, commit label and lock map."""
    settings = budget.settings()
    post, start = fire(pre, redex)
    cls, witness, label = classify_step(
        pre, redex, post, start, coordinator, decode, budget.probe_steps
    )
    if coordinator is Coordinator.DECENTRAL and pre.role(redex.channel) is Role.OUTER_ACT:
        _record_pending(pre, redex, post, start, decode)
    if settings.compress:
        post = settle(post, settings)
    successor, idmap = normalize(post, settings.prune)
    lock_map = tuple(
        (i, idmap[i])
        for i, role in enumerate(pre.roles)
        if role is Role.LOCK and i in idmap
    )
    return successor, cls, witness, label, lock_map


def build_target_graph(
    t: TargetProcess,
    coordinator: Coordinator,
    budget: Budget | None = None,
    policy: RenamingPolicy | None = None,
    progress: bool = False,
) -> ReductionGraph:
    """Canonical-state graph of an encoded term with classified edges.

    Commit labels are decoded with `policy`, or from the reference-name suffix
    when no policy is given.
    """
    budget = budget or Budget()
    decode = policy.source_of if policy is not None else decode_by_role
    graph = ReductionGraph(kind="target")
    root = initial_state(t, budget.settings())
    graph.root, _ = graph.add_state(root, has_success(root))
    frontier = deque([graph.root])
    with tqdm(desc="target states", disable=not progress) as bar:
        while frontier and not graph.truncated:
            node = frontier.popleft()
            bar.update(1)
            state = graph.states[node]
            for redex in redexes(state):
                if graph.edge_count >= budget.max_edges:
                    graph.truncate(f"edge budget {budget.max_edges} exhausted")
                    break
                try:
                    successor, cls, witness, label, lock_map = target_step(
                        state, redex, coordinator, decode, budget
                    )
                except ProbeBudgetExceeded as e:
                    graph.truncate(str(e))
                    break
                target = graph.index.get(successor)
                if target is None:
                    if graph.node_count >= budget.max_states:
                        graph.truncate(f"state budget {budget.max_states} exhausted")
                        break
                    target, _ = graph.add_state(successor, has_success(successor))
                    frontier.append(target)
                consumed = (
                    frozenset({redex.output})
                    if redex.replicated
                    else frozenset({redex.output, redex.input})
                )
                if witness is Witness.PROBE_INCONCLUSIVE:
                    graph.flagged_edges += 1
                graph.add_edge(Edge(node, target, cls, witness, label, consumed, lock_map))
    if graph.truncated:
        logging.warning(f"Target graph truncated: {graph.truncation_cause}")
    attach_commit_barbs(graph)
    logging.info(
        f"Explored {coordinator.value} target graph: {graph.node_count} states, "
        f"{graph.edge_count} edges."
    )
    return graph


def attach_commit_barbs(graph: ReductionGraph) -> None:
    for node in graph.nodes():
        graph.set_barbs(
            node,
            frozenset(e.label for e in graph.out_edges(node) if e.is_commit and visible(e.label)),
        )
