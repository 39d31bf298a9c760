from __future__ import annotations

from encbench.calculus import csp
from encbench.calculus.barbs import translated_barbs
from encbench.calculus.canonical import Settings, canonicalize, has_success
from encbench.calculus.errors import ProbeBudgetExceeded
from encbench.criteria.correspondence import EncodingGraphs
from encbench.encoder.coordinators import Coordinator
from encbench.encoder.inner import encode_inner
from encbench.encoder.policy import make_renaming_policy
from encbench.equivalence.verdict import Verdict
from encbench.explorer.build import Budget
from encbench.explorer.graph import StepClass
from encbench.explorer.predicates import detect_divergence, reachable_predicates

STATIC_SAMPLE = 2_000


def _names(barbs) -> list[str]:
    return sorted(map(str, barbs))


def check_divergence_reflection(
    p: csp.SourceProcess,
    coordinator: Coordinator,
    budget: Budget | None = None,
    graphs: EncodingGraphs | None = None,
) -> Verdict:
    graphs = graphs or EncodingGraphs(p, coordinator, budget)
    target = detect_divergence(graphs.target)
    source = detect_divergence(graphs.source)
    if target is None or source is None:
        return Verdict.inconclusive(graphs.truncation() or "truncated graph")
    if target and not source:
        return Verdict.fails("divergence", source_diverges=False, target_diverges=True)
    return Verdict.holds(source_diverges=source, target_diverges=target)


def check_success_sensitivity(
    p: csp.SourceProcess,
    coordinator: Coordinator,
    budget: Budget | None = None,
    graphs: EncodingGraphs | None = None,
) -> Verdict:
    graphs = graphs or EncodingGraphs(p, coordinator, budget)
    source = reachable_predicates(graphs.source)[graphs.source.root].success
    target = reachable_predicates(graphs.target)[graphs.target.root].success
    if source != target:
        if graphs.truncation():
            return Verdict.inconclusive(graphs.truncation())
        return Verdict.fails("success", source=source, target=target)
    if graphs.truncation() and not source:
        return Verdict.inconclusive(graphs.truncation())
    return Verdict.holds(success=source)


def check_barb_respect(
    p: csp.SourceProcess,
    coordinator: Coordinator,
    budget: Budget | None = None,
    graphs: EncodingGraphs | None = None,
) -> Verdict:
    graphs = graphs or EncodingGraphs(p, coordinator, budget)
    source = reachable_predicates(graphs.source)[graphs.source.root].barbs
    target = reachable_predicates(graphs.target)[graphs.target.root].barbs
    if graphs.truncation():
        return Verdict.inconclusive(graphs.truncation())
    if source != target:
        return Verdict.fails("barbs", source=_names(source), target=_names(target))
    return Verdict.holds(barbs=_names(source))


def check_static_barbs(
    p: csp.SourceProcess,
    coordinator: Coordinator,
    budget: Budget | None = None,
    graphs: EncodingGraphs | None = None,
) -> Verdict:
    """Translated barbs agree with source barbs before any simulation step.

    The translated barbs of the states reachable from the encoded root by aux
    steps must be the source barbs of the term, and on every sampled target
    state a probe-positive name must be a reachable commit label.
    """
    graphs = graphs or EncodingGraphs(p, coordinator, budget)
    target = graphs.target
    include_pending = coordinator is Coordinator.DECENTRAL
    decode = graphs.policy.source_of
    probe_steps = graphs.budget.probe_steps

    seen = {target.root}
    stack = [target.root]
    static: set = set()
    inconclusive = False
    while stack:
        node = stack.pop()
        barbs, gave_up = translated_barbs(target.states[node], decode, probe_steps, include_pending)
        static |= barbs
        inconclusive |= gave_up
        for edge in target.out_edges(node):
            if edge.cls is StepClass.AUX and edge.target not in seen:
                seen.add(edge.target)
                stack.append(edge.target)
    expected = csp.source_barbs(p)
    if static != expected and not inconclusive:
        return Verdict.fails("static-barbs", source=_names(expected), translated=_names(static))

    reachable = reachable_predicates(target)
    for node in list(target.nodes())[:STATIC_SAMPLE]:
        barbs, gave_up = translated_barbs(target.states[node], decode, probe_steps, include_pending)
        inconclusive |= gave_up
        missing = barbs - reachable[node].barbs
        if missing and not target.truncated:
            return Verdict.fails("probe-vs-graph", target_state=node, missing=_names(missing))
    if inconclusive or static != expected:
        return Verdict.inconclusive("a barb probe exhausted its budget")
    return Verdict.holds(barbs=_names(expected), aux_closure=len(seen))


def check_static_success(p: csp.SourceProcess) -> Verdict:
    """Unguarded success of a term and of its inner encoding coincide."""
    try:
        inner = encode_inner(p, make_renaming_policy(csp.source_names(p)))
        state = canonicalize(inner, Settings(compress=False))
    except ProbeBudgetExceeded as e:
        return Verdict.inconclusive(str(e))
    source, target = csp.source_has_success(p), has_success(state)
    if source != target:
        return Verdict.fails("static-success", source=source, target=target)
    return Verdict.holds(success=source)
