from __future__ import annotations

import logging
import time
from typing import Any, Callable, Iterable, Mapping

from pydantic import BaseModel, ConfigDict, Field

from encbench.calculus import csp
from encbench.calculus.names import Name
from encbench.criteria.correspondence import (
    EncodingGraphs,
    check_aux_steps_preserve_equivalence,
    check_one_sim_step,
    check_operational_correspondence_strict,
    check_weak_operational_correspondence,
)
from encbench.criteria.distributability import check_distributability_preservation
from encbench.criteria.invariance import check_name_invariance_all
from encbench.criteria.observables import (
    check_barb_respect,
    check_divergence_reflection,
    check_static_barbs,
    check_static_success,
    check_success_sensitivity,
)
from encbench.encoder.coordinators import Coordinator
from encbench.equivalence.bisim import weak_bisim_check
from encbench.equivalence.coupled import coupled_sim_check
from encbench.equivalence.verdict import Result, Verdict, exit_status
from encbench.explorer.build import Budget
from encbench.explorer.predicates import check_aux_cycles, check_lock_invariants

SCHEMA_VERSION = "v1"

EQUIVALENCE = "source-target-equivalence"
STRICT = "operational-correspondence-strict"
WEAK = "weak-operational-correspondence"
DIVERGENCE = "divergence-reflection"
SUCCESS = "success-sensitivity"
BARBS = "barb-respect"
NAMES = "name-invariance"
DISTRIBUTABILITY = "distributability-preservation"
LOCKS = "lock-invariants"
AUX_CYCLES = "aux-cycles"
STATIC_BARBS = "static-barbs"
STATIC_SUCCESS = "static-success"
AUX_EQUIVALENCE = "aux-steps-preserve-equivalence"
ONE_SIM_STEP = "one-sim-step"

COMMON_CRITERIA = (
    EQUIVALENCE, WEAK, DIVERGENCE, SUCCESS, BARBS, NAMES, LOCKS,
    AUX_CYCLES, STATIC_BARBS, STATIC_SUCCESS, AUX_EQUIVALENCE,
)
DEFAULT_CRITERIA: dict[Coordinator, tuple[str, ...]] = {
    Coordinator.CENTRAL: COMMON_CRITERIA + (STRICT, ONE_SIM_STEP),
    Coordinator.DECENTRAL: COMMON_CRITERIA + (DISTRIBUTABILITY,),
}
ALL_CRITERIA = COMMON_CRITERIA + (STRICT, ONE_SIM_STEP, DISTRIBUTABILITY)
ALIASES = {"bisim": EQUIVALENCE, "coupled": EQUIVALENCE, "strict": STRICT, "weak": WEAK}


class CriterionResult(BaseModel):
    result: Result
    witness: dict[str, Any] | None = None
    cause: str | None = None
    stats: dict[str, Any] = Field(default_factory=dict)
    expected: Result | None = None

    @property
    def meets_expectation(self) -> bool:
        return self.result == (self.expected or Result.TRUE)


class CriteriaReport(BaseModel):
    """Verdicts of the quality criteria for one term under one coordinator."""

    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")
    term: str
    coordinator: Coordinator
    criteria: dict[str, CriterionResult]
    graph: dict[str, Any] = Field(default_factory=dict)
    model_config = ConfigDict(populate_by_name=True)

    def verdicts(self) -> list[Verdict]:
        return [Verdict(result=c.result) for c in self.criteria.values()]

    def exit_status(self) -> int:
        return exit_status(self.verdicts())

    @property
    def expectations_met(self) -> bool:
        return all(c.meets_expectation for c in self.criteria.values())

    def dump(self) -> dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True, exclude_none=True)


def resolve_criteria(names: Iterable[str], coordinator: Coordinator) -> tuple[str, ...]:
    resolved: list[str] = []
    for name in names:
        if name == "all":
            resolved.extend(DEFAULT_CRITERIA[coordinator])
            continue
        name = ALIASES.get(name, name)
        if name not in ALL_CRITERIA:
            raise ValueError(f"Unknown criterion {name!r}; choose from {', '.join(ALL_CRITERIA)}")
        resolved.append(name)
    return tuple(dict.fromkeys(resolved))


def _checks(
    p: csp.SourceProcess,
    graphs: EncodingGraphs,
    renamings: list[Mapping[Name, Name]] | None,
) -> dict[str, Callable[[], Verdict]]:
    coordinator, budget = graphs.coordinator, graphs.budget
    equivalence = weak_bisim_check if coordinator is Coordinator.CENTRAL else coupled_sim_check
    return {
        EQUIVALENCE: lambda: equivalence(graphs.source, graphs.target),
        STRICT: lambda: check_operational_correspondence_strict(p, budget, coordinator, graphs),
        WEAK: lambda: check_weak_operational_correspondence(p, budget, coordinator, graphs),
        DIVERGENCE: lambda: check_divergence_reflection(p, coordinator, budget, graphs),
        SUCCESS: lambda: check_success_sensitivity(p, coordinator, budget, graphs),
        BARBS: lambda: check_barb_respect(p, coordinator, budget, graphs),
        NAMES: lambda: check_name_invariance_all(p, coordinator, renamings),
        DISTRIBUTABILITY: lambda: check_distributability_preservation(p, budget, coordinator, graphs),
        LOCKS: lambda: check_lock_invariants(graphs.target),
        AUX_CYCLES: lambda: check_aux_cycles(graphs.target),
        STATIC_BARBS: lambda: check_static_barbs(p, coordinator, budget, graphs),
        STATIC_SUCCESS: lambda: check_static_success(p),
        AUX_EQUIVALENCE: lambda: check_aux_steps_preserve_equivalence(p, coordinator, budget, graphs),
        ONE_SIM_STEP: lambda: check_one_sim_step(p, budget, graphs),
    }


def run_criteria(
    p: csp.SourceProcess,
    coordinator: Coordinator,
    budget: Budget | None = None,
    criteria: Iterable[str] | None = None,
    renamings: list[Mapping[Name, Name]] | None = None,
    expect: Mapping[str, str] | None = None,
    term: str | None = None,
) -> CriteriaReport:
    """Run the requested criteria (default: those of `coordinator`) on `p`."""
    graphs = EncodingGraphs(p, coordinator, budget)
    expect = {ALIASES.get(k, k): Result(v) for k, v in (expect or {}).items()}
    names = resolve_criteria([*(criteria or ("all",)), *expect], coordinator)
    checks = _checks(p, graphs, renamings)
    results: dict[str, CriterionResult] = {}
    for name in names:
        start = time.perf_counter()
        verdict = checks[name]()
        elapsed = time.perf_counter() - start
        logging.info(f"{name} ({coordinator.value}): {verdict.result.value} in {elapsed:.2f}s")
        results[name] = CriterionResult(
            result=verdict.result,
            witness=verdict.witness,
            cause=verdict.cause,
            stats={**verdict.stats, "seconds": round(elapsed, 3)},
            expected=expect.get(name),
        )
    return CriteriaReport(
        term=term or repr(p),
        coordinator=coordinator,
        criteria=results,
        graph={
            **graphs.target.stats(),
            "flaggedEdges": graphs.target.flagged_edges,
            "source": graphs.source.stats(),
        },
    )
