import pytest

from encbench.criteria.report import (
    ALL_CRITERIA,
    DEFAULT_CRITERIA,
    DISTRIBUTABILITY,
    EQUIVALENCE,
    STRICT,
    CriteriaReport,
    CriterionResult,
    resolve_criteria,
    run_criteria,
)
from encbench.encoder.coordinators import Coordinator
from encbench.equivalence.verdict import Result
from encbench.workflow.syntax import parse_source


def test_resolve_criteria_defaults_per_coordinator():
    central = resolve_criteria(["all"], Coordinator.CENTRAL)
    decentral = resolve_criteria(["all"], Coordinator.DECENTRAL)
    assert central == DEFAULT_CRITERIA[Coordinator.CENTRAL]
    assert STRICT in central and DISTRIBUTABILITY not in central
    assert DISTRIBUTABILITY in decentral and STRICT not in decentral
    assert set(central) | set(decentral) == set(ALL_CRITERIA)


def test_resolve_criteria_aliases_and_duplicates():
    assert resolve_criteria(["bisim", "coupled", "strict"], Coordinator.CENTRAL) == (
        EQUIVALENCE,
        STRICT,
    )


def test_resolve_criteria_rejects_unknown_names():
    with pytest.raises(ValueError, match="Unknown criterion"):
        resolve_criteria(["full-abstraction"], Coordinator.CENTRAL)


def test_meets_expectation():
    assert CriterionResult(result=Result.TRUE).meets_expectation
    assert not CriterionResult(result=Result.FALSE).meets_expectation
    assert CriterionResult(result=Result.FALSE, expected=Result.FALSE).meets_expectation
    assert not CriterionResult(result=Result.INCONCLUSIVE).meets_expectation


def test_run_criteria_dump():
    report = run_criteria(
        parse_source("a -> STOP [] b -> TICK"),
        Coordinator.CENTRAL,
        criteria=["bisim", "strict"],
        term="a -> STOP [] b -> TICK",
    )
    assert list(report.criteria) == [EQUIVALENCE, STRICT]
    assert report.exit_status() == 0
    assert report.expectations_met
    dump = report.dump()
    assert dump["schema"] == "v1"
    assert dump["coordinator"] == "central"
    assert dump["term"] == "a -> STOP [] b -> TICK"
    assert dump["criteria"][EQUIVALENCE]["result"] == "true"
    assert "seconds" in dump["criteria"][EQUIVALENCE]["stats"]
    assert "relation" not in dump["criteria"][EQUIVALENCE]
    assert dump["graph"]["source"]["truncated"] is False
    assert CriteriaReport.model_validate(dump).criteria.keys() == report.criteria.keys()


def test_run_criteria_adds_expected_criteria():
    report = run_criteria(
        parse_source("a -> STOP"),
        Coordinator.CENTRAL,
        criteria=["bisim"],
        expect={"strict": "true"},
    )
    assert list(report.criteria) == [EQUIVALENCE, STRICT]
    assert report.criteria[STRICT].expected is Result.TRUE


def test_run_criteria_exit_status_when_truncated():
    from encbench.explorer.build import Budget

    report = run_criteria(
        parse_source("mu X . a -> X"),
        Coordinator.CENTRAL,
        budget=Budget(max_states=2),
        criteria=["bisim"],
    )
    assert report.criteria[EQUIVALENCE].result is Result.INCONCLUSIVE
    assert report.criteria[EQUIVALENCE].cause
    assert report.exit_status() == 2
