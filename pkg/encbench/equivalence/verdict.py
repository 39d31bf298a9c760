from __future__ import annotations

from enum import Enum
from typing import Any, Iterable

from pydantic import BaseModel, Field


class Result(str, Enum):
    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"


class Verdict(BaseModel):
    """Outcome of one check.

    Attributes:
        result: true, false or inconclusive.
        witness: for false, the distinguishing states and the failing clause.
        cause: for inconclusive, why the check could not decide.
        relation: for true equivalence checks, the surviving pairs of node ids.
        stats: counters the check wants to report.
    """

    result: Result
    witness: dict[str, Any] | None = None
    cause: str | None = None
    relation: list[tuple[int, int]] | None = Field(default=None, exclude=True)
    stats: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def holds(cls, relation: Iterable[tuple[int, int]] | None = None, **stats: Any) -> Verdict:
        return cls(
            result=Result.TRUE,
            relation=sorted(relation) if relation is not None else None,
            stats=stats,
        )

    @classmethod
    def fails(cls, clause: str, **witness: Any) -> Verdict:
        return cls(result=Result.FALSE, witness={"clause": clause, **witness})

    @classmethod
    def inconclusive(cls, cause: str) -> Verdict:
        return cls(result=Result.INCONCLUSIVE, cause=cause)

    @property
    def is_true(self) -> bool:
        return self.result is Result.TRUE

    @property
    def is_false(self) -> bool:
        return self.result is Result.FALSE


def combine(verdicts: Iterable[Verdict]) -> Verdict:
    """Conjunction: the first false wins, then the first inconclusive."""
    verdicts = list(verdicts)
    for v in verdicts:
        if v.is_false:
            return v
    for v in verdicts:
        if v.result is Result.INCONCLUSIVE:
            return v
    return Verdict.holds()


def exit_status(verdicts: Iterable[Verdict]) -> int:
    results = {v.result for v in verdicts}
    if Result.FALSE in results:
        return 1
    if Result.INCONCLUSIVE in results:
        return 2
    return 0
