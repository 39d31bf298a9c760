import pytest

from encbench.equivalence.verdict import Result, Verdict, combine, exit_status

TRUE = Verdict.holds()
FALSE = Verdict.fails("barbs", source=["a"], target=[])
OPEN = Verdict.inconclusive("target graph truncated: max_states")


@pytest.mark.parametrize(
    "verdicts, status",
    [
        ([], 0),
        ([TRUE, TRUE], 0),
        ([TRUE, OPEN], 2),
        ([OPEN, FALSE], 1),
        ([FALSE, TRUE], 1),
    ],
)
def test_exit_status(verdicts, status):
    assert exit_status(verdicts) == status


def test_exit_status_ignores_order():
    assert exit_status([OPEN, FALSE, TRUE]) == exit_status([TRUE, FALSE, OPEN])


def test_combine_prefers_false_then_inconclusive():
    assert combine([OPEN, FALSE]) is FALSE
    assert combine([TRUE, OPEN]) is OPEN
    assert combine([TRUE]).is_true


def test_relation_is_not_serialized():
    verdict = Verdict.holds([(1, 0), (0, 0)], blocks=1)
    assert verdict.relation == [(0, 0), (1, 0)]
    dumped = verdict.model_dump(mode="json", exclude_none=True)
    assert dumped == {"result": "true", "stats": {"blocks": 1}}
    assert Verdict.fails("signature").witness == {"clause": "signature"}
    assert OPEN.result is Result.INCONCLUSIVE
