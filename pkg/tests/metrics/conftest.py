import pytest
from unittest.mock import patch

from encbench.databases.criteria_table import CriteriaRecord

RECORDS = [
    CriteriaRecord(
        id=1,
        task_name="E",
        term_name="E",
        coordinator="central",
        criterion="operational-correspondence-strict",
        result="true",
        expected="true",
        create_time=None,
    ),
    CriteriaRecord(
        id=2,
        task_name="E",
        term_name="E",
        coordinator="decentral",
        criterion="operational-correspondence-strict",
        result="false",
        expected="false",
        witness={"clause": "source-step"},
        create_time=None,
    ),
    CriteriaRecord(
        id=3,
        task_name="interleaving",
        term_name="interleaving",
        coordinator="central",
        criterion="distributability-preservation",
        result="true",
        expected="false",
        create_time=None,
    ),
    CriteriaRecord(
        id=4,
        task_name="recursion",
        term_name="recursion",
        coordinator="decentral",
        criterion="source-target-equivalence",
        result="inconclusive",
        expected=None,
        cause="Target graph truncated",
        create_time=None,
    ),
]


@pytest.fixture
def mock_criteria_query():
    with patch.object(CriteriaRecord, "query") as mock_method:
        mock_method.return_value = RECORDS
        yield mock_method


@pytest.fixture
def criteria_records():
    return RECORDS
