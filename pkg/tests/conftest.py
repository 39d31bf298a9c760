import pytest
from unittest.mock import patch

from encbench.calculus import csp
from encbench.calculus.names import source_name
from encbench.databases.base_table import BaseRecord
from encbench.explorer.build import Budget
from encbench.workflow.syntax import parse_source

E_TEXT = "(o -> P1 [] p -> P2) |[o,p]| (o -> P3 [] p -> P4 [] q -> P5)"
E_DEFINITIONS = {f"P{i}": "STOP" for i in range(1, 6)}


@pytest.fixture
def a():
    return source_name("a")


@pytest.fixture
def b():
    return source_name("b")


@pytest.fixture
def term_e() -> csp.SourceProcess:
    return parse_source(E_TEXT, E_DEFINITIONS)


@pytest.fixture
def small_budget():
    return Budget(max_states=5_000, max_edges=20_000)


# Fixtures for TASKS
@pytest.fixture
def corpus_yml_data():
    return {
        "Example_task": {
            "term": "a -> STOP [] b -> TICK",
            "coordinators": ["central"],
            "expect": {"central": {"strict": "true"}},
        }
    }


@pytest.fixture
def corpus_task_data():
    return {
        "task_name": "taskA",
        "term": "a -> STOP",
        "coordinators": ["central", "decentral"],
    }


@pytest.fixture
def mock_record_count():
    with patch.object(BaseRecord, "count") as mock_method:
        yield mock_method


@pytest.fixture
def mock_record_query():
    with patch.object(BaseRecord, "query") as mock_method:
        yield mock_method


@pytest.fixture
def mock_record_insert():
    with patch.object(BaseRecord, "insert") as mock_method:
        yield mock_method
