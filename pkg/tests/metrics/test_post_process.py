import json

from encbench.metrics.post_process import main, rows_from_records, rows_from_reports, summarize


def test_rows_from_records(criteria_records):
    rows = rows_from_records(criteria_records)
    assert len(rows) == 4
    assert rows[3] == {
        "term": "recursion",
        "coordinator": "decentral",
        "criterion": "source-target-equivalence",
        "result": "inconclusive",
        "expected": "true",
    }


def test_rows_from_reports():
    report = {
        "schema": "v1",
        "term": "a -> STOP",
        "coordinator": "central",
        "criteria": {
            "barb-respect": {"result": "true", "stats": {}},
            "operational-correspondence-strict": {"result": "false", "expected": "false"},
        },
    }
    rows = rows_from_reports(report)
    assert rows == rows_from_reports([report])
    assert [r["expected"] for r in rows] == ["true", "false"]


def test_summarize(criteria_records):
    summary = summarize(rows_from_records(criteria_records))
    assert summary["met"]["operational-correspondence-strict"] == {"central": 1, "decentral": 1}
    assert summary["unexpected"]["distributability-preservation"]["central"] == 1
    assert summary["inconclusive"]["source-target-equivalence"]["decentral"] == 1
    assert [f["term"] for f in summary["failures"]] == ["interleaving"]


def test_summarize_empty():
    assert summarize([]) == {"met": {}, "unexpected": {}, "inconclusive": {}, "failures": []}


def test_main_reads_records(mock_criteria_query, tmp_path):
    output = tmp_path / "summary.json"
    main(["--output", str(output)])
    mock_criteria_query.assert_called_once_with()
    assert json.loads(output.read_text())["failures"][0]["criterion"] == (
        "distributability-preservation"
    )


def test_main_reads_report(tmp_path):
    report = tmp_path / "report.json"
    report.write_text(
        json.dumps(
            [
                {
                    "term": "t",
                    "coordinator": "decentral",
                    "criteria": {"name-invariance": {"result": "true"}},
                }
            ]
        )
    )
    output = tmp_path / "summary.json"
    main(["--report", str(report), "--output", str(output)])
    assert json.loads(output.read_text())["met"] == {"name-invariance": {"decentral": 1}}
