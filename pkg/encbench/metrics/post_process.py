import argparse
import json
import logging
from pathlib import Path
from typing import Iterable, Optional

import pandas as pd

from encbench.databases.criteria_table import CriteriaRecord

COLUMNS = ["term", "coordinator", "criterion", "result", "expected"]


def rows_from_records(records: Iterable[CriteriaRecord]) -> list[dict]:
    return [
        {
            "term": record.term_name,
            "coordinator": record.coordinator,
            "criterion": record.criterion,
            "result": record.result,
            "expected": record.expected or "true",
        }
        for record in records
    ]


def rows_from_reports(reports: list[dict] | dict) -> list[dict]:
    """Flatten one report object, or a list of them, as written by `encbench --report`."""
    if isinstance(reports, dict):
        reports = [reports]
    rows = []
    for report in reports:
        for criterion, verdict in report["criteria"].items():
            rows.append(
                {
                    "term": report["term"],
                    "coordinator": report["coordinator"],
                    "criterion": criterion,
                    "result": verdict["result"],
                    "expected": verdict.get("expected", "true"),
                }
            )
    return rows


def summarize(rows: list[dict]) -> dict:
    """Per criterion and coordinator: how many terms met, missed or left open their expectation."""
    df = pd.DataFrame(rows, columns=COLUMNS)
    if df.empty:
        return {"met": {}, "unexpected": {}, "inconclusive": {}, "failures": []}
    df["met"] = df["result"] == df["expected"]
    df["inconclusive"] = df["result"] == "inconclusive"
    df["unexpected"] = ~df["met"] & ~df["inconclusive"]

    def table(column: str) -> dict:
        pivot = df.pivot_table(
            index="criterion",
            columns="coordinator",
            values=column,
            aggfunc="sum",
            fill_value=0,
        )
        return {k: {c: int(v) for c, v in row.items()} for k, row in pivot.to_dict("index").items()}

    failures = df.loc[df["unexpected"], COLUMNS].to_dict("records")
    return {
        "met": table("met"),
        "unexpected": table("unexpected"),
        "inconclusive": table("inconclusive"),
        "failures": failures,
    }


def main(argv: Optional[list[str]] = None):
    parser = argparse.ArgumentParser(description="Summarize recorded criteria verdicts.")
    parser.add_argument(
        "--report",
        type=Path,
        help="A JSON report written by `encbench ... --report`; defaults to the database records.",
    )
    parser.add_argument(
        "--output",
        type=Path,
        default=Path("summary.json"),
        help="Where to write the summary.",
    )
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO)

    if args.report:
        with open(args.report, "r") as f:
            rows = rows_from_reports(json.load(f))
    else:
        rows = rows_from_records(CriteriaRecord.query())
    if not rows:
        logging.warning("No verdicts found, writing an empty summary.")
    summary = summarize(rows)

    with open(args.output, "w") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")
    logging.info(f"Summary of {len(rows)} verdicts saved to {args.output}")


if __name__ == "__main__":
    main()
