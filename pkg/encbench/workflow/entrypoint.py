import argparse
import json
import logging
import os
import sys
import tempfile
import traceback
from pathlib import Path
from typing import Optional, TypeAlias

import yaml
from tqdm import tqdm

from encbench.calculus import csp
from encbench.calculus.errors import IllFormedTermError, SourceSyntaxError
from encbench.criteria.report import ALL_CRITERIA, ALIASES, CriteriaReport, run_criteria
from encbench.encoder.coordinators import Coordinator, encode
from encbench.encoder.policy import make_renaming_policy
from encbench.explorer.build import Budget, build_source_graph, build_target_graph
from encbench.explorer.dot import write_dot
from encbench.tasks import CorpusTask
from encbench.workflow.syntax import parse_source, parse_target, print_source, print_target

# Exit status for unreadable input, unparsable terms and unwritable output.
EXIT_INPUT = 3

job_list: TypeAlias = list[tuple[CorpusTask, Coordinator]]


def write_json(payload, path: Path) -> None:
    """Write `payload` as JSON, replacing `path` only once the file is complete."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_term(args: argparse.Namespace) -> str:
    if args.file:
        return Path(args.file).read_text(encoding="utf-8")
    if args.term is None:
        raise ValueError("Give a term or --file PATH.")
    return args.term


def read_definitions(pairs: list[str] | None) -> dict[str, str]:
    definitions = {}
    for pair in pairs or []:
        name, sep, body = pair.partition("=")
        if not sep:
            raise ValueError(f"Definition {pair!r} is not of the form NAME=TERM.")
        definitions[name.strip()] = body
    return definitions


def source_term(args: argparse.Namespace) -> csp.SourceProcess:
    return parse_source(read_term(args), read_definitions(args.define))


def budget_of(args: argparse.Namespace) -> Budget:
    if args.budget is None:
        return Budget()
    return Budget(max_states=args.budget)


def gather_jobs(
    task_names: Optional[list[str]] = None,
    coordinators: Optional[list[Coordinator]] = None,
    config: Optional[Path] = None,
) -> job_list:
    """
    Gather (task, coordinator) jobs from the corpus file.
    """
    with open(config or CorpusTask.task_config, "r") as f:
        task_configs: dict[str, dict] = yaml.safe_load(f) or {}
    jobs: job_list = []
    for task_name, task_params in task_configs.items():
        if task_names and task_name not in task_names:
            continue
        task = CorpusTask(task_name=task_name, **(task_params or {}))
        for coordinator in task.coordinators:
            if coordinators and coordinator not in coordinators:
                continue
            jobs.append((task, coordinator))
    return jobs


def corpus_status(reports: list[CriteriaReport], failed_jobs: int) -> int:
    """Like the single-term status, except that an expected verdict counts as true."""
    results = {
        c.result.value
        for report in reports
        for c in report.criteria.values()
        if not c.meets_expectation
    }
    if "false" in results or "true" in results:
        return 1
    if failed_jobs:
        return EXIT_INPUT
    if "inconclusive" in results:
        return 2
    return 0


def submit_jobs_local(jobs: job_list, record: bool = False) -> tuple[list[CriteriaReport], int]:
    reports, failed = [], 0
    for task, coordinator in tqdm(jobs, desc="corpus", disable=len(jobs) < 2):
        logging.info(f"Running task={task.task_name}, coordinator={coordinator.value}")
        try:
            report = task.run_task(coordinator, record=record)
        except Exception as _:
            traceback.print_exc()
            logging.error(f"task={task.task_name}, coordinator={coordinator.value} failed!")
            failed += 1
            continue
        if report is not None:
            reports.append(report)
    return reports, failed


def cmd_parse(args: argparse.Namespace) -> int:
    if args.target:
        print(print_target(parse_target(read_term(args))))
    else:
        print(print_source(source_term(args)))
    return 0


def cmd_encode(args: argparse.Namespace) -> int:
    p = source_term(args)
    coordinator = Coordinator(args.coordinator)
    print(print_target(encode(p, coordinator, make_renaming_policy(csp.source_names(p)))))
    return 0


def cmd_explore(args: argparse.Namespace) -> int:
    p = source_term(args)
    coordinator = Coordinator(args.coordinator)
    budget = budget_of(args)
    if args.source:
        graph = build_source_graph(p, budget, progress=True)
    else:
        policy = make_renaming_policy(csp.source_names(p))
        graph = build_target_graph(encode(p, coordinator, policy), coordinator, budget, policy, True)
    stats = graph.stats()
    logging.info(f"Explored {graph.kind} graph: {stats}")
    if args.dot:
        write_dot(graph, args.dot)
        logging.info(f"DOT graph saved to {args.dot}")
    if args.report:
        write_json({"schema": "v1", "term": print_source(p), "graph": stats}, args.report)
    return 2 if graph.truncated else 0


def cmd_check(args: argparse.Namespace) -> int:
    p = source_term(args)
    coordinator = Coordinator(args.coordinator)
    report = run_criteria(
        p, coordinator, budget_of(args), criteria=args.criteria, term=print_source(p)
    )
    for name, criterion in report.criteria.items():
        detail = criterion.witness or criterion.cause or ""
        print(f"{name:36s} {criterion.result.value:12s} {detail}")
    if args.report:
        write_json(report.dump(), args.report)
    return report.exit_status()


def cmd_corpus(args: argparse.Namespace) -> int:
    coordinators = [Coordinator(args.coordinator)] if args.coordinator else None
    jobs = gather_jobs(args.tasks, coordinators, args.seed_corpus)
    if not jobs:
        logging.warning("No jobs found, exiting.")
        return 0
    logging.info(f"Found {len(jobs)} jobs.")
    if args.budget is not None:
        for task, _ in jobs:
            task.budget = task.budget.model_copy(update={"max_states": args.budget})
    reports, failed = submit_jobs_local(jobs, record=args.record)
    if args.report:
        write_json([report.dump() for report in reports], args.report)
    return corpus_status(reports, failed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Encode CSP into asynchronous CCS and check the encodings."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def term_command(name: str, help: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help)
        sub.add_argument("term", nargs="?", help='The term, e.g. "a -> STOP [] b -> TICK".')
        sub.add_argument("--file", type=Path, help="Read the term from a file.")
        sub.add_argument(
            "--define",
            action="append",
            metavar="NAME=TERM",
            help="A process name usable in the term, e.g. --define P1=STOP.",
        )
        return sub

    def coordinator_flags(sub: argparse.ArgumentParser, default: Optional[str] = "central"):
        sub.add_argument(
            "--coordinator",
            choices=[c.value for c in Coordinator],
            default=default,
            help="The coordinator of the encoding.",
        )
        sub.add_argument("--budget", type=int, help="Maximal number of explored states.")

    parse = term_command("parse", "Parse and pretty-print a term.")
    parse.add_argument("--target", action="store_true", help="Parse a target term.")
    parse.set_defaults(run=cmd_parse)

    encode_cmd = term_command("encode", "Print the encoding of a source term.")
    coordinator_flags(encode_cmd)
    encode_cmd.set_defaults(run=cmd_encode)

    explore = term_command("explore", "Explore the reduction graph of an encoded term.")
    coordinator_flags(explore)
    explore.add_argument("--source", action="store_true", help="Explore the source graph instead.")
    explore.add_argument("--dot", type=Path, help="Write the graph as DOT.")
    explore.add_argument("--report", type=Path, help="Write graph statistics as JSON.")
    explore.set_defaults(run=cmd_explore)

    check = term_command("check", "Check quality criteria of the encoding of a term.")
    coordinator_flags(check)
    check.add_argument(
        "--criteria",
        nargs="*",
        choices=["all", *ALL_CRITERIA, *ALIASES],
        help="The criteria to check, default all of the coordinator.",
    )
    check.add_argument("--report", type=Path, help="Write the JSON report.")
    check.set_defaults(run=cmd_check)

    corpus = commands.add_parser("corpus", help="Run the criteria on every corpus term.")
    coordinator_flags(corpus, default=None)
    corpus.add_argument("--tasks", nargs="*", help="The task names in `corpus_tasks.yml`.")
    corpus.add_argument("--seed-corpus", type=Path, help="A corpus file replacing the default one.")
    corpus.add_argument("--record", action="store_true", help="Insert the verdicts into the database.")
    corpus.add_argument("--report", type=Path, help="Write all reports as one JSON list.")
    corpus.set_defaults(run=cmd_corpus)
    return parser


def run(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (OSError, yaml.YAMLError) as e:
        logging.error(f"I/O failure: {e}")
    except (SourceSyntaxError, IllFormedTermError) as e:
        logging.error(f"Invalid term: {e}")
    except ValueError as e:
        logging.error(e)
    return EXIT_INPUT


def main():
    logging.basicConfig(level=logging.INFO)
    sys.exit(run())


if __name__ == "__main__":
    main()
