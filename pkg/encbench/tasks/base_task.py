import logging
from functools import cached_property
from pathlib import Path
from typing import ClassVar, Optional

from pydantic import BaseModel, ConfigDict, Field

from encbench.calculus import csp
from encbench.calculus.names import Name, source_name
from encbench.criteria.report import CriteriaReport
from encbench.databases.base_table import BaseRecord
from encbench.encoder.coordinators import Coordinator
from encbench.equivalence.verdict import Result
from encbench.explorer.build import Budget
from encbench.workflow.syntax import parse_source


class BaseTask(BaseModel):
    """
    BaseTask is a base class for checking the quality criteria of an encoding on one source term.
    This class handles the task definition, execution, and result recording process. It checks if a task
    has already been run for a specific coordinator and manages the storage of verdicts in a database.
    Attributes:
        task_name: A string identifying the task.
        term: The source term in concrete syntax.
        definitions: Process names usable in `term`, mapped to their bodies in concrete syntax.
        coordinators: The coordinators the term is encoded with, one job each.
        budget: Exploration limits for all graphs of the task.
        renamings: Source renamings for the name invariance check, defaults to a generated set.
        expect: Per coordinator, the verdicts expected to differ from `true`.
        task_config: Class variable path to the task configuration file.
        record_type: Class variable defining the record type used for storing results.
    Methods:
        exist(coordinator): Checks if results for this task and coordinator already exist in the database.
        run_task(coordinator, record): Runs the criteria and optionally inserts the verdicts.
    """

    task_name: str
    term: str
    definitions: dict[str, str] = Field(default_factory=dict)
    coordinators: list[Coordinator] = [Coordinator.CENTRAL, Coordinator.DECENTRAL]
    budget: Budget = Field(default_factory=Budget)
    renamings: Optional[list[dict[str, str]]] = None
    expect: dict[Coordinator, dict[str, Result]] = Field(default_factory=dict)
    task_config: ClassVar[Path]
    model_config = ConfigDict(extra="allow")
    record_type: ClassVar = BaseRecord

    @cached_property
    def source(self) -> csp.SourceProcess:
        return parse_source(self.term, self.definitions)

    def source_renamings(self) -> list[dict[Name, Name]] | None:
        if self.renamings is None:
            return None
        return [
            {source_name(a): source_name(b) for a, b in sigma.items()}
            for sigma in self.renamings
        ]

    def evaluate(self, coordinator: Coordinator) -> CriteriaReport:
        raise NotImplementedError

    def exist(self, coordinator: Coordinator) -> bool:
        num_records = self.record_type.count(
            task_name=self.task_name, coordinator=coordinator.value
        )
        if num_records > 1:
            logging.info(
                f"{num_records} records found for task {self.task_name} ({coordinator.value})"
            )
        return num_records >= 1

    def run_task(
        self, coordinator: Coordinator, record: bool = False
    ) -> CriteriaReport | None:
        if record and self.exist(coordinator):
            logging.info(
                f"TASK {self.task_name} ({coordinator.value}) record found in database, SKIPPING."
            )
            return None
        report = self.evaluate(coordinator)
        summary = {name: c.result.value for name, c in report.criteria.items()}
        logging.info(f"TASK {self.task_name} ({coordinator.value}) OUTPUT: {summary}")
        if record:
            logging.info(f"TASK {self.task_name} ({coordinator.value}) INSERTING.")
            for name, criterion in report.criteria.items():
                self.record_type(
                    task_name=self.task_name,
                    term_name=report.term,
                    coordinator=coordinator.value,
                    criterion=name,
                    result=criterion.result.value,
                    expected=(criterion.expected or Result.TRUE).value,
                    witness=criterion.witness,
                    cause=criterion.cause,
                    stats=criterion.stats,
                ).insert()
        return report
