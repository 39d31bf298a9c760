from pathlib import Path
from typing import ClassVar, Optional

from encbench.criteria.report import CriteriaReport, run_criteria
from encbench.databases.criteria_table import CriteriaRecord
from encbench.encoder.coordinators import Coordinator
from encbench.tasks.base_task import BaseTask


class CorpusTask(BaseTask):
    """
    Run the quality criteria of one corpus term under each of its coordinators.
    """

    record_type: ClassVar = CriteriaRecord
    task_config: ClassVar = Path(__file__).parent / "corpus_tasks.yml"
    criteria: Optional[list[str]] = None

    def __init__(self, task_name: str, **kwargs):
        super().__init__(task_name=task_name, **kwargs)

    def evaluate(self, coordinator: Coordinator) -> CriteriaReport:
        return run_criteria(
            self.source,
            coordinator,
            budget=self.budget,
            criteria=self.criteria,
            renamings=self.source_renamings(),
            expect=self.expect.get(coordinator),
            term=self.task_name,
        )
