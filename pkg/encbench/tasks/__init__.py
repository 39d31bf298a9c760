from encbench.tasks.corpus.corpus_tasks import CorpusTask

__all__ = [
    "CorpusTask",
]
