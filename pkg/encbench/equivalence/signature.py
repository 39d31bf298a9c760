from __future__ import annotations

from typing import NamedTuple

from encbench.explorer.graph import ReductionGraph
from encbench.explorer.predicates import reachable_predicates


class ObservationSignature(NamedTuple):
    """What a state can eventually show: success and (translated) barbs.

    Source barbs and commit labels of target graphs are both source names, so
    signatures of the two calculi compare directly.
    """

    success: bool
    barbs: frozenset

    def simulated_by(self, other: ObservationSignature) -> bool:
        return self.success == other.success and self.barbs <= other.barbs


def signatures(graph: ReductionGraph) -> list[ObservationSignature]:
    predicates = reachable_predicates(graph)
    return [ObservationSignature(predicates[n].success, predicates[n].barbs) for n in graph.nodes()]
